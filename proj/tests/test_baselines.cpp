#include <doctest.h>

#include "helpers.hpp"
#include "irsmec/baselines.hpp"

using namespace irsmec;

namespace {

ChannelRealization channels(const SystemConfig& cfg, std::uint64_t seed)
{
    return generate_channels(cfg, RandomStream(seed, "baselines").child("fading"));
}

SystemConfig small_config()
{
    SystemConfig cfg;
    cfg.irs_elements = 4;
    return cfg;
}

}  // namespace

TEST_CASE("scheme labels round-trip")
{
    CHECK(all_schemes().size() == 4);
    CHECK(scheme_label(Scheme::EfficiencyIrs) == "Efficiency-IRS");
    CHECK(scheme_label(Scheme::OmaIrs) == "OMA-IRS");
    CHECK(scheme_label(Scheme::OnlyOffIrs) == "OnlyOff-IRS");
    CHECK(scheme_label(Scheme::EfficiencyNoIrs) == "Efficiency-NoIRS");
    for (Scheme s : all_schemes()) {
        CHECK(scheme_from_label(scheme_label(s)) == s);
    }
    CHECK_FALSE(scheme_from_label("TDMA").has_value());
}

TEST_CASE("single user: OMA equals NOMA")
{
    SystemConfig cfg = small_config();
    cfg.users = 1;
    cfg.ue_positions = {{5.0, 75.0, 5.0}};
    for (std::uint64_t seed = 1; seed <= 2; ++seed) {
        const ChannelRealization real = channels(cfg, seed);
        const RandomStream stream(seed, "run");
        const SchemeResult noma = run_proposed(real, cfg, SolverOptions{}, stream);
        const SchemeResult oma = run_oma(real, cfg, SolverOptions{}, stream);
        CHECK(testing::rel_diff(oma.ee, noma.ee) <= 1e-6);
        const Allocation& a = noma.allocation;
        CHECK(testing::rel_diff(offload_rate(real, cfg, a, 0, Access::Fdma), offload_rate(real, cfg, a, 0)) <= 1e-12);
    }
}

TEST_CASE("two users: FDMA rates use half the band and half the noise")
{
    SystemConfig cfg = small_config();
    const ChannelRealization real = channels(cfg, 3);
    const SchemeResult oma = run_oma(real, cfg, SolverOptions{}, RandomStream(3, "run"));
    for (int k = 0; k < 2; ++k) {
        const double q = std::norm(composite_gain(real, k, oma.allocation.w, oma.allocation.m[k]));
        const double expected = 0.5e6 * std::log2(1.0 + oma.allocation.p[k] * q / (cfg.noise_power_w / 2.0));
        CHECK(testing::rel_diff(offload_rate(real, cfg, oma.allocation, k, Access::Fdma), expected) <= 1e-12);
    }
}

TEST_CASE("OnlyOff: no local computing")
{
    SystemConfig cfg = small_config();
    const ChannelRealization real = channels(cfg, 4);
    const SchemeResult r = run_onlyoff(real, cfg, SolverOptions{}, RandomStream(4, "run"));
    for (double f : r.allocation.f) {
        CHECK(f == 0.0);
    }
    for (const auto& it : r.trace.iterations) {
        for (double f : it.allocation.f) {
            CHECK(f == 0.0);
        }
    }
    double offload = 0.0;
    for (int k = 0; k < 2; ++k) {
        offload += offload_rate(real, cfg, r.allocation, k);
    }
    CHECK(testing::rel_diff(r.sum_rate, offload) <= 1e-12);
}

TEST_CASE("NoIRS: independent of the IRS size and direct-only")
{
    SystemConfig cfg = small_config();
    const ChannelRealization real = channels(cfg, 5);
    const SchemeResult a = run_noirs(real, cfg, SolverOptions{}, RandomStream(5, "run"));

    SystemConfig bigger = cfg;
    bigger.irs_elements = 16;
    const SchemeResult b = run_noirs(channels(bigger, 5), bigger, SolverOptions{}, RandomStream(5, "run"));
    CHECK(a.ee == b.ee);
    CHECK(a.sum_rate == b.sum_rate);

    const ChannelRealization direct = real.without_irs();
    for (int k = 0; k < 2; ++k) {
        const Complex g = composite_gain(direct, k, a.allocation.w, a.allocation.m[k]);
        CHECK(std::abs(g - std::conj(a.allocation.w(4)) * real.h_direct(k).dot(a.allocation.m[k])) <= 1e-18);
    }
}

TEST_CASE("scheme results are self-consistent")
{
    SystemConfig cfg = small_config();
    const ChannelRealization real = channels(cfg, 6);
    for (Scheme s : all_schemes()) {
        const SchemeResult r = run_scheme(s, real, cfg, SolverOptions{}, RandomStream(6, "run"));
        CHECK(r.label == scheme_label(s));
        CHECK(testing::rel_diff(r.ee, r.sum_rate / r.sum_power) <= 1e-9);
        CHECK(r.feasible);
    }
}
