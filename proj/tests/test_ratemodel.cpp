#include <doctest.h>

#include <numbers>

#include "helpers.hpp"
#include "irsmec/ratemodel.hpp"
#include "oracles.hpp"

using namespace irsmec;

namespace {

ChannelRealization scalar_channel(const std::vector<double>& amplitude)
{
    std::vector<CVector> hd;
    std::vector<CVector> hr;
    for (double a : amplitude) {
        hd.push_back(CVector::Constant(1, Complex(a, 0.0)));
        hr.push_back(CVector(0));
    }
    return ChannelRealization(hd, hr, CMatrix(0, 1));
}

Allocation scalar_allocation(const std::vector<double>& p, const std::vector<double>& f)
{
    Allocation a;
    a.p = p;
    a.f = f;
    a.m.assign(p.size(), CVector::Ones(1));
    a.w = CVector::Ones(1);
    return a;
}

struct Instance {
    SystemConfig cfg;
    ChannelRealization real;
    Allocation alloc;
    std::vector<double> theta;
};

Instance random_instance(int users, int n, int m, std::mt19937_64& rng)
{
    SystemConfig cfg;
    cfg.users = users;
    cfg.ue_positions.assign(users, {5.0, 60.0, 5.0});
    std::vector<CVector> hd;
    std::vector<CVector> hr;
    for (int k = 0; k < users; ++k) {
        hd.push_back(testing::random_vector(n, rng) * 1e-6);
        hr.push_back(testing::random_vector(m, rng) * 1e-3);
    }
    ChannelRealization real(hd, hr, testing::random_complex(m, n, rng) * 1e-4);
    Allocation a;
    std::uniform_real_distribution<double> up(0.01, 0.5);
    std::uniform_real_distribution<double> uf(1e8, 1.5e9);
    std::uniform_real_distribution<double> uth(0.0, 2.0 * std::numbers::pi);
    for (int k = 0; k < users; ++k) {
        a.p.push_back(up(rng));
        a.f.push_back(uf(rng));
        a.m.push_back(testing::random_vector(n, rng).normalized());
    }
    std::vector<double> theta(m);
    a.w = CVector(m + 1);
    for (int i = 0; i < m; ++i) {
        theta[i] = uth(rng);
        a.w(i) = std::polar(1.0, -theta[i]);
    }
    a.w(m) = 1.0;
    return {cfg, real, a, theta};
}

oracle::Params params_of(const SystemConfig& cfg)
{
    oracle::Params prm;
    prm.bandwidth = cfg.bandwidth_hz;
    prm.noise = cfg.noise_power_w;
    prm.cycles_per_bit = cfg.cycles_per_bit;
    prm.capacitance = cfg.capacitance;
    prm.circuit = cfg.circuit_power_w;
    prm.cap = cfg.power_cap_w;
    prm.rth = cfg.rate_threshold_bps;
    return prm;
}

// Gains and SIC order straight from the explicit reflection form.
std::pair<std::vector<double>, std::vector<int>> explicit_gains(const Instance& in)
{
    std::vector<double> q;
    std::vector<double> key;
    for (int k = 0; k < in.real.users(); ++k) {
        q.push_back(std::norm(
            oracle::theta_gain(in.real.h_direct(k), in.real.h_ue_irs(k), in.real.h_irs_ap(), in.theta, in.alloc.m[k])));
        key.push_back(oracle::identity_gain(in.real.h_direct(k), in.real.h_ue_irs(k), in.real.h_irs_ap()));
    }
    return {q, oracle::ascending_order(key)};
}

}  // namespace

TEST_CASE("sinr and offload rate: single-user examples")
{
    SystemConfig cfg;
    cfg.users = 1;
    cfg.ue_positions.resize(1);
    const double sigma = std::sqrt(cfg.noise_power_w);
    const ChannelRealization real = scalar_channel({sigma});

    Allocation a = scalar_allocation({1.0}, {0.0});
    CHECK(sinr(real, cfg, a, 0) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(offload_rate(real, cfg, a, 0) == doctest::Approx(1e6).epsilon(1e-12));
    CHECK(effective_gain(real, cfg, a, 0) == doctest::Approx(1.0).epsilon(1e-12));

    a.p[0] = 3.0;
    CHECK(offload_rate(real, cfg, a, 0) == doctest::Approx(2e6).epsilon(1e-12));

    a.p[0] = 0.0;
    CHECK(sinr(real, cfg, a, 0) == 0.0);
    CHECK(offload_rate(real, cfg, a, 0) == 0.0);

    const ChannelRealization dead = scalar_channel({0.0});
    CHECK(effective_gain(dead, cfg, scalar_allocation({1.0}, {0.0}), 0) == 0.0);
}

TEST_CASE("local rate, power and efficiency examples")
{
    SystemConfig cfg;
    CHECK(local_rate(1e9, 1e3) == doctest::Approx(1e6).epsilon(1e-12));
    CHECK(local_rate(0.0, 1e3) == 0.0);
    CHECK(local_rate(2.5e9, 1e3) == doctest::Approx(2.5e6).epsilon(1e-12));

    cfg.circuit_power_w = 0.19953;
    cfg.users = 1;
    cfg.ue_positions.resize(1);
    CHECK(total_power(scalar_allocation({0.0}, {0.0}), cfg, 0) == doctest::Approx(0.19953).epsilon(1e-12));
    CHECK(total_power(scalar_allocation({0.0}, {1e9}), cfg, 0) - 0.19953 == doctest::Approx(0.1).epsilon(1e-9));
    CHECK(total_power(scalar_allocation({0.5}, {1e9}), cfg, 0) == doctest::Approx(0.79953).epsilon(1e-12));

    // 1e6 bits/s locally (f = 1e9) at 1 W total with no offloading.
    cfg.circuit_power_w = 0.9;
    const ChannelRealization real = scalar_channel({1e-6});
    const Allocation a = scalar_allocation({0.0}, {1e9});
    CHECK(energy_efficiency(real, cfg, a) == doctest::Approx(1e6).epsilon(1e-12));
}

TEST_CASE("rates, powers and efficiency agree with the explicit reflection form")
{
    std::mt19937_64 rng(31);
    for (int trial = 0; trial < 50; ++trial) {
        const Instance in = random_instance(trial % 2 == 0 ? 2 : 3, 3, 4, rng);
        const auto [q, order] = explicit_gains(in);
        const oracle::Params prm = params_of(in.cfg);
        const auto noma = oracle::noma_rates(prm, order, in.alloc.p, q);
        const auto fdma = oracle::fdma_rates(prm, in.alloc.p, q);
        SystemConfig cfg = in.cfg;
        double total_rate = 0.0;
        double total_pow = 0.0;
        for (int k = 0; k < in.real.users(); ++k) {
            CHECK(testing::rel_diff(offload_rate(in.real, cfg, in.alloc, k), noma[k]) <= 1e-9);
            CHECK(testing::rel_diff(offload_rate(in.real, cfg, in.alloc, k, Access::Fdma), fdma[k]) <= 1e-9);
            CHECK(testing::rel_diff(effective_gain(in.real, cfg, in.alloc, k), q[k] / prm.noise) <= 1e-9);
            total_rate += noma[k] + in.alloc.f[k] / prm.cycles_per_bit;
            total_pow += oracle::user_power(prm, in.alloc.p[k], in.alloc.f[k]);
        }
        CHECK(testing::rel_diff(sum_rate(in.real, cfg, in.alloc), total_rate) <= 1e-9);
        CHECK(testing::rel_diff(sum_power(in.alloc, cfg), total_pow) <= 1e-12);
        CHECK(testing::rel_diff(energy_efficiency(in.real, cfg, in.alloc), total_rate / total_pow) <= 1e-9);

        // Telescoping: the sum of NOMA rates is one log of the total SNR.
        double snr = 0.0;
        double offload = 0.0;
        for (int k = 0; k < in.real.users(); ++k) {
            snr += in.alloc.p[k] * q[k] / prm.noise;
            offload += noma[k];
        }
        CHECK(testing::rel_diff(offload, prm.bandwidth * std::log2(1.0 + snr)) <= 1e-9);
    }
}

TEST_CASE("doubling every rate doubles the efficiency")
{
    std::mt19937_64 rng(32);
    Instance in = random_instance(2, 2, 3, rng);
    const double ee = energy_efficiency(in.real, in.cfg, in.alloc);
    in.cfg.bandwidth_hz *= 2.0;
    in.cfg.cycles_per_bit /= 2.0;
    CHECK(energy_efficiency(in.real, in.cfg, in.alloc) == doctest::Approx(2.0 * ee).epsilon(1e-12));
}

TEST_CASE("lemma1: examples and log-grid tightness")
{
    CHECK(lemma1_update(1.0) == 1.0);
    CHECK(lemma1_phi(1.0, 1.0) == doctest::Approx(0.0));
    CHECK(lemma1_update(2.0) == 0.5);
    CHECK(lemma1_phi(0.5, 2.0) == doctest::Approx(-std::log(2.0)).epsilon(1e-15));
    CHECK(lemma1_update(std::numbers::e) == doctest::Approx(1.0 / std::numbers::e).epsilon(1e-15));
    CHECK(lemma1_phi(1.0 / std::numbers::e, std::numbers::e) == doctest::Approx(-1.0).epsilon(1e-15));
    CHECK_THROWS_AS(lemma1_update(0.0), NumericDomainError);
    CHECK_THROWS_AS(lemma1_update(-1.0), NumericDomainError);

    for (double x : oracle::log_grid(1e-3, 1e3, 61)) {
        const double t = lemma1_update(x);
        CHECK(std::abs(lemma1_phi(t, x) + std::log(x)) <= 1e-9 * std::max(1.0, std::abs(std::log(x))));
        // Maximizer: neighbouring multipliers never do better.
        for (double s : {0.5, 0.9, 0.999, 1.001, 1.1, 2.0}) {
            CHECK(lemma1_phi(t * s, x) <= lemma1_phi(t, x));
        }
    }
}

TEST_CASE("surrogate rate: tight at the update, a lower bound elsewhere")
{
    std::mt19937_64 rng(33);
    for (int trial = 0; trial < 100; ++trial) {
        const Instance in = random_instance(2 + trial % 2, 3, 4, rng);
        AuxState aux;
        aux.t = tight_multipliers(in.real, in.cfg, in.alloc);
        for (int k = 0; k < in.real.users(); ++k) {
            const double exact = offload_rate(in.real, in.cfg, in.alloc, k);
            CHECK(std::abs(surrogate_rate(in.real, in.cfg, in.alloc, aux, k) - exact) <= 1e-9 * std::max(1.0, exact));
        }
        std::uniform_real_distribution<double> u(-3.0, 3.0);
        AuxState other = aux;
        for (double& t : other.t) {
            t *= std::pow(10.0, u(rng));
        }
        for (int k = 0; k < in.real.users(); ++k) {
            CHECK(surrogate_rate(in.real, in.cfg, in.alloc, other, k) <=
                  offload_rate(in.real, in.cfg, in.alloc, k) * (1.0 + 1e-12) + 1e-9);
        }
    }
}

TEST_CASE("surrogate rate: grid over t recovers the rate")
{
    std::mt19937_64 rng(34);
    for (int trial = 0; trial < 10; ++trial) {
        const Instance in = random_instance(2, 2, 3, rng);
        for (int k = 0; k < 2; ++k) {
            AuxState aux;
            aux.t = {1.0, 1.0};
            double best = -std::numeric_limits<double>::infinity();
            for (double t : oracle::log_grid(1e-3, 1e3, 200001)) {
                aux.t[k] = t;
                best = std::max(best, surrogate_rate(in.real, in.cfg, in.alloc, aux, k));
            }
            const double exact = offload_rate(in.real, in.cfg, in.alloc, k);
            CHECK(std::abs(best - exact) <= 1e-4 * std::max(1.0, exact));
        }
    }
}

TEST_CASE("tight multipliers: first decoded user and FDMA get t = 1")
{
    std::mt19937_64 rng(35);
    const Instance in = random_instance(2, 2, 3, rng);
    const auto t = tight_multipliers(in.real, in.cfg, in.alloc);
    CHECK(t[in.real.sic_order()[0]] == 1.0);
    CHECK(t[in.real.sic_order()[1]] < 1.0);
    CHECK(tight_multipliers(in.real, in.cfg, in.alloc, Access::Fdma) == std::vector<double>{1.0, 1.0});
}

TEST_CASE("sum rate is invariant to a global phase on w")
{
    std::mt19937_64 rng(36);
    for (int trial = 0; trial < 20; ++trial) {
        Instance in = random_instance(2, 3, 5, rng);
        const double base = sum_rate(in.real, in.cfg, in.alloc);
        in.alloc.w *= std::polar(1.0, 0.37 + trial);
        CHECK(testing::rel_diff(sum_rate(in.real, in.cfg, in.alloc), base) <= 1e-12);
    }
}

TEST_CASE("offload rate of the last decoded user is non-decreasing in its own power")
{
    std::mt19937_64 rng(37);
    for (int trial = 0; trial < 20; ++trial) {
        Instance in = random_instance(2, 2, 3, rng);
        const int last = in.real.sic_order().back();
        double previous = -1.0;
        for (double p : oracle::log_grid(1e-4, 1.0, 30)) {
            in.alloc.p[last] = p;
            const double r = offload_rate(in.real, in.cfg, in.alloc, last);
            CHECK(r >= previous);
            previous = r;
        }
    }
}

TEST_CASE("score_gains matches the independent surrogate evaluation")
{
    std::mt19937_64 rng(38);
    for (int trial = 0; trial < 30; ++trial) {
        Instance in = random_instance(2, 3, 4, rng);
        in.cfg.rate_threshold_bps = 0.0;
        const auto [q, order] = explicit_gains(in);
        AuxState aux;
        aux.t = {0.3 + 0.1 * trial, 0.7};
        aux.eta1 = 1e6 * (trial % 5);
        for (Access access : {Access::Noma, Access::Fdma}) {
            oracle::Surrogate s;
            s.prm = params_of(in.cfg);
            s.prm.cap = 1e9;
            s.order = order;
            s.t = aux.t;
            s.eta1 = aux.eta1;
            s.fdma = access == Access::Fdma;
            const GainScore score = score_gains(in.cfg, in.real.sic_order(), in.alloc.p, in.alloc.f, q, aux, access);
            const double expected = s.value(in.alloc.p, in.alloc.f, q, 1e300);
            CHECK(std::abs(score.objective - expected) <= 1e-9 * std::max(1.0, std::abs(expected)));
        }
    }
}
