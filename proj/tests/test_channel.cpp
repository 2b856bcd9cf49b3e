#include <doctest.h>

#include <numbers>

#include "helpers.hpp"
#include "irsmec/channel.hpp"
#include "oracles.hpp"

using namespace irsmec;

namespace {

// Direct-only single-antenna users with the given |h|.
ChannelRealization scalar_users(const std::vector<double>& amplitude)
{
    std::vector<CVector> hd;
    std::vector<CVector> hr;
    for (double a : amplitude) {
        hd.push_back(CVector::Constant(1, Complex(a, 0.0)));
        hr.push_back(CVector(0));
    }
    return ChannelRealization(hd, hr, CMatrix(0, 1));
}

ChannelRealization random_realization(int users, int n, int m, std::mt19937_64& rng)
{
    std::vector<CVector> hd;
    std::vector<CVector> hr;
    for (int k = 0; k < users; ++k) {
        hd.push_back(testing::random_vector(n, rng));
        hr.push_back(testing::random_vector(m, rng));
    }
    return ChannelRealization(hd, hr, testing::random_complex(m, n, rng));
}

}  // namespace

TEST_CASE("pathloss_gain: reference values")
{
    CHECK(pathloss_gain(1.0, 2.0) == doctest::Approx(1e-3).epsilon(1e-12));
    CHECK(pathloss_gain(1.0, 5.0) == doctest::Approx(1e-3).epsilon(1e-12));
    CHECK(pathloss_gain(10.0, 2.0) == doctest::Approx(1e-5).epsilon(1e-12));
    const double d = std::sqrt(25.0 + 64.0);  // (5,50,10) to (0,50,2)
    CHECK(distance({5, 50, 10}, {0, 50, 2}) == doctest::Approx(d).epsilon(1e-15));
    CHECK(pathloss_gain(d, 2.0) == doctest::Approx(1e-3 / 89.0).epsilon(1e-12));
    CHECK_THROWS_AS(pathloss_gain(0.0, 2.0), NumericDomainError);
    CHECK_THROWS_AS(pathloss_gain(-1.0, 2.0), NumericDomainError);
}

TEST_CASE("unit conversions at load")
{
    CHECK(dbm_to_watts(31.0) == doctest::Approx(1.2589254).epsilon(1e-7));
    CHECK(dbm_to_watts(23.0) == doctest::Approx(0.19952623).epsilon(1e-7));
    CHECK(dbm_to_watts(-105.0) == doctest::Approx(3.1622777e-14).epsilon(1e-7));
    CHECK(db_to_linear(-30.0) == doctest::Approx(1e-3).epsilon(1e-12));
}

TEST_CASE("generate_channels: per-entry power matches the path loss")
{
    SystemConfig cfg;
    cfg.users = 1;
    cfg.ue_positions = {{5.0, 50.0, 10.0}};
    cfg.ap_antennas = 1;
    cfg.irs_elements = 1;
    const double expected_direct = pathloss_gain(distance(cfg.ue_positions[0], cfg.ap_position), 5.0);
    const double expected_irs = pathloss_gain(std::sqrt(89.0), 2.0);
    const int draws = 100000;
    double direct = 0.0;
    double irs = 0.0;
    const RandomStream root(3, "power");
    for (int i = 0; i < draws; ++i) {
        const ChannelRealization r = generate_channels(cfg, root.child("draw", i));
        direct += r.h_direct(0).squaredNorm();
        irs += r.h_ue_irs(0).squaredNorm();
    }
    CHECK(std::abs(direct / draws - expected_direct) <= 0.05 * expected_direct);
    CHECK(std::abs(irs / draws - expected_irs) <= 0.05 * expected_irs);
}

TEST_CASE("generate_channels: determinism, shapes and link independence")
{
    SystemConfig cfg;
    const RandomStream s(9, "fading");
    const ChannelRealization a = generate_channels(cfg, s);
    const ChannelRealization b = generate_channels(cfg, s);
    CHECK(a.users() == 2);
    CHECK(a.antennas() == 4);
    CHECK(a.elements() == 16);
    CHECK(a.h_irs_ap().rows() == 16);
    for (int k = 0; k < 2; ++k) {
        CHECK((a.h_direct(k) - b.h_direct(k)).norm() == 0.0);
        CHECK((a.h_ue_irs(k) - b.h_ue_irs(k)).norm() == 0.0);
    }
    CHECK((a.h_irs_ap() - b.h_irs_ap()).norm() == 0.0);

    // Direct links do not depend on the IRS size.
    SystemConfig small = cfg;
    small.irs_elements = 3;
    const ChannelRealization c = generate_channels(small, s);
    for (int k = 0; k < 2; ++k) {
        CHECK((a.h_direct(k) - c.h_direct(k)).norm() == 0.0);
    }
}

TEST_CASE("generate_channels: coincident positions are a domain error")
{
    SystemConfig cfg;
    cfg.ue_positions[0] = cfg.ap_position;
    CHECK_THROWS_AS(generate_channels(cfg, RandomStream(1, "x")), NumericDomainError);
}

TEST_CASE("distance offset lengthens only the UE-IRS link")
{
    SystemConfig cfg;
    const RandomStream s(4, "fading");
    const ChannelRealization base = generate_channels(cfg, s);
    cfg.irs_distance_offset_m = 10.0;
    const ChannelRealization far = generate_channels(cfg, s);
    for (int k = 0; k < 2; ++k) {
        CHECK((base.h_direct(k) - far.h_direct(k)).norm() == 0.0);
        const double d0 = distance(cfg.ue_positions[k], cfg.irs_position);
        const double ratio = std::pow((d0 + 10.0) / d0, -1.0);  // amplitude ratio for exponent 2
        CHECK((far.h_ue_irs(k) - ratio * base.h_ue_irs(k)).norm() <= 1e-12 * base.h_ue_irs(k).norm());
    }
}

TEST_CASE("cascade and composite structure")
{
    std::mt19937_64 rng(21);
    // Scalar case: cascade = conj(h_r) * H.
    const ChannelRealization one = random_realization(1, 1, 1, rng);
    CHECK(std::abs(one.cascade(0)(0, 0) - std::conj(one.h_ue_irs(0)(0)) * one.h_irs_ap()(0, 0)) < 1e-15);

    const ChannelRealization r = random_realization(3, 4, 5, rng);
    for (int k = 0; k < 3; ++k) {
        for (int i = 0; i < 5; ++i) {
            for (int n = 0; n < 4; ++n) {
                const Complex expected = std::conj(r.h_ue_irs(k)(i)) * r.h_irs_ap()(i, n);
                CHECK(std::abs(r.cascade(k)(i, n) - expected) <= 1e-15 * std::abs(expected));
                CHECK(r.composite(k)(i, n) == r.cascade(k)(i, n));
            }
        }
        for (int n = 0; n < 4; ++n) {
            CHECK(r.composite(k)(5, n) == std::conj(r.h_direct(k)(n)));
        }
    }
}

TEST_CASE("sic_order: sorting and ties")
{
    CHECK(sic_order(scalar_users({0.3, 0.7})) == std::vector<int>{0, 1});
    CHECK(sic_order(scalar_users({0.7, 0.3})) == std::vector<int>{1, 0});
    CHECK(sic_order(scalar_users({0.5, 0.5, 0.5})) == std::vector<int>{0, 1, 2});
    CHECK(sic_order(scalar_users({0.5, 0.2, 0.5})) == std::vector<int>{1, 0, 2});

    std::mt19937_64 rng(22);
    for (int trial = 0; trial < 50; ++trial) {
        const ChannelRealization r = random_realization(3, 3, 4, rng);
        std::vector<double> key;
        for (int k = 0; k < 3; ++k) {
            key.push_back(oracle::identity_gain(r.h_direct(k), r.h_ue_irs(k), r.h_irs_ap()));
            CHECK(identity_phase_gain(r, k) == doctest::Approx(key.back()).epsilon(1e-12));
        }
        CHECK(r.sic_order() == oracle::ascending_order(key));
        for (int pos = 0; pos < 3; ++pos) {
            CHECK(r.sic_rank(r.sic_order()[pos]) == pos);
        }
    }
}

TEST_CASE("composite_gain: direct-only reduction, phase invariance, explicit form")
{
    std::mt19937_64 rng(23);
    const ChannelRealization direct = random_realization(1, 3, 0, rng);
    const CVector m = testing::random_vector(3, rng);
    CHECK(std::abs(composite_gain(direct, 0, CVector::Ones(1), m) - direct.h_direct(0).dot(m)) < 1e-14);

    const ChannelRealization r = random_realization(2, 3, 6, rng);
    for (int trial = 0; trial < 20; ++trial) {
        const CVector mk = testing::random_vector(3, rng).normalized();
        std::vector<double> theta(6);
        std::uniform_real_distribution<double> u(0.0, 2.0 * std::numbers::pi);
        for (double& t : theta) {
            t = u(rng);
        }
        CVector w(7);
        for (int i = 0; i < 6; ++i) {
            w(i) = std::polar(1.0, -theta[i]);
        }
        w(6) = 1.0;
        for (int k = 0; k < 2; ++k) {
            const Complex lifted = composite_gain(r, k, w, mk);
            const Complex explicit_form = oracle::theta_gain(r.h_direct(k), r.h_ue_irs(k), r.h_irs_ap(), theta, mk);
            CHECK(std::abs(lifted - explicit_form) <= 1e-12 * std::abs(explicit_form));
            const Complex rot = std::polar(1.0, u(rng));
            CHECK(std::abs(composite_gain(r, k, rot * w, mk)) == doctest::Approx(std::abs(lifted)).epsilon(1e-12));
            CHECK(std::abs(composite_gain(r, k, w, rot * mk)) == doctest::Approx(std::abs(lifted)).epsilon(1e-12));
        }
    }
    // Identity reflection reproduces the ordering gain for a matched beam.
    for (int k = 0; k < 2; ++k) {
        const CVector ones = CVector::Ones(7);
        const CVector hbar = r.composite(k).adjoint() * ones;
        const Complex g = composite_gain(r, k, ones, hbar.normalized());
        CHECK(std::abs(g) == doctest::Approx(identity_phase_gain(r, k)).epsilon(1e-12));
    }
    CHECK_THROWS_AS(composite_gain(r, 0, CVector::Ones(3), m), DimensionError);
}

TEST_CASE("without_irs keeps direct links and zeroes the reflected path")
{
    std::mt19937_64 rng(24);
    const ChannelRealization r = random_realization(2, 2, 4, rng);
    const ChannelRealization d = r.without_irs();
    for (int k = 0; k < 2; ++k) {
        CHECK(d.cascade(k).norm() == 0.0);
        CHECK((d.h_direct(k) - r.h_direct(k)).norm() == 0.0);
        const CVector m = testing::random_vector(2, rng);
        const CVector w = testing::random_unit_modulus(5, rng);
        CHECK(std::abs(composite_gain(d, k, w, m) - std::conj(w(4)) * r.h_direct(k).dot(m)) < 1e-14);
    }
}
