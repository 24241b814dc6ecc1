#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "grushin/geometry.hpp"
#include "grushin/quadrature.hpp"
#include "oracle_utils.hpp"

using namespace grushin;

TEST_CASE("quasi-metric point values") {
    SUBCASE("coincident points") {
        GrushinPoint x(Vec{1.0, 2.0}, Vec{3.0});
        CHECK(grushin_distance(x, x) == 0.0);
    }
    SUBCASE("first regime: |D''|^{1/2} <= |x'|+|y'|") {
        GrushinPoint x(Vec{1.0}, Vec{0.0}), y(Vec{1.0}, Vec{1.0});
        CHECK(grushin_distance(x, y) == doctest::Approx(0.5));
    }
    SUBCASE("second regime: x' = y' = 0") {
        GrushinPoint x(Vec{0.0}, Vec{0.0}), y(Vec{0.0}, Vec{4.0});
        CHECK(grushin_distance(x, y) == doctest::Approx(2.0));
    }
    SUBCASE("branches agree on the regime boundary") {
        // |D''| = 4, |x'|+|y'| = 2: both give |x'-y'| + 2
        GrushinPoint x(Vec{1.0}, Vec{0.0}), y(Vec{-1.0}, Vec{4.0});
        CHECK(grushin_distance(x, y) == doctest::Approx(2.0 + 2.0));
    }
}

TEST_CASE("quasi-metric symmetry and homogeneity") {
    Rng rng(42);
    for (int trial = 0; trial < 100; ++trial) {
        auto x = oracle::random_point(rng, 2, 1, 4.0);
        auto y = oracle::random_point(rng, 2, 1, 4.0);
        const double s = std::exp(rng.uniform(-1.5, 1.5));
        const double d = grushin_distance(x, y);
        CHECK(grushin_distance(y, x) == doctest::Approx(d).epsilon(1e-13));
        CHECK(grushin_distance(dilate(x, s), dilate(y, s)) ==
              doctest::Approx(s * d).epsilon(1e-12));
    }
}

TEST_CASE("Lebesgue reference volume") {
    SUBCASE("origin") {
        GrushinPoint x(Vec{0.0}, Vec{0.0});
        CHECK(ball_volume_lebesgue_ref(x, 2.0) == doctest::Approx(std::pow(2.0, 3)));
    }
    SUBCASE("substitution n = m = 1, |x'| = 3, r = 1") {
        GrushinPoint x(Vec{3.0}, Vec{0.0});
        CHECK(ball_volume_lebesgue_ref(x, 1.0) == doctest::Approx(4.0));
    }
    SUBCASE("doubling bound") {
        Rng rng(3);
        for (int trial = 0; trial < 200; ++trial) {
            auto x = oracle::random_point(rng, 1, 1, 5.0);
            const double r = std::exp(rng.uniform(-3, 2));
            const double ratio = ball_volume_lebesgue_ref(x, 2.0 * r) /
                                 ball_volume_lebesgue_ref(x, r);
            CHECK(ratio <= std::pow(2.0, 3) * 2.0 + 1e-9);
        }
    }
}

TEST_CASE("Monte Carlo volume: self-consistency at a = 0") {
    GrushinPoint x(Vec{0.0}, Vec{0.0});
    Drift a = Drift::zero(1);
    const double r = 0.5;
    auto e1 = ball_volume_mu_mc(x, r, a, 40000, 11);
    auto e2 = ball_volume_mu_mc(x, r, a, 160000, 12);
    // doubling the sample count keeps the estimate inside joint error bars
    CHECK(std::abs(e1.value - e2.value) < 4.0 * (e1.std_err + e2.std_err));
    CHECK(e2.std_err < e1.std_err);
    // scale sanity against r^{n+2m}
    const double ratio = e2.value / std::pow(r, 3);
    CHECK(ratio > 0.1);
    CHECK(ratio < 30.0);
}

TEST_CASE("Monte Carlo volume agrees with grid quadrature (n = 2, m = 1)") {
    GrushinPoint x(Vec{0.8, -0.3}, Vec{0.2});
    Drift a(Vec{0.6, 0.0});
    const double r = 1.2;
    auto mc = ball_volume_mu_mc(x, r, a, 200000, 7);

    const double hw = r * (2.0 * norm2(x.x_prime) + r) + r * r;
    std::vector<double> lo{x.x_prime[0] - r, x.x_prime[1] - r, x.x_dprime[0] - hw};
    std::vector<double> hi{x.x_prime[0] + r, x.x_prime[1] + r, x.x_dprime[0] + hw};
    auto indicator = [&](const std::vector<double>& p) {
        GrushinPoint y(Vec{p[0], p[1]}, Vec{p[2]});
        if (grushin_distance(x, y) >= r) return 0.0;
        return std::exp(2.0 * dot(a.a, y.x_prime));
    };
    const double grid = oracle::grid_quadrature(indicator, lo, hi, 90);
    CHECK(std::abs(mc.value - grid) < 3.0 * mc.std_err + 0.02 * grid);
}

TEST_CASE("Monte Carlo volume: monotone in r") {
    GrushinPoint x(Vec{1.0}, Vec{0.0});
    Drift a(Vec{1.0});
    auto small = ball_volume_mu_mc(x, 1.0, a, 50000, 5);
    auto big = ball_volume_mu_mc(x, 2.0, a, 50000, 6);
    CHECK(big.value >= small.value - 3.0 * (small.std_err + big.std_err));
}

TEST_CASE("Monte Carlo determinism") {
    GrushinPoint x(Vec{0.5}, Vec{0.0});
    Drift a(Vec{1.0});
    auto e1 = ball_volume_mu_mc(x, 1.5, a, 20000, 123);
    auto e2 = ball_volume_mu_mc(x, 1.5, a, 20000, 123);
    CHECK(e1.value == e2.value);
    CHECK(e1.std_err == e2.std_err);
    CHECK_THROWS_AS(ball_volume_mu_mc(x, 1.0, a, 100, 1), std::invalid_argument);
}

TEST_CASE("asymptotic volume formula") {
    SUBCASE("small-r branch substitution") {
        GrushinPoint x(Vec{0.0}, Vec{0.0});
        Drift a(Vec{1.0});
        const double want = std::pow(0.5, 2) * std::pow(0.5, 1);
        CHECK(ball_volume_mu_asymptotic(x, 0.5, a) == doctest::Approx(want));
    }
    SUBCASE("zero drift rejected") {
        GrushinPoint x(Vec{0.0}, Vec{0.0});
        CHECK_THROWS_AS(ball_volume_mu_asymptotic(x, 1.0, Drift::zero(1)),
                        std::invalid_argument);
    }
    SUBCASE("branch ratio at r = 1/|a| is e^2, independent of x") {
        for (double xc : {0.0, 1.0, 4.0}) {
            for (double an : {0.5, 1.0, 2.0}) {
                GrushinPoint x(Vec{xc}, Vec{0.0});
                Drift a(Vec{an});
                const double r = 1.0 / an;
                const double low = ball_volume_mu_asymptotic(x, r, a);
                // nudge into the other branch; the jump factor is e^2 for
                // every x, a and dimension
                const double high = ball_volume_mu_asymptotic(x, r * (1.0 + 1e-9), a);
                CHECK(high / low == doctest::Approx(std::exp(2.0)).epsilon(1e-6));
            }
        }
    }
}

TEST_CASE("Monte Carlo versus asymptotic: two-regime comparability") {
    Drift a(Vec{1.0});
    double worst_lo = 1e9, worst_hi = 0.0;
    for (double r : {0.5, 2.0}) {
        for (double xc : {0.0, 1.0}) {
            GrushinPoint x(Vec{xc}, Vec{0.0});
            auto mc = ball_volume_mu_mc(x, r, a, 60000, 31);
            const double ratio = mc.value / ball_volume_mu_asymptotic(x, r, a);
            worst_lo = std::min(worst_lo, ratio);
            worst_hi = std::max(worst_hi, ratio);
        }
    }
    CHECK(worst_lo > 1.0 / 50.0);
    CHECK(worst_hi < 50.0);
}
