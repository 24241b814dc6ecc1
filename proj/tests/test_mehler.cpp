#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "grushin/mehler.hpp"
#include "grushin/quadrature.hpp"
#include "oracle_utils.hpp"

using namespace grushin;

namespace {

// The direct closed form, written independently of the library branch logic.
double direct_formula(double t, double lam, const Vec& xp, const Vec& yp) {
    const int n = static_cast<int>(xp.size());
    double d2 = 0.0, xy = 0.0;
    for (int j = 0; j < n; ++j) {
        d2 += (xp[j] - yp[j]) * (xp[j] - yp[j]);
        xy += xp[j] * yp[j];
    }
    return std::pow(lam / (2.0 * M_PI * std::sinh(2.0 * lam * t)), 0.5 * n) *
           std::exp(-0.5 * lam / std::tanh(2.0 * lam * t) * d2 - lam * std::tanh(lam * t) * xy);
}

double gaussian_limit(double t, const Vec& xp, const Vec& yp) {
    const int n = static_cast<int>(xp.size());
    double d2 = 0.0;
    for (int j = 0; j < n; ++j) d2 += (xp[j] - yp[j]) * (xp[j] - yp[j]);
    return std::pow(4.0 * M_PI * t, -0.5 * n) * std::exp(-d2 / (4.0 * t));
}

}  // namespace

TEST_CASE("lambda -> 0 recovers the Gaussian") {
    const Vec xp{0.7}, yp{-0.4};
    for (double t : {0.1, 1.0, 10.0}) {
        CHECK(oracle::rel_err(mehler_kernel(t, 0.0, xp, yp), gaussian_limit(t, xp, yp)) < 1e-14);
        CHECK(oracle::rel_err(mehler_kernel(t, 1e-8, xp, yp), gaussian_limit(t, xp, yp)) < 1e-6);
    }
}

TEST_CASE("value at the origin matches the normalization factor") {
    const Vec zero{0.0};
    for (double t : {0.3, 2.0}) {
        for (double lam : {0.5, 3.0}) {
            const double want = std::sqrt(lam / (2.0 * M_PI * std::sinh(2.0 * lam * t)));
            CHECK(oracle::rel_err(mehler_kernel(t, lam, zero, zero), want) < 1e-13);
        }
    }
}

TEST_CASE("symmetry in (x', y')") {
    Rng rng(7);
    for (int trial = 0; trial < 100; ++trial) {
        Vec xp{rng.uniform(-3, 3), rng.uniform(-3, 3)};
        Vec yp{rng.uniform(-3, 3), rng.uniform(-3, 3)};
        const double t = std::exp(rng.uniform(-2, 2));
        const double lam = std::exp(rng.uniform(-3, 2));
        const double a = mehler_kernel(t, lam, xp, yp);
        const double b = mehler_kernel(t, lam, yp, xp);
        CHECK(a > 0.0);
        CHECK(oracle::rel_err(a, b) < 1e-13);
    }
}

TEST_CASE("Taylor branch agrees with the direct formula in the overlap window") {
    const Vec xp{1.1}, yp{-0.6};
    const double t = 2.0;
    // inside the Taylor branch (lam t < 1e-4) the direct formula is still
    // perfectly stable in double precision; compare against it
    for (double lt : {2e-5, 5e-5, 9e-5}) {
        const double lam = lt / t;
        CHECK(oracle::rel_err(mehler_kernel(t, lam, xp, yp), direct_formula(t, lam, xp, yp)) <
              1e-10);
    }
}

TEST_CASE("underflow guard") {
    CHECK(mehler_kernel(100.0, 10.0, Vec{0.0}, Vec{0.0}) == 0.0);
    CHECK_THROWS_AS(mehler_kernel(-1.0, 1.0, Vec{0.0}, Vec{0.0}), std::invalid_argument);
}

TEST_CASE("derivative prefactor: zeroth order is the constant 1") {
    auto pre = mehler_derivative_prefactor({0, 0}, 1.0, Vec{0.7});
    CHECK(pre.poly.degree() == 0);
    CHECK(pre.eval(Vec{0.3, -0.2}, Vec{0.1, 0.4}).real() == doctest::Approx(1.0));
}

TEST_CASE("derivative prefactor: first order closed form") {
    const double t = 0.8, lam = 1.3;
    auto pre = mehler_derivative_prefactor({1}, t, Vec{lam});
    Rng rng(21);
    for (int trial = 0; trial < 20; ++trial) {
        const Vec xp{rng.uniform(-2, 2)}, yp{rng.uniform(-2, 2)};
        const double want = -lam / std::tanh(2.0 * lam * t) * (xp[0] - yp[0]) -
                            lam * std::tanh(lam * t) * yp[0];
        CHECK(oracle::rel_err(pre.eval(xp, yp).real(), want) < 1e-12);
    }
}

TEST_CASE("derivative prefactor reproduces finite differences up to order 3") {
    const double t = 0.6, lam = 0.9;
    Rng rng(5);
    const std::vector<std::vector<int>> alphas = {{1, 0}, {0, 1}, {2, 0}, {1, 1}, {3, 0}, {2, 1}};
    for (const auto& alpha : alphas) {
        auto pre = mehler_derivative_prefactor(alpha, t, Vec{lam});
        int order = alpha[0] + alpha[1];
        CHECK(pre.poly.degree() <= order);
        for (int trial = 0; trial < 5; ++trial) {
            const Vec xp{rng.uniform(-1.5, 1.5), rng.uniform(-1.5, 1.5)};
            const Vec yp{rng.uniform(-1.5, 1.5), rng.uniform(-1.5, 1.5)};
            auto f = [&](const std::vector<double>& p) {
                return mehler_kernel(t, lam, Vec{p[0], p[1]}, yp);
            };
            const double step = order >= 3 ? 3e-3 : 1e-4;
            const double fd =
                oracle::finite_difference(f, {xp[0], xp[1]}, alpha, step);
            const double got = pre.eval(xp, yp).real() * mehler_kernel(t, lam, xp, yp);
            CHECK(oracle::rel_err(got, fd) < 1e-4);
        }
    }
}
