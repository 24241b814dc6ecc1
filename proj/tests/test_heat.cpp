#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "grushin/geometry.hpp"
#include "grushin/heat.hpp"
#include "grushin/quadrature.hpp"
#include "oracle_utils.hpp"

using namespace grushin;

namespace {

const Dimensions d11(1, 1);

GrushinPoint p11(double xp, double xpp) { return GrushinPoint(Vec{xp}, Vec{xpp}); }

}  // namespace

TEST_CASE("heat kernel symmetry") {
    Rng rng(17);
    for (int trial = 0; trial < 10; ++trial) {
        auto x = oracle::random_point(rng, 1, 1, 2.0);
        auto y = oracle::random_point(rng, 1, 1, 2.0);
        const double t = std::exp(rng.uniform(-1.0, 1.5));
        const double a = heat_kernel(t, x, y).value;
        const double b = heat_kernel(t, y, x).value;
        CHECK(oracle::rel_err(a, b) < 1e-10);
        CHECK(a > 0.0);
    }
}

TEST_CASE("heat kernel dilation covariance") {
    Rng rng(23);
    for (int trial = 0; trial < 8; ++trial) {
        auto x = oracle::random_point(rng, 1, 1, 1.5);
        auto y = oracle::random_point(rng, 1, 1, 1.5);
        const double t = std::exp(rng.uniform(-0.5, 0.5));
        for (double s : {0.5, 2.0}) {
            const double lhs = heat_kernel(s * s * t, dilate(x, s), dilate(y, s)).value;
            const double rhs = std::pow(s, -3.0) * heat_kernel(t, x, y).value;
            CHECK(oracle::rel_err(lhs, rhs) < 1e-6);
        }
    }
}

TEST_CASE("heat kernel mass is one") {
    const auto x = p11(0.8, -0.2);
    const double t = 0.7;
    auto integrand = [&](const std::vector<double>& p) {
        return heat_kernel(t, x, GrushinPoint(Vec{p[0]}, Vec{p[1]})).value;
    };
    // y'' spread scales with |x'| + sqrt(t); generous box
    const double mass =
        oracle::grid_quadrature(integrand, {-6.0, -8.0}, {7.0, 8.0}, 110);
    CHECK(std::abs(mass - 1.0) < 1e-3);
}

TEST_CASE("m = 2 radial path: symmetry and dilation covariance") {
    GrushinPoint x(Vec{0.6}, Vec{0.3, -0.2}), y(Vec{-0.4}, Vec{0.1, 0.5});
    const double t = 0.8;
    const double a = heat_kernel(t, x, y).value;
    CHECK(oracle::rel_err(a, heat_kernel(t, y, x).value) < 1e-9);
    const double s = 2.0;
    const double lhs = heat_kernel(s * s * t, dilate(x, s), dilate(y, s)).value;
    CHECK(oracle::rel_err(lhs, std::pow(s, -(1.0 + 4.0)) * a) < 1e-6);
    CHECK_THROWS_AS(heat_kernel(1.0, GrushinPoint(Vec{0.0}, Vec{0.0, 0.0, 0.0}),
                                GrushinPoint(Vec{0.0}, Vec{0.0, 0.0, 0.0})),
                    std::invalid_argument);
}

TEST_CASE("drifted kernel basics") {
    const auto x = p11(0.5, 0.2), y = p11(-0.3, 0.6);
    const double t = 1.1;
    SUBCASE("zero drift reduces to the plain kernel") {
        CHECK(heat_kernel_drift(t, Drift::zero(1), x, y).value ==
              heat_kernel(t, x, y).value);
    }
    SUBCASE("symmetric in (x, y)") {
        Drift a(Vec{0.8});
        CHECK(oracle::rel_err(heat_kernel_drift(t, a, x, y).value,
                              heat_kernel_drift(t, a, y, x).value) < 1e-10);
    }
}

TEST_CASE("drifted semigroup property under mu_a") {
    Drift a(Vec{0.7});
    const auto x = p11(0.4, 0.1), y = p11(-0.5, -0.3);
    const double t = 0.6, s = 0.9;
    auto integrand = [&](const std::vector<double>& p) {
        GrushinPoint z(Vec{p[0]}, Vec{p[1]});
        return heat_kernel_drift(t, a, x, z).value * heat_kernel_drift(s, a, z, y).value *
               std::exp(2.0 * a.a[0] * p[0]);
    };
    const double composed =
        oracle::grid_quadrature(integrand, {-7.0, -9.0}, {8.0, 9.0}, 100);
    const double direct = heat_kernel_drift(t + s, a, x, y).value;
    CHECK(oracle::rel_err(composed, direct) < 1e-3);
}

TEST_CASE("kernel derivatives against finite differences") {
    Drift a(Vec{0.6});
    const auto x = p11(0.7, 0.4), y = p11(-0.2, -0.1);
    const double t = 0.8;

    SUBCASE("empty multi-index reduces to the drifted kernel") {
        auto alpha = GrushinMultiIndex::zero(d11);
        CHECK(heat_kernel_derivative(t, a, alpha, x, y) ==
              doctest::Approx(heat_kernel_drift(t, a, x, y).value));
    }
    SUBCASE("X' derivative") {
        auto alpha = GrushinMultiIndex::x_prime_power(d11, 0);
        auto f = [&](const std::vector<double>& p) {
            return heat_kernel_drift(t, a, GrushinPoint(Vec{p[0]}, Vec{p[1]}), y).value;
        };
        const double fd =
            oracle::finite_difference(f, {x.x_prime[0], x.x_dprime[0]}, {1, 0}, 1e-4);
        CHECK(oracle::rel_err(heat_kernel_derivative(t, a, alpha, x, y), fd) < 1e-5);
    }
    SUBCASE("X'' derivative inserts x'_j d/dx''") {
        auto alpha = GrushinMultiIndex::x_dprime_power(d11, 0, 0);
        auto f = [&](const std::vector<double>& p) {
            return heat_kernel_drift(t, a, GrushinPoint(Vec{p[0]}, Vec{p[1]}), y).value;
        };
        const double fd = x.x_prime[0] * oracle::finite_difference(
                                             f, {x.x_prime[0], x.x_dprime[0]}, {0, 1}, 1e-4);
        CHECK(oracle::rel_err(heat_kernel_derivative(t, a, alpha, x, y), fd) < 1e-5);
    }
    SUBCASE("second order X' derivative") {
        auto alpha = GrushinMultiIndex::x_prime_power(d11, 0, 2);
        auto f = [&](const std::vector<double>& p) {
            return heat_kernel_drift(t, a, GrushinPoint(Vec{p[0]}, Vec{p[1]}), y).value;
        };
        const double fd =
            oracle::finite_difference(f, {x.x_prime[0], x.x_dprime[0]}, {2, 0}, 1e-3);
        CHECK(oracle::rel_err(heat_kernel_derivative(t, a, alpha, x, y), fd) < 1e-4);
    }
}

TEST_CASE("first-order rotation covariance of the derivative kernel (n = 2, m = 1)") {
    const Dimensions d21(2, 1);
    Drift a(Vec{0.8, -0.3});
    GrushinPoint x(Vec{0.6, 0.2}, Vec{0.3}), y(Vec{-0.1, 0.5}, Vec{-0.2});
    const double t = 0.9;
    auto A = SquareMatrix::rotation(2, 0, 1, 0.7);
    Vec Aa(2, 0.0);
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) Aa[i] += A(i, j) * a.a[j];
    const auto Ax = rotate(x, A), Ay = rotate(y, A);

    for (int jj = 0; jj < 2; ++jj) {
        const double lhs =
            heat_kernel_derivative(t, a, GrushinMultiIndex::x_prime_power(d21, jj), x, y);
        double rhs = 0.0;
        for (int l = 0; l < 2; ++l) {
            rhs += A(l, jj) * heat_kernel_derivative(
                                  t, Drift(Aa), GrushinMultiIndex::x_prime_power(d21, l), Ax, Ay);
        }
        CHECK(oracle::rel_err(lhs, rhs) < 1e-6);
    }
}

TEST_CASE("grushin_apply") {
    SUBCASE("constants are annihilated") {
        Grid g = Grid::centered_box({2.0, 2.0}, {17, 17});
        auto f = SampledFunction::sample(d11, g, [](const GrushinPoint&) { return 1.0; });
        auto gf = grushin_apply(f, Drift::zero(1));
        for (std::size_t i = 0; i < gf.size(); ++i)
            if (gf.is_valid(i)) CHECK(std::abs(gf[i]) < 1e-10);
    }
    SUBCASE("grid too small is rejected") {
        Grid g = Grid::centered_box({1.0, 1.0}, {5, 5});
        SampledFunction f(d11, g);
        CHECK_THROWS_AS(grushin_apply(f, Drift::zero(1)), std::invalid_argument);
    }
    SUBCASE("symmetry with respect to mu_a") {
        Drift a(Vec{0.5});
        Grid g = Grid::centered_box({4.0, 4.0}, {65, 65});
        auto f = SampledFunction::sample(d11, g, [](const GrushinPoint& p) {
            return std::exp(-(p.x_prime[0] * p.x_prime[0] + p.x_dprime[0] * p.x_dprime[0]));
        });
        auto h = SampledFunction::sample(d11, g, [](const GrushinPoint& p) {
            const double r2 = (p.x_prime[0] - 0.4) * (p.x_prime[0] - 0.4) +
                              (p.x_dprime[0] + 0.3) * (p.x_dprime[0] + 0.3);
            return std::exp(-1.5 * r2);
        });
        auto gf = grushin_apply(f, a), gh = grushin_apply(h, a);
        const double vol = g.cell_volume();
        double lhs = 0.0, rhs = 0.0;
        for (std::size_t i = 0; i < f.size(); ++i) {
            if (!gf.is_valid(i) || !gh.is_valid(i)) continue;
            const double w = std::exp(2.0 * a.a[0] * f.point(i).x_prime[0]) * vol;
            lhs += gf[i] * h[i] * w;
            rhs += f[i] * gh[i] * w;
        }
        CHECK(oracle::rel_err(lhs, rhs) < 1e-3);
    }
    SUBCASE("conjugation by U_a matches the drifted operator") {
        // G_a f = U_a (G + |a|^2) U_a^{-1} f with U_a = exp(-a.x').
        // Both sides are discretized with the same stencils; a fine grid and
        // a small drift keep the commutator error below 1e-6.
        Drift a(Vec{0.1});
        Grid g = Grid::centered_box({1.5, 1.5}, {301, 301});
        auto f = SampledFunction::sample(d11, g, [](const GrushinPoint& p) {
            return std::exp(-2.0 * (p.x_prime[0] * p.x_prime[0] +
                                    p.x_dprime[0] * p.x_dprime[0]));
        });
        auto lhs = grushin_apply(f, a);

        auto uinv_f = SampledFunction::sample(d11, g, [&](const GrushinPoint& p) {
            return std::exp(a.a[0] * p.x_prime[0]) *
                   std::exp(-2.0 * (p.x_prime[0] * p.x_prime[0] +
                                    p.x_dprime[0] * p.x_dprime[0]));
        });
        auto g_uinv = grushin_apply(uinv_f, Drift::zero(1));
        double worst = 0.0, scale = 0.0;
        for (std::size_t i = 0; i < f.size(); ++i) {
            if (!lhs.is_valid(i) || !g_uinv.is_valid(i)) continue;
            const double ua = std::exp(-a.a[0] * f.point(i).x_prime[0]);
            const double rhs = ua * (g_uinv[i] + a.a[0] * a.a[0] * uinv_f[i]);
            worst = std::max(worst, std::abs(lhs[i] - rhs));
            scale = std::max(scale, std::abs(lhs[i]));
        }
        CHECK(worst / scale < 1e-6);
    }
}

TEST_CASE("heat semigroup application") {
    Drift a(Vec{0.5});
    Grid g = Grid::centered_box({5.0, 5.0}, {41, 41});
    auto f = SampledFunction::sample(d11, g, [](const GrushinPoint& p) {
        return std::exp(-2.0 * (p.x_prime[0] * p.x_prime[0] + p.x_dprime[0] * p.x_dprime[0]));
    });

    SUBCASE("short times approximate the identity") {
        // the kernel's x''-width is about |x'| sqrt(t); center the bump away
        // from the degenerate line x' = 0 and resolve that width
        const double t0 = 5e-4;
        Grid fine;
        fine.origin = {1.0, -2.0};
        fine.spacing = {2.0 / 160, 4.0 / 256};
        fine.shape = {161, 257};
        auto f2 = SampledFunction::sample(d11, fine, [](const GrushinPoint& p) {
            return std::exp(-8.0 * (p.x_prime[0] - 2.0) * (p.x_prime[0] - 2.0) -
                            2.0 * p.x_dprime[0] * p.x_dprime[0]);
        });
        QuadratureSpec q;
        q.rel_tol = 1e-4;
        auto ht = apply_heat_semigroup(f2, t0, Drift::zero(1), q);
        double worst = 0.0;
        for (std::size_t i = 0; i < f2.size(); ++i) {
            if (std::abs(f2[i]) < 0.2) continue;
            worst = std::max(worst, std::abs(ht[i] - f2[i]) / std::abs(f2[i]));
        }
        CHECK(worst < 5e-2);
    }

    SUBCASE("semigroup composition") {
        // the x''-diffusion speed is |x'|^2, so the grid needs wide margins
        // around the comparison region before the two-step path converges
        Grid wide;
        wide.origin = {-6.0, -15.0};
        wide.spacing = {0.25, 0.25};
        wide.shape = {49, 121};
        auto f2 = SampledFunction::sample(d11, wide, [](const GrushinPoint& p) {
            return std::exp(-2.0 * (p.x_prime[0] * p.x_prime[0] +
                                    p.x_dprime[0] * p.x_dprime[0]));
        });
        auto one = apply_heat_semigroup(f2, 0.5, a);
        auto two = apply_heat_semigroup(one, 0.5, a);
        auto direct = apply_heat_semigroup(f2, 1.0, a);
        double worst = 0.0, scale = 0.0;
        for (std::size_t i = 0; i < f2.size(); ++i) {
            scale = std::max(scale, std::abs(direct[i]));
        }
        for (std::size_t i = 0; i < f2.size(); ++i) {
            const auto p = f2.point(i);
            if (std::abs(p.x_prime[0]) > 2.5 || std::abs(p.x_dprime[0]) > 2.5) continue;
            if (std::abs(direct[i]) < 1e-3 * scale) continue;
            worst = std::max(worst, std::abs(two[i] - direct[i]) / std::abs(direct[i]));
        }
        CHECK(worst < 1e-3);
    }

    SUBCASE("heat equation residual") {
        Grid fine = Grid::centered_box({4.5, 4.5}, {129, 129});
        auto f2 = SampledFunction::sample(d11, fine, [](const GrushinPoint& p) {
            return std::exp(-2.0 * (p.x_prime[0] * p.x_prime[0] +
                                    p.x_dprime[0] * p.x_dprime[0]));
        });
        const double t = 0.5, h = 1e-3;
        auto ut = apply_heat_semigroup(f2, t, a);
        auto uth = apply_heat_semigroup(f2, t + h, a);
        auto gut = grushin_apply(ut, a);
        double worst = 0.0, scale = 0.0;
        for (std::size_t i = 0; i < f2.size(); ++i)
            if (gut.is_valid(i)) scale = std::max(scale, std::abs(gut[i]));
        for (std::size_t i = 0; i < f2.size(); ++i) {
            if (!gut.is_valid(i) || std::abs(gut[i]) < 0.05 * scale) continue;
            const double dt = (uth[i] - ut[i]) / h;
            worst = std::max(worst, std::abs(dt + gut[i]) / std::abs(gut[i]));
        }
        CHECK(worst < 1e-2);
    }
}

TEST_CASE("Gaussian upper bound fit (reduced sweep)") {
    Rng rng(2024);
    double c_needed = 0.0;
    const double b = 0.1;
    for (double t : {0.1, 1.0, 10.0}) {
        for (int trial = 0; trial < 50; ++trial) {
            auto x = oracle::random_point(rng, 1, 1, 3.0);
            auto y = oracle::random_point(rng, 1, 1, 3.0);
            const double h = heat_kernel(t, x, y).value;
            const double v = ball_volume_lebesgue_ref(x, std::sqrt(t));
            const double dist = grushin_distance(x, y);
            c_needed = std::max(c_needed, h * v * std::exp(b * dist * dist / t));
        }
    }
    CHECK(c_needed < 100.0);
}
