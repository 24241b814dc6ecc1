#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "grushin/core.hpp"
#include "grushin/quadrature.hpp"
#include "oracle_utils.hpp"

using namespace grushin;

TEST_CASE("dilation formula") {
    GrushinPoint x(Vec{1.0}, Vec{1.0});
    SUBCASE("identity scale") {
        auto y = dilate(x, 1.0);
        CHECK(y.x_prime[0] == 1.0);
        CHECK(y.x_dprime[0] == 1.0);
    }
    SUBCASE("s = 2 doubles x' and quadruples x''") {
        auto y = dilate(x, 2.0);
        CHECK(y.x_prime[0] == doctest::Approx(2.0));
        CHECK(y.x_dprime[0] == doctest::Approx(4.0));
    }
    SUBCASE("non-positive scale rejected") {
        CHECK_THROWS_AS(dilate(x, 0.0), std::invalid_argument);
        CHECK_THROWS_AS(dilate(x, -1.0), std::invalid_argument);
    }
}

TEST_CASE("dilation is a group action") {
    Rng rng(12345);
    for (int trial = 0; trial < 100; ++trial) {
        auto x = oracle::random_point(rng, 2, 1, 5.0);
        const double s = std::exp(rng.uniform(-1.5, 1.5));
        const double t = std::exp(rng.uniform(-1.5, 1.5));
        auto lhs = dilate(dilate(x, s), t);
        auto rhs = dilate(x, s * t);
        for (int j = 0; j < 2; ++j)
            CHECK(lhs.x_prime[j] == doctest::Approx(rhs.x_prime[j]).epsilon(1e-12));
        CHECK(lhs.x_dprime[0] == doctest::Approx(rhs.x_dprime[0]).epsilon(1e-12));
    }
}

TEST_CASE("rotation acts on x' and fixes x''") {
    SUBCASE("identity matrix") {
        GrushinPoint x(Vec{0.3, -0.7}, Vec{2.0});
        auto y = rotate(x, SquareMatrix::identity(2));
        CHECK(y.x_prime[0] == x.x_prime[0]);
        CHECK(y.x_prime[1] == x.x_prime[1]);
        CHECK(y.x_dprime[0] == x.x_dprime[0]);
    }
    SUBCASE("quarter turn") {
        GrushinPoint x(Vec{1.0, 0.0}, Vec{5.0});
        auto y = rotate(x, SquareMatrix::rotation(2, 0, 1, M_PI / 2.0));
        CHECK(y.x_prime[0] == doctest::Approx(0.0).epsilon(1e-14));
        CHECK(y.x_prime[1] == doctest::Approx(1.0));
        CHECK(y.x_dprime[0] == 5.0);
    }
    SUBCASE("|x'| preserved on random input") {
        Rng rng(99);
        for (int trial = 0; trial < 50; ++trial) {
            auto x = oracle::random_point(rng, 2, 1, 4.0);
            auto A = SquareMatrix::rotation(2, 0, 1, rng.uniform(0.0, 2.0 * M_PI));
            auto y = rotate(x, A);
            CHECK(norm2(y.x_prime) == doctest::Approx(norm2(x.x_prime)).epsilon(1e-12));
            CHECK(y.x_dprime[0] == x.x_dprime[0]);
        }
    }
    SUBCASE("non-orthogonal matrix rejected") {
        SquareMatrix A(2, Vec{1.0, 0.1, 0.0, 1.0});
        GrushinPoint x(Vec{1.0, 0.0}, Vec{0.0});
        CHECK_THROWS_AS(rotate(x, A), std::invalid_argument);
    }
}

TEST_CASE("homogeneous dimension") {
    CHECK(Dimensions(1, 1).Q() == 3);
    CHECK(Dimensions(2, 1).Q() == 4);
    CHECK(Dimensions(3, 2).Q() == 7);
    CHECK_THROWS_AS(Dimensions(0, 1), std::invalid_argument);
}

TEST_CASE("multi-index bookkeeping") {
    Dimensions d(2, 1);
    auto a = GrushinMultiIndex::x_prime_power(d, 0, 2);
    CHECK(a.order() == 2);
    CHECK(a.order_prime() == 2);
    auto b = GrushinMultiIndex::x_dprime_power(d, 1, 0);
    CHECK(b.order() == 1);
    CHECK(b.order_dprime() == 1);
    CHECK(a.compatible(d));
    CHECK_FALSE(a.compatible(Dimensions(1, 1)));
}
