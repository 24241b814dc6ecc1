#pragma once

#include <cmath>
#include <functional>
#include <vector>

#include "grushin/core.hpp"
#include "grushin/quadrature.hpp"

// Test-side oracles, independent of the kernel implementation paths they
// check: central finite differences, dense grid quadrature, and random
// point generation.

namespace oracle {

inline double rel_err(double got, double want) {
    const double scale = std::max(std::abs(want), 1e-300);
    return std::abs(got - want) / scale;
}

// Central finite difference of order |orders| applied axis by axis.
// f takes the full coordinate vector.
inline double finite_difference(const std::function<double(const std::vector<double>&)>& f,
                                std::vector<double> at, const std::vector<int>& orders,
                                double step) {
    for (std::size_t ax = 0; ax < orders.size(); ++ax) {
        if (orders[ax] == 0) continue;
        std::vector<int> rest = orders;
        rest[ax] -= 1;
        auto reduced = [&, ax](const std::vector<double>& p) {
            std::vector<double> plus = p, minus = p;
            plus[ax] += step;
            minus[ax] -= step;
            return (f(plus) - f(minus)) / (2.0 * step);
        };
        return finite_difference(reduced, at, rest, step);
    }
    return f(at);
}

// Tensor-product midpoint quadrature of f over the box [lo, hi]^rank.
inline double grid_quadrature(const std::function<double(const std::vector<double>&)>& f,
                              const std::vector<double>& lo, const std::vector<double>& hi,
                              int pts_per_axis) {
    const int rank = static_cast<int>(lo.size());
    std::vector<double> h(rank);
    std::size_t total = 1;
    for (int ax = 0; ax < rank; ++ax) {
        h[ax] = (hi[ax] - lo[ax]) / pts_per_axis;
        total *= static_cast<std::size_t>(pts_per_axis);
    }
    double cell = 1.0;
    for (int ax = 0; ax < rank; ++ax) cell *= h[ax];
    double sum = 0.0;
    std::vector<double> x(rank);
    for (std::size_t flat = 0; flat < total; ++flat) {
        std::size_t rem = flat;
        for (int ax = rank - 1; ax >= 0; --ax) {
            x[ax] = lo[ax] + (static_cast<double>(rem % pts_per_axis) + 0.5) * h[ax];
            rem /= pts_per_axis;
        }
        sum += f(x);
    }
    return sum * cell;
}

inline grushin::GrushinPoint random_point(grushin::Rng& rng, int n, int m, double box) {
    grushin::Vec xp(n), xpp(m);
    for (auto& c : xp) c = rng.uniform(-box, box);
    for (auto& c : xpp) c = rng.uniform(-box, box);
    return grushin::GrushinPoint(xp, xpp);
}

}  // namespace oracle
