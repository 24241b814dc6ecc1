#pragma once

#include <cstdint>
#include <functional>
#include <vector>

// 1-D quadrature building blocks used by every kernel integral in the
// library, plus the deterministic RNG for the Monte Carlo estimators and a
// small thread pool helper.

namespace grushin {

struct GaussRule {
    std::vector<double> nodes;    // on (-1, 1)
    std::vector<double> weights;  // sum to 2
};

// Gauss-Legendre rule with `npts` points; cached per point count.
const GaussRule& gauss_legendre(int npts);

// Integrate f over [a, b] with a single npts-point Gauss-Legendre rule.
double gauss_panel(const std::function<double(double)>& f, double a, double b, int npts);

// Adaptive bisection built on nested 7/15-point Gauss rules.  Stops when the
// local error estimate drops below max(abs_tol, rel_tol * |running total|).
double adaptive_integrate(const std::function<double(double)>& f, double a, double b,
                          double abs_tol = 0.0, double rel_tol = 1e-10, int max_depth = 40);

// SplitMix64: tiny, portable, bit-exact across platforms.
struct Rng {
    std::uint64_t state;

    explicit Rng(std::uint64_t seed) : state(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }
    // Uniform in [0, 1).
    double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
    // Uniform in [lo, hi).
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
    // Standard normal via Box-Muller (discards the second variate).
    double normal();
    // Derive an independent stream for substream `k`.
    Rng split(std::uint64_t k) const { return Rng(state ^ (0x632be59bd9b4e019ULL * (k + 1))); }
};

// Runs fn(i) for i in [0, count) over the available worker threads.  The
// thread count comes from GRUSHIN_THREADS, defaulting to the hardware
// concurrency.  Iterations must not touch shared mutable state.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& fn);

int worker_thread_count();

}  // namespace grushin
