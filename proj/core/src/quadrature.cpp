#include "grushin/quadrature.hpp"

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <map>
#include <mutex>
#include <stdexcept>
#include <thread>

namespace grushin {

namespace {

GaussRule compute_gauss_legendre(int npts) {
    GaussRule rule;
    rule.nodes.resize(npts);
    rule.weights.resize(npts);
    // Newton iteration on P_n with the three-term recurrence.
    for (int i = 0; i < (npts + 1) / 2; ++i) {
        double x = std::cos(M_PI * (i + 0.75) / (npts + 0.5));
        double pp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = 0.0;
            for (int j = 0; j < npts; ++j) {
                double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * j + 1.0) * x * p1 - j * p2) / (j + 1.0);
            }
            pp = npts * (x * p0 - p1) / (x * x - 1.0);
            double dx = p0 / pp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        rule.nodes[i] = -x;
        rule.nodes[npts - 1 - i] = x;
        double w = 2.0 / ((1.0 - x * x) * pp * pp);
        rule.weights[i] = w;
        rule.weights[npts - 1 - i] = w;
    }
    return rule;
}

}  // namespace

const GaussRule& gauss_legendre(int npts) {
    if (npts < 1) throw std::invalid_argument("gauss_legendre: need at least one point");
    static std::mutex mtx;
    static std::map<int, GaussRule> cache;
    std::lock_guard<std::mutex> lock(mtx);
    auto it = cache.find(npts);
    if (it == cache.end()) it = cache.emplace(npts, compute_gauss_legendre(npts)).first;
    return it->second;
}

double gauss_panel(const std::function<double(double)>& f, double a, double b, int npts) {
    const GaussRule& rule = gauss_legendre(npts);
    const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    double sum = 0.0;
    for (int i = 0; i < npts; ++i) sum += rule.weights[i] * f(mid + half * rule.nodes[i]);
    return half * sum;
}

namespace {

double adapt_rec(const std::function<double(double)>& f, double a, double b, double tol,
                 double whole, int depth, int max_depth, double rel_tol,
                 const double* running) {
    const double m = 0.5 * (a + b);
    const double left = gauss_panel(f, a, m, 15);
    const double right = gauss_panel(f, m, b, 15);
    const double err = std::abs(left + right - whole);
    const double goal = std::max(tol, rel_tol * std::abs(*running));
    if (depth >= max_depth || err < goal) return left + right;
    return adapt_rec(f, a, m, 0.5 * tol, left, depth + 1, max_depth, rel_tol, running) +
           adapt_rec(f, m, b, 0.5 * tol, right, depth + 1, max_depth, rel_tol, running);
}

}  // namespace

double adaptive_integrate(const std::function<double(double)>& f, double a, double b,
                          double abs_tol, double rel_tol, int max_depth) {
    if (a == b) return 0.0;
    double coarse = gauss_panel(f, a, b, 15);
    double running = coarse;
    return adapt_rec(f, a, b, abs_tol, coarse, 0, max_depth, rel_tol, &running);
}

double Rng::normal() {
    double u1 = uniform(), u2 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
}

int worker_thread_count() {
    if (const char* env = std::getenv("GRUSHIN_THREADS")) {
        int k = std::atoi(env);
        if (k >= 1) return k;
    }
    unsigned hc = std::thread::hardware_concurrency();
    return hc == 0 ? 1 : static_cast<int>(hc);
}

void parallel_for(std::size_t count, const std::function<void(std::size_t)>& fn) {
    const int nthreads = std::min<std::size_t>(worker_thread_count(), count);
    if (nthreads <= 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(nthreads);
    for (int tid = 0; tid < nthreads; ++tid) {
        pool.emplace_back([&]() {
            for (;;) {
                std::size_t i = next.fetch_add(1);
                if (i >= count) return;
                fn(i);
            }
        });
    }
    for (auto& th : pool) th.join();
}

}  // namespace grushin
