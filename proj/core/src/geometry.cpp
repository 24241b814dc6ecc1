#include "grushin/geometry.hpp"

#include <cmath>

#include "grushin/quadrature.hpp"

namespace grushin {

double grushin_distance(const GrushinPoint& x, const GrushinPoint& y) {
    const double dp = norm2(sub(x.x_prime, y.x_prime));
    const double dpp = norm2(sub(x.x_dprime, y.x_dprime));
    if (dpp == 0.0) return dp;
    const double reach = norm2(x.x_prime) + norm2(y.x_prime);
    const double root = std::sqrt(dpp);
    if (root <= reach) return dp + dpp / reach;
    return dp + root;
}

double ball_volume_lebesgue_ref(const GrushinPoint& x, double r) {
    if (!(r > 0.0)) throw std::invalid_argument("ball_volume_lebesgue_ref: r must be positive");
    const Dimensions d = x.dims();
    const double xp = norm2(x.x_prime);
    return std::pow(r, d.n + d.m) * std::pow(r + xp, d.m);
}

namespace {

struct BoxSampler {
    const GrushinPoint& x;
    double r;
    double dpp_half_width;

    // One sample with y'_1 restricted to [lo1, hi1]; returns the exponential
    // weight if the sample lands in B(x, r), else 0.
    double draw(Rng& rng, const Drift& a, double lo1, double hi1) const {
        const Dimensions d = x.dims();
        GrushinPoint y = x;
        y.x_prime[0] = rng.uniform(lo1, hi1);
        for (int j = 1; j < d.n; ++j)
            y.x_prime[j] = rng.uniform(x.x_prime[j] - r, x.x_prime[j] + r);
        for (int k = 0; k < d.m; ++k)
            y.x_dprime[k] =
                rng.uniform(x.x_dprime[k] - dpp_half_width, x.x_dprime[k] + dpp_half_width);
        if (grushin_distance(x, y) >= r) return 0.0;
        return a.is_zero() ? 1.0 : std::exp(2.0 * dot(a.a, y.x_prime));
    }
};

}  // namespace

VolumeEstimate ball_volume_mu_mc(const GrushinPoint& x, double r, const Drift& a,
                                 std::uint64_t samples, std::uint64_t seed) {
    if (!(r > 0.0)) throw std::invalid_argument("ball_volume_mu_mc: r must be positive");
    if (samples < 10000)
        throw std::invalid_argument("ball_volume_mu_mc: need at least 1e4 samples");
    const Dimensions d = x.dims();
    if (a.n() != d.n) throw std::invalid_argument("ball_volume_mu_mc: drift dimension mismatch");

    const double xp = norm2(x.x_prime);
    BoxSampler box{x, r, r * (2.0 * xp + r) + r * r};

    const int strata = (a.norm() * r > 2.0) ? 16 : 1;
    const double lo1 = x.x_prime[0] - r, hi1 = x.x_prime[0] + r;
    const double slab = (hi1 - lo1) / strata;
    double cross_section = 2.0 * box.dpp_half_width;
    double box_vol_per_slab = slab * std::pow(cross_section, d.m);
    for (int j = 1; j < d.n; ++j) box_vol_per_slab *= 2.0 * r;

    double total = 0.0, var = 0.0;
    std::uint64_t hits = 0;
    Rng root(seed);
    for (int s = 0; s < strata; ++s) {
        Rng rng = root.split(s);
        const std::uint64_t ns = samples / strata + (s < int(samples % strata) ? 1 : 0);
        double sum = 0.0, sum2 = 0.0;
        for (std::uint64_t i = 0; i < ns; ++i) {
            const double w = box.draw(rng, a, lo1 + s * slab, lo1 + (s + 1) * slab);
            if (w > 0.0) ++hits;
            sum += w;
            sum2 += w * w;
        }
        const double mean = sum / ns;
        const double mean_var = (sum2 / ns - mean * mean) / (ns > 1 ? ns - 1 : 1);
        total += box_vol_per_slab * mean;
        var += box_vol_per_slab * box_vol_per_slab * std::max(mean_var, 0.0);
    }
    if (hits == 0) throw degenerate_estimate_error("ball_volume_mu_mc: no hits inside the ball");

    VolumeEstimate out;
    out.value = total;
    out.std_err = std::sqrt(var);
    out.samples = samples;
    out.seed = seed;
    return out;
}

double ball_volume_mu_asymptotic(const GrushinPoint& x, double r, const Drift& a) {
    if (!(r > 0.0)) throw std::invalid_argument("ball_volume_mu_asymptotic: r must be positive");
    if (a.is_zero())
        throw std::invalid_argument(
            "ball_volume_mu_asymptotic: a must be non-zero (use the Lebesgue reference)");
    const Dimensions d = x.dims();
    const double an = a.norm();
    const double xp = norm2(x.x_prime);
    const double ax = dot(a.a, x.x_prime);
    if (r <= 1.0 / an) return std::exp(2.0 * ax) * std::pow(r, d.n + d.m) * std::pow(r + xp, d.m);
    return std::pow(an, -0.5 * (d.n + 1) - d.m) * std::exp(2.0 * (ax + an * r)) *
           std::pow(r, 0.5 * (d.n - 1)) * std::pow(r + xp, d.m);
}

}  // namespace grushin
