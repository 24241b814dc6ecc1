#include "grushin/lab.hpp"

#include <algorithm>
#include <cmath>

#include "grushin/riesz.hpp"

namespace grushin {

double lp_norm(const SampledFunction& f, double p, const Drift& a) {
    if (!(p >= 1.0)) throw std::invalid_argument("lp_norm: p must be >= 1");
    if (a.n() != f.dims().n) throw std::invalid_argument("lp_norm: drift dimension mismatch");
    const double vol = f.grid().cell_volume();
    double sum = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) {
        if (!f.is_valid(i) || f[i] == 0.0) continue;
        const GrushinPoint y = f.point(i);
        sum += std::pow(std::abs(f[i]), p) * std::exp(2.0 * dot(a.a, y.x_prime)) * vol;
    }
    return std::pow(sum, 1.0 / p);
}

double weak_quasinorm(const SampledFunction& f, const Drift& a, int levels) {
    if (levels < 2) throw std::invalid_argument("weak_quasinorm: need >= 2 levels");
    if (a.n() != f.dims().n)
        throw std::invalid_argument("weak_quasinorm: drift dimension mismatch");
    double fmax = 0.0;
    double fmin_pos = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < f.size(); ++i) {
        if (!f.is_valid(i)) continue;
        const double v = std::abs(f[i]);
        fmax = std::max(fmax, v);
        if (v > 0.0) fmin_pos = std::min(fmin_pos, v);
    }
    if (fmax == 0.0) return 0.0;
    const double lo = std::max(fmin_pos, fmax * 1e-9);
    const double hi = fmax * (1.0 - 1e-12);
    const double vol = f.grid().cell_volume();

    double best = 0.0;
    for (int l = 0; l < levels; ++l) {
        const double s = lo * std::pow(hi / lo, static_cast<double>(l) / (levels - 1));
        double mu = 0.0;
        for (std::size_t i = 0; i < f.size(); ++i) {
            if (!f.is_valid(i) || std::abs(f[i]) <= s) continue;
            const GrushinPoint y = f.point(i);
            mu += std::exp(2.0 * dot(a.a, y.x_prime)) * vol;
        }
        best = std::max(best, s * mu);
    }
    return best;
}

SampledFunction gaussian_bump(const Dimensions& d, double half_extent, int points_per_axis,
                              double sigma, const Vec& center_prime) {
    Grid g = Grid::centered_box(std::vector<double>(d.n + d.m, half_extent),
                                std::vector<int>(d.n + d.m, points_per_axis));
    Vec c(d.n, 0.0);
    for (std::size_t j = 0; j < center_prime.size() && j < c.size(); ++j) c[j] = center_prime[j];
    return SampledFunction::sample(d, g, [&](const GrushinPoint& x) {
        double r2 = 0.0;
        for (int j = 0; j < d.n; ++j) r2 += (x.x_prime[j] - c[j]) * (x.x_prime[j] - c[j]);
        for (int k = 0; k < d.m; ++k) r2 += x.x_dprime[k] * x.x_dprime[k];
        return std::exp(-r2 / (2.0 * sigma * sigma));
    });
}

namespace {

struct FamilyMember {
    std::string name;
    SampledFunction f;
};

// base Gaussian profile pulled through delta_{1/s}: f(x) = F(delta_s x),
// sampled on the delta_{1/s} image of the base grid so the discrete sums
// transport exactly under the dilation identity.
SampledFunction pulled_profile(const Dimensions& d, double half_extent, int pts, double s,
                               double offset1) {
    std::vector<double> ext(d.n + d.m);
    for (int j = 0; j < d.n; ++j) ext[j] = half_extent / s;
    for (int k = 0; k < d.m; ++k) ext[d.n + k] = half_extent / (s * s);
    Grid g = Grid::centered_box(ext, std::vector<int>(d.n + d.m, pts));
    return SampledFunction::sample(d, g, [&](const GrushinPoint& x) {
        double r2 = 0.0;
        for (int j = 0; j < d.n; ++j) {
            const double z = s * x.x_prime[j] - (j == 0 ? offset1 : 0.0);
            r2 += z * z;
        }
        for (int k = 0; k < d.m; ++k) {
            const double z = s * s * x.x_dprime[k];
            r2 += z * z;
        }
        return std::exp(-r2 / 2.0);
    });
}

std::vector<FamilyMember> build_family(const Dimensions& d, double half_extent, int pts,
                                       double drift_mag, bool matched_only) {
    std::vector<FamilyMember> fam;
    fam.push_back({"matched", pulled_profile(d, half_extent, pts, drift_mag, 0.0)});
    if (matched_only) return fam;
    fam.push_back({"offset+", pulled_profile(d, half_extent, pts, 1.0, 2.0)});
    fam.push_back({"offset-", pulled_profile(d, half_extent, pts, 1.0, -2.0)});
    for (double s : {0.5, 2.0}) {
        fam.push_back({"dilated s=" + std::to_string(s).substr(0, 3),
                       pulled_profile(d, half_extent, pts, s, 0.0)});
    }
    return fam;
}

}  // namespace

NormReport norm_sweep(const GrushinMultiIndex& alpha, const std::vector<double>& drift_magnitudes,
                      const NormSweepOptions& opts) {
    const Dimensions d(1, 1);
    if (!alpha.compatible(d)) throw std::invalid_argument("norm_sweep: alpha must fit n = m = 1");
    if (!(opts.p > 1.0)) throw std::invalid_argument("norm_sweep: p must be > 1");
    for (double s : drift_magnitudes)
        if (!(s > 0.0)) throw std::invalid_argument("norm_sweep: drift magnitudes must be > 0");

    NormReport report;
    report.p = opts.p;
    report.alpha = alpha;
    report.drift_magnitudes = drift_magnitudes;
    report.matched_max = 0.0;
    report.matched_min = std::numeric_limits<double>::infinity();

    // spread bookkeeping: member name -> per-level ratios at each drift
    for (double mag : drift_magnitudes) {
        Drift a(Vec{mag});
        for (int level : opts.levels) {
            auto family = build_family(d, opts.half_extent, level, mag, opts.matched_only);
            for (auto& member : family) {
                SampledFunction rf = apply_riesz(member.f, alpha, a, opts.quadrature);
                const double ratio =
                    lp_norm(rf, opts.p, a) / lp_norm(member.f, opts.p, a);
                report.entries.push_back({mag, level, member.name, ratio});
                if (member.name == "matched" && level == opts.levels.back()) {
                    report.matched_max = std::max(report.matched_max, ratio);
                    report.matched_min = std::min(report.matched_min, ratio);
                }
            }
        }
    }

    // refinement spread: per (drift, member), max/min across levels
    for (double mag : drift_magnitudes) {
        for (const auto& e : report.entries) {
            if (e.drift_magnitude != mag) continue;
            double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
            for (const auto& e2 : report.entries) {
                if (e2.drift_magnitude == mag && e2.member == e.member) {
                    lo = std::min(lo, e2.ratio);
                    hi = std::max(hi, e2.ratio);
                }
            }
            if (lo > 0.0) report.refinement_spread =
                std::max(report.refinement_spread, hi / lo - 1.0);
        }
    }
    return report;
}

DriftLimitReport drift_limit_experiment(const SampledFunction& f, const DriftLimitConfig& cfg,
                                        const QuadratureSpec& q) {
    cfg.validate();
    if (cfg.probe_points.empty())
        throw std::invalid_argument("drift_limit_experiment: no probe points");
    SampledFunction limit = euclid_drift_riesz(f, cfg.k);

    // probes must sit on the grid: snap to the nearest grid point
    std::vector<std::size_t> probe_idx;
    const Grid& g = f.grid();
    for (const auto& p : cfg.probe_points) {
        std::vector<int> idx(g.rank());
        for (int ax = 0; ax < g.rank(); ++ax) {
            const double c = ax < f.dims().n ? p.x_prime[ax] : p.x_dprime[ax - f.dims().n];
            int i = static_cast<int>(std::lround((c - g.origin[ax]) / g.spacing[ax]));
            idx[ax] = std::clamp(i, 0, g.shape[ax] - 1);
        }
        probe_idx.push_back(f.flat_index(idx));
    }

    DriftLimitReport report;
    report.k = cfg.k;
    for (double R : cfg.R_list) {
        SampledFunction scaled = scaled_conjugated_riesz(f, cfg, R, q);
        double sup = 0.0;
        for (std::size_t i : probe_idx) sup = std::max(sup, std::abs(scaled[i] - limit[i]));
        report.R.push_back(R);
        report.sup_err.push_back(sup);
    }
    return report;
}

BlowupReport weak11_blowup_experiment(int k, const std::vector<double>& R_list,
                                      const SampledFunction& f, const QuadratureSpec& q) {
    if (k < 1) throw std::invalid_argument("weak11_blowup_experiment: k must be >= 1");
    DriftLimitConfig cfg = DriftLimitConfig::defaults(f.dims(), k, R_list);
    Drift e1 = Drift::zero(f.dims().n);
    e1.a[0] = 1.0;
    const double denom = lp_norm(f, 1.0, e1);

    BlowupReport report;
    report.k = k;
    for (double R : R_list) {
        SampledFunction scaled = scaled_conjugated_riesz(f, cfg, R, q);
        report.R.push_back(R);
        report.W.push_back(weak_quasinorm(scaled, e1) / denom);
    }
    return report;
}

}  // namespace grushin
