#include "grushin/riesz.hpp"

#include <cmath>

#include "grushin/geometry.hpp"
#include "grushin/quadrature.hpp"
#include "kernel_internal.hpp"

namespace grushin {

using detail::Complex;
using detail::KernelEval;
using detail::LineAmplitude;
using detail::PairData;

int RegularizationParams::resolve_N(const Dimensions& d) const {
    if (N > 0) return N;
    return (d.Q() + 1) / 2 + 1;  // ceil(Q/2) + 1
}

void RegularizationParams::validate() const {
    if (!(eps > 0.0 && eps < 1.0) || !(delta > 0.0 && delta < 1.0))
        throw std::invalid_argument("RegularizationParams: need 0 < eps, delta < 1");
    if (N < 0) throw std::invalid_argument("RegularizationParams: N must be >= 0");
}

namespace {

struct TimeWindow {
    double u_lo = 0.0;
    double u_hi = 0.0;
    int nodes = 0;
    int panels = 0;
};

TimeWindow time_window(double dist, const Drift& a, const QuadratureSpec& q) {
    TimeWindow w;
    w.u_lo = std::isnan(q.u_lo) ? std::log(1e-4 * dist * dist) : q.u_lo;
    const double a2 = a.norm() * a.norm();
    w.u_hi = std::isnan(q.u_hi) ? std::log(50.0 / std::max(a2, 0.02)) : q.u_hi;
    if (!(w.u_lo < w.u_hi))
        throw std::invalid_argument("riesz kernel: empty t-integration window");
    const double range = w.u_hi - w.u_lo;
    w.nodes = q.u_nodes > 0 ? q.u_nodes : std::max(64, static_cast<int>(std::ceil(12.0 * range)));
    w.panels = std::max(1, static_cast<int>(std::ceil(range)));
    return w;
}

// Weighted t-integral Int exp(u k/2 scaling) w(t) (X^alpha H_{t,a}) dt in the
// u = log t variable over a fixed window.  weight(t) carries everything except
// the lambda integral and the spatial drift prefactor.
struct TimeIntegral {
    double value = 0.0;
    double tail = 0.0;      // lambda tails plus endpoint estimates
    double envelope = 0.0;  // integral of |integrand|
};

template <typename WeightFn>
TimeIntegral integrate_time(const TimeWindow& w, const GrushinPoint& x, const GrushinPoint& y,
                            const GrushinMultiIndex& alpha, const Drift& a,
                            const QuadratureSpec& q, WeightFn&& weight) {
    TimeIntegral out;
    const int per_panel = std::max(6, w.nodes / w.panels);
    const GaussRule& rule = gauss_legendre(per_panel);
    const double panel_w = (w.u_hi - w.u_lo) / w.panels;
    double first_mag = 0.0, last_mag = 0.0;
    for (int p = 0; p < w.panels; ++p) {
        const double lo = w.u_lo + p * panel_w;
        const double mid = lo + 0.5 * panel_w, half = 0.5 * panel_w;
        for (int i = 0; i < per_panel; ++i) {
            const double u = mid + half * rule.nodes[i];
            const double t = std::exp(u);
            const double wt = weight(t) * t;  // dt = t du
            if (wt == 0.0) continue;
            KernelEval ev = detail::kernel_lambda_eval(t, x, y, &alpha, &a, q);
            const double gval = wt * ev.value;
            out.value += half * rule.weights[i] * gval;
            out.envelope += half * rule.weights[i] * std::abs(gval);
            out.tail += half * rule.weights[i] * std::abs(wt) * ev.tail;
            if (p == 0 && i == 0) first_mag = std::abs(gval);
            if (p == w.panels - 1 && i == per_panel - 1) last_mag = std::abs(gval);
        }
    }
    // endpoint tails: one log-unit times the boundary magnitude
    out.tail += first_mag + last_mag;
    return out;
}

double drift_prefactor(const Drift& a, const GrushinPoint& x, const GrushinPoint& y) {
    if (a.is_zero()) return 1.0;
    return std::exp(-dot(a.a, add(x.x_prime, y.x_prime)));
}

void riesz_accuracy_gate(const TimeIntegral& ti, const QuadratureSpec& q, const char* what) {
    const double floor = std::max(std::abs(ti.value), ti.envelope);
    if (floor > 0.0 && ti.tail > q.rel_tol * floor)
        throw accuracy_error(std::string(what) + ": t-integral tail exceeds rel_tol");
}

}  // namespace

double b_eps_delta(double t, const RegularizationParams& p, int k, const Dimensions& dims) {
    if (!(t > 0.0)) throw std::invalid_argument("b_eps_delta: t must be positive");
    p.validate();
    if (k < 1) throw std::invalid_argument("b_eps_delta: k must be >= 1");
    const int N = p.resolve_N(dims);
    // substitute t - h = w^2; the k = 1 endpoint singularity becomes smooth
    const double root = std::sqrt(t);
    auto integrand = [&](double w) {
        const double h = t - w * w;
        if (h < 0.0) return 0.0;
        return 2.0 * std::pow(h, N - 1) * std::exp(-h / p.eps) * std::pow(w, k - 1) *
               std::exp(-p.delta * w * w);
    };
    const double J = adaptive_integrate(integrand, 0.0, root, 0.0, 1e-11);
    return std::exp(-t) * J;
}

namespace {

void validate_request(const RieszKernelRequest& req, bool allow_diagonal) {
    const Dimensions d = req.x.dims();
    if (!req.alpha.compatible(d))
        throw std::invalid_argument("riesz_kernel: alpha incompatible with dims");
    if (req.alpha.order() < 1) throw std::invalid_argument("riesz_kernel: need |alpha| >= 1");
    if (req.a.n() != d.n) throw std::invalid_argument("riesz_kernel: drift dimension mismatch");
    const int k = req.alpha.order();
    if (req.a.is_zero() && k >= d.Q())
        throw divergent_integral_error("riesz_kernel: a = 0 with k >= Q diverges at infinity");
    if (!allow_diagonal && grushin_distance(req.x, req.y) == 0.0)
        throw diagonal_singularity_error("riesz_kernel: kernel is singular at x = y");
}

}  // namespace

double riesz_kernel(const RieszKernelRequest& req) {
    validate_request(req, /*allow_diagonal=*/false);
    req.q.validate();
    const int k = req.alpha.order();
    const double dist = grushin_distance(req.x, req.y);
    const TimeWindow w = time_window(dist, req.a, req.q);
    const double a2 = req.a.norm() * req.a.norm();
    const double gamma_k = std::tgamma(0.5 * k);
    auto weight = [&](double t) {
        return std::pow(t, 0.5 * k - 1.0) * std::exp(-a2 * t) / gamma_k;
    };
    TimeIntegral ti = integrate_time(w, req.x, req.y, req.alpha, req.a, req.q, weight);
    riesz_accuracy_gate(ti, req.q, "riesz_kernel");
    return drift_prefactor(req.a, req.x, req.y) * ti.value;
}

double regularized_riesz_kernel(const RieszKernelRequest& req, const RegularizationParams& p) {
    const Dimensions d = req.x.dims();
    const int k = req.alpha.order();
    const bool diagonal_ok = k < d.Q();
    validate_request(req, diagonal_ok);
    req.q.validate();
    p.validate();
    const int N = p.resolve_N(d);
    const double dist = std::max(grushin_distance(req.x, req.y), p.eps);
    const TimeWindow w = time_window(dist, req.a, req.q);
    const double a2 = req.a.norm() * req.a.norm();
    const double c = std::pow(p.eps, -N) / (std::tgamma(N) * std::tgamma(0.5 * k));
    auto weight = [&](double t) {
        // e^{-t} inside b_eps_delta is folded back out here
        return c * std::exp(t) * b_eps_delta(t, p, k, d) * std::exp(-a2 * t);
    };
    TimeIntegral ti = integrate_time(w, req.x, req.y, req.alpha, req.a, req.q, weight);
    riesz_accuracy_gate(ti, req.q, "regularized_riesz_kernel");
    return drift_prefactor(req.a, req.x, req.y) * ti.value;
}

double scalar_multiplier_gap(double gamma, double delta, double s) {
    if (!(gamma > 0.0 && gamma < 1.0))
        throw std::invalid_argument("scalar_multiplier_gap: gamma must lie in (0,1)");
    if (!(delta > 0.0 && delta < 1.0))
        throw std::invalid_argument("scalar_multiplier_gap: delta must lie in (0,1)");
    if (s < 0.0) throw std::invalid_argument("scalar_multiplier_gap: s must be >= 0");
    return std::pow(delta + s, gamma) - std::pow(s, gamma);
}

// ---------------------------------------------------------------------------
// apply_riesz
// ---------------------------------------------------------------------------

namespace {

// Axis along which the diagonal surrogate displaces, and the alpha power on
// that axis: the first differentiated X' axis, else the first x'' axis
// touched by an X'' factor.
struct DiagonalRule {
    int axis = 0;       // grid axis index
    int parity = 0;     // alpha power along that axis
};

DiagonalRule diagonal_rule(const GrushinMultiIndex& alpha, const Dimensions& d) {
    for (int j = 0; j < d.n; ++j)
        if (alpha.first[j] > 0) return {j, alpha.first[j]};
    for (int j = 0; j < d.n; ++j)
        for (int k = 0; k < d.m; ++k)
            if (alpha.second[j * d.m + k] > 0) return {d.n + k, alpha.second[j * d.m + k]};
    return {0, 0};
}

double diagonal_surrogate(const SampledFunction& f, const GrushinMultiIndex& alpha,
                          const Drift& a, const QuadratureSpec& q, const GrushinPoint& x) {
    const Dimensions d = f.dims();
    const DiagonalRule rule = diagonal_rule(alpha, d);
    if (rule.parity % 2 == 1) return 0.0;
    GrushinPoint y = x;
    const double h = f.grid().spacing[rule.axis];
    if (rule.axis < d.n)
        y.x_prime[rule.axis] += 0.5 * h;
    else
        y.x_dprime[rule.axis - d.n] += 0.5 * h;
    RieszKernelRequest req{alpha, a, x, y, q};
    return riesz_kernel(req);
}

// Kernel table for n = m = 1: R_{alpha,a}((x',x''),(y',y'')) depends on x''
// and y'' only through x'' - y'', and flips by (-1)^{|alpha''|} under
// x'' - y'' -> -(x'' - y'').  One lambda sweep per (x', y') pair serves every
// x''-offset bin at once.
class RieszTable {
  public:
    RieszTable(const SampledFunction& f, const GrushinMultiIndex& alpha, const Drift& a,
               const QuadratureSpec& q)
        : np_(f.grid().shape[0]),
          npp_(f.grid().shape[1]),
          sign_(alpha.order_dprime() % 2 == 1 ? -1.0 : 1.0) {
        build(f.grid(), alpha, a, q);
    }

    double at(int ix, int iy, int jdiff) const {
        const double v = k_[(static_cast<std::size_t>(ix) * np_ + iy) * npp_ + std::abs(jdiff)];
        return jdiff < 0 ? sign_ * v : v;
    }

    double max_rel_tail() const { return max_rel_tail_; }

  private:
    void build(const Grid& g, const GrushinMultiIndex& alpha, const Drift& a,
               const QuadratureSpec& q);

    int np_, npp_;
    double sign_;
    std::vector<double> k_;
    double max_rel_tail_ = 0.0;
};

void RieszTable::build(const Grid& g, const GrushinMultiIndex& alpha, const Drift& a,
                       const QuadratureSpec& q) {
    k_.assign(static_cast<std::size_t>(np_) * np_ * npp_, 0.0);
    const double hpp = g.spacing[1];
    const int kk = alpha.order();
    const double a1 = a.a[0];
    const double a2 = a1 * a1;
    const double gamma_k = std::tgamma(0.5 * kk);
    const double gate_c = 5.0 * std::log(1e18);
    const int lam_nodes = std::max(q.lam_nodes, 16);
    const GaussRule& lam_rule = gauss_legendre(lam_nodes);

    std::vector<double> tails(np_ * np_, 0.0);
    parallel_for(static_cast<std::size_t>(np_) * np_, [&](std::size_t group) {
        const int ix = static_cast<int>(group) / np_;
        const int iy = static_cast<int>(group) % np_;
        const Vec xp{g.coordinate(0, ix)}, yp{g.coordinate(0, iy)};
        PairData pair(xp, yp);
        GrushinPoint px(xp, Vec{0.0}), py(yp, Vec{0.0});

        const int jlo = (ix == iy) ? 1 : 0;  // x = y handled by the surrogate
        if (jlo >= npp_) return;
        std::vector<double> dist(npp_);
        for (int j = 0; j < npp_; ++j) {
            py.x_dprime[0] = -j * hpp;
            dist[j] = grushin_distance(px, py);
        }
        TimeWindow w;
        try {
            QuadratureSpec qg = q;
            if (std::isnan(qg.u_lo)) qg.u_lo = std::log(1e-4 * dist[jlo] * dist[jlo]);
            w = time_window(dist[jlo], a, qg);
        } catch (const std::invalid_argument&) {
            return;  // window degenerate for this pair; kernel is negligible
        }

        const int per_panel = std::max(6, w.nodes / w.panels);
        const GaussRule& u_rule = gauss_legendre(per_panel);
        const double panel_w = (w.u_hi - w.u_lo) / w.panels;

        std::vector<Complex> acc(npp_, Complex(0.0, 0.0));
        double env = 0.0, lam_tail = 0.0;

        for (int pnl = 0; pnl < w.panels; ++pnl) {
            const double lo_u = w.u_lo + pnl * panel_w;
            const double mid_u = lo_u + 0.5 * panel_w, half_u = 0.5 * panel_w;
            for (int iu = 0; iu < per_panel; ++iu) {
                const double u = mid_u + half_u * u_rule.nodes[iu];
                const double t = std::exp(u);
                // active x''-offset prefix at this t
                int jmax = jlo - 1;
                const double reach2 = gate_c * t;
                for (int j = jlo; j < npp_; ++j) {
                    if (dist[j] * dist[j] <= reach2)
                        jmax = j;
                    else
                        break;
                }
                if (jmax < jlo) continue;
                const double wt =
                    half_u * u_rule.weights[iu] * std::pow(t, 0.5 * kk) * std::exp(-a2 * t);

                LineAmplitude amp(t, pair, &alpha, &a);
                const double cut = detail::lambda_cutoff(t, q.lam_max);
                const double osc = jmax * hpp;
                double width = std::min(cut / 8.0, detail::lambda_panel_cap(t, pair));
                if (osc > 0.0) width = std::min(width, 2.5 * 2.0 * M_PI / osc);

                double node_env = 0.0, prev_env = -1.0;
                double lam_lo = 0.0;
                while (lam_lo < cut) {
                    const double lam_hi = std::min(lam_lo + width, cut);
                    const double lmid = 0.5 * (lam_lo + lam_hi), lhalf = 0.5 * (lam_hi - lam_lo);
                    double panel_env = 0.0;
                    for (int il = 0; il < lam_nodes; ++il) {
                        const double lam = lmid + lhalf * lam_rule.nodes[il];
                        const Complex aval = amp(lam);
                        if (aval == Complex(0.0, 0.0)) continue;
                        const double wl = lhalf * lam_rule.weights[il] * wt;
                        const Complex step = std::polar(1.0, -lam * hpp);
                        Complex ph = wl * aval * std::polar(1.0, -lam * (jlo * hpp));
                        for (int j = jlo; j <= jmax; ++j) {
                            acc[j] += ph;
                            ph *= step;
                        }
                        panel_env += std::abs(wl * aval);
                    }
                    node_env += panel_env;
                    if (node_env > 0.0 && prev_env > 0.0 && panel_env < prev_env &&
                        panel_env < 0.5 * node_env) {
                        const double r = std::min(panel_env / prev_env, 0.95);
                        const double remainder = panel_env * r / (1.0 - r);
                        if (remainder < 1e-2 * q.rel_tol * node_env) {
                            lam_tail += remainder;
                            break;
                        }
                    }
                    prev_env = panel_env;
                    lam_lo = lam_hi;
                }
                env += node_env;
            }
        }
        const double pre = std::exp(-a1 * (xp[0] + yp[0])) / (M_PI * gamma_k);
        for (int j = jlo; j < npp_; ++j)
            k_[group * npp_ + j] = pre * acc[j].real();
        tails[group] = env > 0.0 ? lam_tail / env : 0.0;
    });
    for (double t : tails) max_rel_tail_ = std::max(max_rel_tail_, t);
}

}  // namespace

SampledFunction apply_riesz(const SampledFunction& f, const GrushinMultiIndex& alpha,
                            const Drift& a, const QuadratureSpec& q) {
    const Dimensions d = f.dims();
    if (!alpha.compatible(d))
        throw std::invalid_argument("apply_riesz: alpha incompatible with dims");
    if (alpha.order() < 1) throw std::invalid_argument("apply_riesz: need |alpha| >= 1");
    if (a.n() != d.n) throw std::invalid_argument("apply_riesz: drift dimension mismatch");
    if (a.is_zero()) throw std::invalid_argument("apply_riesz: drift must be non-zero");
    q.validate();

    const Grid& g = f.grid();
    const double vol = g.cell_volume();
    SampledFunction out(d, g);

    // diagonal surrogate values depend on x only through x' (displacements
    // along a single axis); cache per x'-index on the fast path
    if (d.n == 1 && d.m == 1) {
        RieszTable tab(f, alpha, a, q);
        const int np = g.shape[0], npp = g.shape[1];
        const double a1 = a.a[0];

        std::vector<double> diag(np);
        for (int ix = 0; ix < np; ++ix) {
            GrushinPoint x(Vec{g.coordinate(0, ix)}, Vec{0.0});
            diag[ix] = diagonal_surrogate(f, alpha, a, q, x);
        }
        std::vector<double> wf(f.size());
        for (int iy = 0; iy < np; ++iy) {
            const double w = std::exp(2.0 * a1 * g.coordinate(0, iy)) * vol;
            for (int jy = 0; jy < npp; ++jy) {
                const std::size_t flat = static_cast<std::size_t>(iy) * npp + jy;
                wf[flat] = f.is_valid(flat) ? w * f[flat] : 0.0;
            }
        }
        parallel_for(static_cast<std::size_t>(np), [&](std::size_t ixs) {
            const int ix = static_cast<int>(ixs);
            for (int jx = 0; jx < npp; ++jx) {
                double sum = 0.0;
                for (int iy = 0; iy < np; ++iy)
                    for (int jy = 0; jy < npp; ++jy)
                        sum += tab.at(ix, iy, jx - jy) * wf[static_cast<std::size_t>(iy) * npp + jy];
                const std::size_t flat = static_cast<std::size_t>(ix) * npp + jx;
                sum += diag[ix] * wf[flat];
                out[flat] = sum;
            }
        });
        return out;
    }

    // generic dimensions: direct pair loop (small grids only)
    parallel_for(out.size(), [&](std::size_t i) {
        const GrushinPoint x = out.point(i);
        double sum = 0.0;
        for (std::size_t jy = 0; jy < f.size(); ++jy) {
            if (!f.is_valid(jy) || f[jy] == 0.0) continue;
            const GrushinPoint y = f.point(jy);
            const double wy = std::exp(2.0 * dot(a.a, y.x_prime)) * vol;
            double kv;
            if (jy == i) {
                kv = diagonal_surrogate(f, alpha, a, q, x);
            } else {
                RieszKernelRequest req{alpha, a, x, y, q};
                kv = riesz_kernel(req);
            }
            sum += kv * f[jy] * wy;
        }
        out[i] = sum;
    });
    return out;
}

}  // namespace grushin
