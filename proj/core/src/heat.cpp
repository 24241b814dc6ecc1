#include "grushin/heat.hpp"

#include <cmath>

#include "grushin/geometry.hpp"
#include "grushin/quadrature.hpp"
#include "kernel_internal.hpp"

namespace grushin {

using detail::Complex;
using detail::LineAmplitude;
using detail::PairData;

void QuadratureSpec::validate() const {
    if (lam_max < 0.0) throw std::invalid_argument("QuadratureSpec: lam_max must be >= 0");
    if (lam_nodes < 16) throw std::invalid_argument("QuadratureSpec: lam_nodes must be >= 16");
    if (!std::isnan(u_lo) && !std::isnan(u_hi) && !(u_lo < u_hi))
        throw std::invalid_argument("QuadratureSpec: need u_lo < u_hi");
    if (!(rel_tol > 0.0) || rel_tol > 1e-2)
        throw std::invalid_argument("QuadratureSpec: rel_tol must lie in (0, 1e-2]");
}

namespace {

void check_pair(const GrushinPoint& x, const GrushinPoint& y) {
    if (x.x_prime.size() != y.x_prime.size() || x.x_dprime.size() != y.x_dprime.size())
        throw std::invalid_argument("heat kernel: x and y live in different dimensions");
}

// 16-point angular rule on the unit circle.
constexpr int kAngularNodes = 16;

using detail::KernelEval;

// m = 1: (1/pi) Re Int_0^cut amp(l) e^{-i l dpp} dl.
KernelEval eval_m1(double t, const PairData& pair, double dpp, const GrushinMultiIndex* alpha,
                   const Drift* drift, const QuadratureSpec& q) {
    LineAmplitude amp(t, pair, alpha, drift);
    const double cut = detail::lambda_cutoff(t, q.lam_max);
    auto li = detail::integrate_lambda_line(amp, dpp, std::abs(dpp), cut, q.lam_nodes,
                                            1e-2 * q.rel_tol,
                                            detail::lambda_panel_cap(t, pair));
    KernelEval out;
    out.value = li.value.real() / M_PI;
    out.envelope = li.envelope / M_PI;
    out.tail = li.tail / M_PI;
    return out;
}

// m = 2: radial sweep with the fixed angular rule.  The prefactor is built
// per (rho, omega) node since the X'' insertions depend on the direction.
KernelEval eval_m2(double t, const PairData& pair, const Vec& dpp, const GrushinMultiIndex* alpha,
                   const Drift* drift, const QuadratureSpec& q) {
    const int n = pair.n;
    const int m = 2;
    const bool trivial = (alpha == nullptr) || alpha->order() == 0;

    std::array<double, kAngularNodes> wx, wy;
    for (int aix = 0; aix < kAngularNodes; ++aix) {
        const double th = 2.0 * M_PI * aix / kAngularNodes;
        wx[aix] = std::cos(th);
        wy[aix] = std::sin(th);
    }
    const double ang_w = 2.0 * M_PI / kAngularNodes;
    const double osc = norm2(dpp);

    auto radial_amp = [&](double rho) -> Complex {
        const MehlerTerms mt = mehler_terms(t, rho, n);
        if (mt.zero) return 0.0;
        const double kval = std::exp(mt.log_norm - mt.half_coth * pair.d2 - mt.lam_tanh * pair.xy);
        Complex sum(0.0, 0.0);
        for (int aix = 0; aix < kAngularNodes; ++aix) {
            const double phase = -rho * (wx[aix] * dpp[0] + wy[aix] * dpp[1]);
            Complex w(1.0, 0.0);
            if (!trivial) {
                const Complex lam_fac[2] = {Complex(0.0, -rho * wx[aix]),
                                            Complex(0.0, -rho * wy[aix])};
                Complex lead(1.0, 0.0);
                std::array<int, 2> exps{0, 0};
                for (int j = 0; j < n; ++j) {
                    for (int k = 0; k < m; ++k) {
                        const int p = alpha->second[j * m + k];
                        exps[j] += p;
                        for (int rep = 0; rep < p; ++rep) lead *= lam_fac[k];
                    }
                }
                detail::DensePoly poly = detail::DensePoly::monomial(n, exps.data(), lead);
                for (int j = 0; j < n; ++j) {
                    const double aj = drift ? drift->a[j] : 0.0;
                    const double slope = -2.0 * mt.half_coth;
                    const double offset = (2.0 * mt.half_coth - mt.lam_tanh) * pair.yp[j];
                    for (int rep = 0; rep < alpha->first[j]; ++rep)
                        poly.drift_derivative_step(j, Complex(offset - aj, 0.0), slope);
                }
                w = poly.eval(pair.xp.data());
            }
            sum += ang_w * w * std::polar(1.0, phase);
        }
        return rho * kval * sum;
    };

    const double cut = detail::lambda_cutoff(t, q.lam_max);
    auto li = detail::integrate_lambda_line(radial_amp, /*dpp=*/0.0, osc, cut, q.lam_nodes,
                                            1e-2 * q.rel_tol,
                                            detail::lambda_panel_cap(t, pair));
    const double norm = 1.0 / (4.0 * M_PI * M_PI);
    KernelEval out;
    out.value = li.value.real() * norm;
    out.envelope = li.envelope * norm;
    out.tail = li.tail * norm + std::abs(li.value.imag()) * norm;
    return out;
}

// The tail is gated against the integrand envelope: for oscillatory far
// pairs the value itself can vanish by cancellation while the quadrature is
// perfectly healthy in absolute terms.
void accuracy_gate(const KernelEval& ev, const QuadratureSpec& q, const char* what) {
    const double floor = std::max(std::abs(ev.value), ev.envelope);
    if (floor > 0.0 && ev.tail > q.rel_tol * floor)
        throw accuracy_error(std::string(what) + ": truncation tail exceeds rel_tol");
}

}  // namespace

namespace detail {

KernelEval kernel_lambda_eval(double t, const GrushinPoint& x, const GrushinPoint& y,
                              const GrushinMultiIndex* alpha, const Drift* drift,
                              const QuadratureSpec& q) {
    if (!(t > 0.0)) throw std::invalid_argument("heat kernel: t must be positive");
    check_pair(x, y);
    q.validate();
    const Dimensions d = x.dims();
    PairData pair(x.x_prime, y.x_prime);
    if (d.m == 1) {
        return eval_m1(t, pair, x.x_dprime[0] - y.x_dprime[0], alpha, drift, q);
    }
    if (d.m == 2) {
        return eval_m2(t, pair, sub(x.x_dprime, y.x_dprime), alpha, drift, q);
    }
    throw std::invalid_argument("heat kernel: only m <= 2 is supported");
}

}  // namespace detail

HeatKernelValue heat_kernel(double t, const GrushinPoint& x, const GrushinPoint& y,
                            const QuadratureSpec& q) {
    KernelEval ev = detail::kernel_lambda_eval(t, x, y, nullptr, nullptr, q);
    accuracy_gate(ev, q, "heat_kernel");
    HeatKernelValue out;
    out.t = t;
    out.x = x;
    out.y = y;
    out.a = Drift::zero(x.dims().n);
    out.value = ev.value;
    out.est_error = ev.tail;
    return out;
}

HeatKernelValue heat_kernel_drift(double t, const Drift& a, const GrushinPoint& x,
                                  const GrushinPoint& y, const QuadratureSpec& q) {
    if (a.n() != static_cast<int>(x.x_prime.size()))
        throw std::invalid_argument("heat_kernel_drift: drift dimension mismatch");
    HeatKernelValue out = heat_kernel(t, x, y, q);
    const double pre =
        std::exp(-a.norm() * a.norm() * t - dot(a.a, add(x.x_prime, y.x_prime)));
    out.a = a;
    out.value *= pre;
    out.est_error *= pre;
    return out;
}

double heat_kernel_derivative(double t, const Drift& a, const GrushinMultiIndex& alpha,
                              const GrushinPoint& x, const GrushinPoint& y,
                              const QuadratureSpec& q) {
    const Dimensions d = x.dims();
    if (!alpha.compatible(d))
        throw std::invalid_argument("heat_kernel_derivative: alpha incompatible with dims");
    if (a.n() != d.n)
        throw std::invalid_argument("heat_kernel_derivative: drift dimension mismatch");
    KernelEval ev = detail::kernel_lambda_eval(t, x, y, &alpha, &a, q);
    accuracy_gate(ev, q, "heat_kernel_derivative");
    const double pre =
        std::exp(-a.norm() * a.norm() * t - dot(a.a, add(x.x_prime, y.x_prime)));
    return pre * ev.value;
}

SampledFunction grushin_apply(const SampledFunction& f, const Drift& a) {
    const Dimensions d = f.dims();
    if (a.n() != d.n) throw std::invalid_argument("grushin_apply: drift dimension mismatch");
    const Grid& g = f.grid();
    for (int ax = 0; ax < g.rank(); ++ax)
        if (g.shape[ax] < 7)
            throw std::invalid_argument("grushin_apply: need >= 5 interior points per axis");

    SampledFunction out(d, g);
    const int rank = g.rank();
    std::vector<std::size_t> stride(rank, 1);
    for (int ax = rank - 2; ax >= 0; --ax)
        stride[ax] = stride[ax + 1] * static_cast<std::size_t>(g.shape[ax + 1]);

    const std::size_t total = f.size();
    parallel_for(total, [&](std::size_t flat) {
        const auto idx = out.multi_index(flat);
        bool interior = true;
        for (int ax = 0; ax < rank; ++ax)
            if (idx[ax] == 0 || idx[ax] == g.shape[ax] - 1) interior = false;
        if (interior) {
            for (int ax = 0; ax < rank && interior; ++ax) {
                if (!f.is_valid(flat - stride[ax]) || !f.is_valid(flat + stride[ax]) ||
                    !f.is_valid(flat))
                    interior = false;
            }
        }
        if (!interior) {
            out[flat] = 0.0;
            out.set_valid(flat, false);
            return;
        }
        double xp2 = 0.0;
        for (int j = 0; j < d.n; ++j) {
            const double c = g.coordinate(j, idx[j]);
            xp2 += c * c;
        }
        const double fc = f[flat];
        double acc = 0.0;
        for (int j = 0; j < d.n; ++j) {
            const double h = g.spacing[j];
            const double fp = f[flat + stride[j]], fm = f[flat - stride[j]];
            acc += -(fp - 2.0 * fc + fm) / (h * h);
            acc += -2.0 * a.a[j] * (fp - fm) / (2.0 * h);
        }
        for (int k = 0; k < d.m; ++k) {
            const int ax = d.n + k;
            const double h = g.spacing[ax];
            acc += -xp2 * (f[flat + stride[ax]] - 2.0 * fc + f[flat - stride[ax]]) / (h * h);
        }
        out[flat] = acc;
    });
    return out;
}

namespace {

// Shared-sweep table of H_t((x',0),(y',j h'')) over all grid pairs for
// n = m = 1.  Only the drift-free kernel is tabulated; the drift factors
// multiply outside.
struct HeatTable {
    int np = 0;   // x' axis points
    int npp = 0;  // x'' axis points
    std::vector<double> k;  // [(ix*np + iy)*npp + j]

    double at(int ix, int iy, int jdiff) const { return k[(ix * np + iy) * npp + jdiff]; }
};

HeatTable build_heat_table(double t, const Grid& g, const QuadratureSpec& q) {
    HeatTable tab;
    tab.np = g.shape[0];
    tab.npp = g.shape[1];
    tab.k.assign(static_cast<std::size_t>(tab.np) * tab.np * tab.npp, 0.0);
    const double hpp = g.spacing[1];
    const double gate = 5.0 * std::log(1e18) * t;  // d^2 <= gate keeps a cell active

    parallel_for(static_cast<std::size_t>(tab.np) * tab.np, [&](std::size_t group) {
        const int ix = static_cast<int>(group) / tab.np;
        const int iy = static_cast<int>(group) % tab.np;
        const Vec xp{g.coordinate(0, ix)}, yp{g.coordinate(0, iy)};
        PairData pair(xp, yp);
        GrushinPoint px(xp, Vec{0.0}), py(yp, Vec{0.0});

        int jmax = -1;
        for (int j = 0; j < tab.npp; ++j) {
            py.x_dprime[0] = -j * hpp;
            const double dist = grushin_distance(px, py);
            if (dist * dist <= gate) jmax = j;
        }
        if (jmax < 0) return;

        LineAmplitude amp(t, pair, nullptr, nullptr);
        const double cut = detail::lambda_cutoff(t, q.lam_max);
        const double osc = jmax * hpp;
        double width = std::min(cut / 8.0, detail::lambda_panel_cap(t, pair));
        if (osc > 0.0) width = std::min(width, 2.5 * 2.0 * M_PI / osc);
        const int npts = std::max(q.lam_nodes, 16);
        const GaussRule& rule = gauss_legendre(npts);

        std::vector<Complex> acc(jmax + 1, Complex(0.0, 0.0));
        double env = 0.0, prev_env = -1.0;
        double lo = 0.0;
        while (lo < cut) {
            const double hi = std::min(lo + width, cut);
            const double mid = 0.5 * (lo + hi), half = 0.5 * (hi - lo);
            double panel_env = 0.0;
            for (int i = 0; i < npts; ++i) {
                const double lam = mid + half * rule.nodes[i];
                const Complex aval = amp(lam);
                const double w = half * rule.weights[i];
                const Complex step = std::polar(1.0, -lam * hpp);
                Complex ph(w * aval);
                for (int j = 0; j <= jmax; ++j) {
                    acc[j] += ph;
                    ph *= step;
                }
                panel_env += w * std::abs(aval);
            }
            env += panel_env;
            if (env > 0.0 && prev_env > 0.0 && panel_env < prev_env && panel_env < 0.5 * env) {
                const double r = std::min(panel_env / prev_env, 0.95);
                if (panel_env * r / (1.0 - r) < 1e-2 * q.rel_tol * env) break;
            }
            prev_env = panel_env;
            lo = hi;
        }
        for (int j = 0; j <= jmax; ++j)
            tab.k[group * tab.npp + j] = acc[j].real() / M_PI;
    });
    return tab;
}

bool fast_grid(const SampledFunction& f) {
    return f.dims().n == 1 && f.dims().m == 1;
}

}  // namespace

SampledFunction apply_heat_semigroup(const SampledFunction& f, double t, const Drift& a,
                                     const QuadratureSpec& q) {
    if (!(t > 0.0)) throw std::invalid_argument("apply_heat_semigroup: t must be positive");
    const Dimensions d = f.dims();
    if (a.n() != d.n)
        throw std::invalid_argument("apply_heat_semigroup: drift dimension mismatch");
    q.validate();
    const double vol = f.grid().cell_volume();
    SampledFunction out(d, f.grid());

    if (fast_grid(f)) {
        const Grid& g = f.grid();
        HeatTable tab = build_heat_table(t, g, q);
        const double a1 = a.a[0];
        const double drift_t = std::exp(-a1 * a1 * t);
        const int np = g.shape[0], npp = g.shape[1];
        // weights w(y) = exp(-a y') f(y) exp(2 a y') vol
        std::vector<double> wf(f.size());
        for (int iy = 0; iy < np; ++iy) {
            const double yp = g.coordinate(0, iy);
            const double w = std::exp(a1 * yp) * vol;
            for (int jy = 0; jy < npp; ++jy) {
                const std::size_t flat = static_cast<std::size_t>(iy) * npp + jy;
                wf[flat] = f.is_valid(flat) ? w * f[flat] : 0.0;
            }
        }
        parallel_for(static_cast<std::size_t>(np), [&](std::size_t ixs) {
            const int ix = static_cast<int>(ixs);
            const double xps = std::exp(-a1 * g.coordinate(0, ix));
            for (int jx = 0; jx < npp; ++jx) {
                double sum = 0.0;
                for (int iy = 0; iy < np; ++iy) {
                    const double* row = &tab.k[(static_cast<std::size_t>(ix) * np + iy) * npp];
                    const double* frow = &wf[static_cast<std::size_t>(iy) * npp];
                    for (int jy = 0; jy < npp; ++jy) sum += row[std::abs(jx - jy)] * frow[jy];
                }
                out[static_cast<std::size_t>(ix) * npp + jx] = drift_t * xps * sum;
            }
        });
        return out;
    }

    // Generic dimensions: direct pair loop.
    parallel_for(out.size(), [&](std::size_t i) {
        const GrushinPoint x = out.point(i);
        double sum = 0.0;
        for (std::size_t jy = 0; jy < f.size(); ++jy) {
            if (!f.is_valid(jy) || f[jy] == 0.0) continue;
            const GrushinPoint y = f.point(jy);
            const double h = heat_kernel_drift(t, a, x, y, q).value;
            sum += h * f[jy] * std::exp(2.0 * dot(a.a, y.x_prime)) * vol;
        }
        out[i] = sum;
    });
    return out;
}

}  // namespace grushin
