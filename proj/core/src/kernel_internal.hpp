#pragma once

#include <array>
#include <cmath>
#include <complex>

#include "grushin/core.hpp"
#include "grushin/mehler.hpp"
#include "grushin/quadrature.hpp"

// Shared lambda-quadrature machinery behind the heat and Riesz kernel
// integrals.  The m = 1 reduction integrates a complex amplitude
//
//   amp(l) = W(l; x') k_{t,l}(x', y')
//
// over the half line against exp(-i l D'') and takes twice the real part;
// W collects the X'' insertions (-i l x'_j) and the drifted X' derivative
// recursion.  The m = 2 path uses a radial sweep with a fixed 16-point
// angular rule.

namespace grushin::detail {

using Complex = std::complex<double>;

struct PairData {
    Vec xp, yp;
    int n = 1;
    double d2 = 0.0;  // |x' - y'|^2
    double xy = 0.0;  // x' . y'

    PairData(const Vec& xprime, const Vec& yprime)
        : xp(xprime), yp(yprime), n(static_cast<int>(xprime.size())) {
        for (int j = 0; j < n; ++j) {
            const double d = xp[j] - yp[j];
            d2 += d * d;
            xy += xp[j] * yp[j];
        }
    }
};

// Dense complex polynomial in one or two variables, degree-capped.  Used in
// the hot quadrature loops where the map-based Poly would allocate.
struct DensePoly {
    static constexpr int kMaxDeg = 15;
    static constexpr int kStride = kMaxDeg + 1;

    int nvars = 1;
    int deg = 0;
    std::array<Complex, kStride * kStride> c{};

    Complex& at(int e0, int e1) { return c[e0 * kStride + e1]; }
    const Complex& at(int e0, int e1) const { return c[e0 * kStride + e1]; }

    static DensePoly monomial(int nvars, const int* exps, Complex coeff) {
        DensePoly p;
        p.nvars = nvars;
        p.deg = 0;
        int e0 = exps[0], e1 = nvars > 1 ? exps[1] : 0;
        for (int v = 0; v < nvars; ++v) p.deg = std::max(p.deg, exps[v]);
        p.at(e0, e1) = coeff;
        return p;
    }

    // W <- c0 * W + slope * x_var * W + dW/dx_var
    void drift_derivative_step(int var, Complex c0, double slope) {
        DensePoly out;
        out.nvars = nvars;
        out.deg = std::min(deg + 1, kMaxDeg);
        const int d1 = nvars > 1 ? deg : 0;
        for (int e0 = 0; e0 <= deg; ++e0) {
            for (int e1 = 0; e1 <= d1; ++e1) {
                const Complex w = at(e0, e1);
                if (w == 0.0) continue;
                out.at(e0, e1) += c0 * w;
                if (var == 0) {
                    out.at(e0 + 1, e1) += slope * w;
                    if (e0 > 0) out.at(e0 - 1, e1) += static_cast<double>(e0) * w;
                } else {
                    out.at(e0, e1 + 1) += slope * w;
                    if (e1 > 0) out.at(e0, e1 - 1) += static_cast<double>(e1) * w;
                }
            }
        }
        *this = out;
    }

    Complex eval(const double* x) const {
        const int d1 = nvars > 1 ? deg : 0;
        Complex sum = 0.0;
        for (int e0 = deg; e0 >= 0; --e0) {
            Complex row = 0.0;
            for (int e1 = d1; e1 >= 0; --e1) {
                row = row * (nvars > 1 ? x[1] : 0.0) + at(e0, e1);
            }
            sum = sum * x[0] + row;
        }
        return sum;
    }
};

// Amplitude W(l) k_{t,l}(x', y') on the lambda half-line (m = 1).  The
// prefactor W handles an arbitrary multi-index and drift; alpha == 0 short
// circuits to the plain Mehler kernel.
class LineAmplitude {
  public:
    LineAmplitude(double t, const PairData& pair, const GrushinMultiIndex* alpha,
                  const Drift* drift)
        : t_(t), pair_(&pair), alpha_(alpha), drift_(drift) {
        trivial_ = (alpha == nullptr) || alpha->order() == 0;
        if (alpha != nullptr) insert_total_ = alpha->order_dprime();
    }

    Complex operator()(double lam) const {
        const MehlerTerms mt = mehler_terms(t_, lam, pair_->n);
        if (mt.zero) return 0.0;
        const double kval = std::exp(mt.log_norm - mt.half_coth * pair_->d2 - mt.lam_tanh * pair_->xy);
        if (trivial_) return kval;
        return prefactor(lam, mt) * kval;
    }

  private:
    Complex prefactor(double lam, const MehlerTerms& mt) const {
        const int n = pair_->n;
        // X'' insertions: each power of X_{j,1} contributes (-i lam x'_j).
        Complex lead(1.0, 0.0);
        const Complex minus_i_lam(0.0, -lam);
        for (int rep = 0; rep < insert_total_; ++rep) lead *= minus_i_lam;

        std::array<int, 2> exps{0, 0};
        if (n <= 2) {
            for (int j = 0; j < n; ++j) exps[j] = alpha_->second[j * alpha_dim_m()];
            DensePoly w = DensePoly::monomial(n, exps.data(), lead);
            for (int j = 0; j < n; ++j) {
                const double aj = drift_ ? drift_->a[j] : 0.0;
                // d_j Q = -2 hc (x_j - y_j) - lt y_j, split into slope and offset
                const double slope = -2.0 * mt.half_coth;
                const double offset = (2.0 * mt.half_coth - mt.lam_tanh) * pair_->yp[j];
                for (int rep = 0; rep < alpha_->first[j]; ++rep)
                    w.drift_derivative_step(j, Complex(offset - aj, 0.0), slope);
            }
            return w.eval(pair_->xp.data());
        }
        // Generic n: map-based polynomial, slow path.
        Poly w(n);
        Poly::Key key(n, 0);
        for (int j = 0; j < n; ++j) key[j] = alpha_->second[j * alpha_dim_m()];
        w.add_term(key, lead);
        for (int j = 0; j < n; ++j) {
            const double aj = drift_ ? drift_->a[j] : 0.0;
            Poly dq(n);
            Poly::Key kx(n, 0);
            kx[j] = 1;
            dq.add_term(kx, -2.0 * mt.half_coth);
            dq.add_term(Poly::Key(n, 0),
                        (2.0 * mt.half_coth - mt.lam_tanh) * pair_->yp[j] - aj);
            for (int rep = 0; rep < alpha_->first[j]; ++rep) w = w.derivative(j) + w * dq;
        }
        return w.eval(pair_->xp);
    }

    int alpha_dim_m() const {
        return static_cast<int>(alpha_->second.size()) / pair_->n;
    }

    double t_;
    const PairData* pair_;
    const GrushinMultiIndex* alpha_;
    const Drift* drift_;
    bool trivial_ = true;
    int insert_total_ = 0;
};

struct LineIntegral {
    Complex value{0.0, 0.0};
    double envelope = 0.0;  // integral of |amp|
    double tail = 0.0;      // truncation-tail estimate
};

// Integrate amp(l) exp(-i l dpp) over [0, cut] with progressive Gauss panels.
// Panel widths resolve oscillations of length scale osc_scale (pass the
// magnitude of dpp, or of whatever phase lives inside amp).  Panels stop
// early once their |amp| mass falls below stop_rel times the accumulated
// mass twice in a row.
template <typename Amp>
LineIntegral integrate_lambda_line(const Amp& amp, double dpp, double osc_scale, double cut,
                                   int nodes_per_panel, double stop_rel,
                                   double width_cap = 0.0) {
    LineIntegral out;
    double width = cut / 8.0;
    if (osc_scale > 0.0) width = std::min(width, 2.5 * 2.0 * M_PI / osc_scale);
    if (width_cap > 0.0) width = std::min(width, width_cap);
    const int npts = std::max(nodes_per_panel, 16);
    const GaussRule& rule = gauss_legendre(npts);

    double prev_env = -1.0, second_last_env = -1.0, env = 0.0;
    double last_panel_env = 0.0;
    double lo = 0.0;
    while (lo < cut) {
        const double hi = std::min(lo + width, cut);
        const double mid = 0.5 * (lo + hi), half = 0.5 * (hi - lo);
        double panel_env = 0.0;
        Complex panel(0.0, 0.0);
        for (int i = 0; i < npts; ++i) {
            const double lam = mid + half * rule.nodes[i];
            const Complex a = amp(lam);
            const double w = half * rule.weights[i];
            panel += w * a * std::polar(1.0, -lam * dpp);
            panel_env += w * std::abs(a);
        }
        out.value += panel;
        env += panel_env;
        last_panel_env = panel_env;
        // Stop once the projected geometric remainder is negligible.  The
        // scale tracks the accumulated value so that oscillation-cancelling
        // integrals are driven to value-relative accuracy, with an envelope
        // floor so fully cancelling ones still terminate.
        if (env > 0.0 && prev_env > 0.0 && panel_env < prev_env && panel_env < 0.5 * env) {
            const double r = std::min(panel_env / prev_env, 0.95);
            const double remainder = panel_env * r / (1.0 - r);
            const double scale = std::max(std::abs(out.value), 1e-4 * env);
            if (remainder < stop_rel * scale) {
                out.tail = remainder;
                out.envelope = env;
                return out;
            }
        }
        second_last_env = prev_env;
        prev_env = panel_env;
        lo = hi;
    }
    // reached the hard cutoff; extrapolate from the last panel mass
    const double r = (second_last_env > 0.0 && last_panel_env < second_last_env)
                         ? std::min(last_panel_env / second_last_env, 0.95)
                         : 0.5;
    out.tail = last_panel_env * r / (1.0 - r);
    out.envelope = env;
    return out;
}

// Default lambda truncation: cut = lam_max / sqrt(t) with lam_max = 40
// unless the caller pinned an explicit radius in the quadrature spec.
inline double lambda_cutoff(double t, double lam_max_override) {
    if (lam_max_override > 0.0) return lam_max_override;
    return 40.0 / std::sqrt(t);
}

// Panels must also resolve the Mehler decay in lambda.  For lambda t large
// the kernel falls like exp(-lambda (t + (|x'|^2 + |y'|^2)/2)); five panels
// per e-folding keep Gauss-16 comfortably converged.
inline double lambda_panel_cap(double t, const PairData& pair) {
    double sq = 0.0;
    for (int j = 0; j < pair.n; ++j)
        sq += pair.xp[j] * pair.xp[j] + pair.yp[j] * pair.yp[j];
    return 5.0 / (t + 0.5 * sq);
}

struct KernelEval {
    double value = 0.0;
    double envelope = 0.0;
    double tail = 0.0;
};

}  // namespace grushin::detail

namespace grushin {
struct QuadratureSpec;
}

namespace grushin::detail {

// Lambda integral of (X^alpha H_t)(x, y) WITHOUT the drift prefactors
// exp(-|a|^2 t) exp(-a.(x'+y')); the drift enters only through the X'
// product rule inside the polynomial prefactor.  Defined in heat.cpp.
KernelEval kernel_lambda_eval(double t, const GrushinPoint& x, const GrushinPoint& y,
                              const GrushinMultiIndex* alpha, const Drift* drift,
                              const QuadratureSpec& q);

}  // namespace grushin::detail
