#pragma once

#include <limits>

#include "grushin/core.hpp"
#include "grushin/sampled.hpp"

// Grushin heat kernel
//
//   H_t(x, y) = (2 pi)^{-m} Int_{R^m} k_{t,lambda}(x', y') e^{-i lambda.(x''-y'')} dlambda,
//
// its drifted variant H_{t,a} = exp(-|a|^2 t) exp(-a.(x'+y')) H_t, the
// derivatives X^alpha H_{t,a}, the operator G_a on sampled functions and the
// semigroup application.  For m = 1 the lambda integral reduces to a cosine
// integral on the half line; m = 2 uses a radial sweep with a 16-point
// angular rule; higher m is not supported.

namespace grushin {

// Knobs for the kernel quadratures.
//
//  lam_max   explicit lambda truncation radius; 0 selects the default rule
//            cut = 40 / sqrt(t), which keeps the integrand at the cutoff
//            below tolerance for the Mehler decay exp(-c lambda t).
//  lam_nodes Gauss nodes per lambda panel (>= 16).
//  u_lo/u_hi window of the log substitution t = exp(u) in the Riesz
//            t-integrals; NaN selects the defaults
//            u_lo = log(1e-4 d(x,y)^2), u_hi = log(50 / max(|a|^2, 0.02)).
//  u_nodes   total nodes across [u_lo, u_hi]; 0 selects 12 per unit, >= 64.
//  rel_tol   relative accuracy target; quadratures whose truncation-tail
//            estimate exceeds it raise accuracy_error.
struct QuadratureSpec {
    double lam_max = 0.0;
    int lam_nodes = 16;
    double u_lo = std::numeric_limits<double>::quiet_NaN();
    double u_hi = std::numeric_limits<double>::quiet_NaN();
    int u_nodes = 0;
    double rel_tol = 1e-6;

    void validate() const;
};

struct HeatKernelValue {
    double t = 0.0;
    GrushinPoint x, y;
    Drift a;
    double value = 0.0;
    double est_error = 0.0;
};

HeatKernelValue heat_kernel(double t, const GrushinPoint& x, const GrushinPoint& y,
                            const QuadratureSpec& q = {});

// H_{t,a}(x,y) = exp(-|a|^2 t) exp(-a.(x'+y')) H_t(x,y).
HeatKernelValue heat_kernel_drift(double t, const Drift& a, const GrushinPoint& x,
                                  const GrushinPoint& y, const QuadratureSpec& q = {});

// (X^alpha H_{t,a})(x, y), derivatives acting in x.  X'' powers insert
// (-i lambda_k x'_j) factors inside the lambda integral; X' powers combine
// the drift product rule (-a_j + d/dx'_j) with the Mehler derivative
// prefactors.  X'' factors apply before X' factors.
double heat_kernel_derivative(double t, const Drift& a, const GrushinMultiIndex& alpha,
                              const GrushinPoint& x, const GrushinPoint& y,
                              const QuadratureSpec& q = {});

// G_a f = -Lap_{x'} f - |x'|^2 Lap_{x''} f - 2 a . grad_{x'} f by 2nd order
// central differences.  The one-cell boundary layer is marked invalid.
// Requires at least 5 interior points per axis.
SampledFunction grushin_apply(const SampledFunction& f, const Drift& a);

// exp(-t G_a) f via x |-> sum_grid H_{t,a}(x,y) f(y) exp(2 a.y') cellvolume.
SampledFunction apply_heat_semigroup(const SampledFunction& f, double t, const Drift& a,
                                     const QuadratureSpec& q = {});

}  // namespace grushin
