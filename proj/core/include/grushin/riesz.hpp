#pragma once

#include "grushin/core.hpp"
#include "grushin/heat.hpp"
#include "grushin/sampled.hpp"

// Riesz transform kernels via the functional-calculus t-integral
//
//   R_{alpha,a}(x,y) = (1/Gamma(k/2)) Int_0^inf t^{k/2-1} (X^alpha H_{t,a})(x,y) dt,
//
// k = |alpha|, computed with the log substitution t = exp(u); the
// regularized variants X^alpha (delta I + G_a)^{-k/2} (I + eps G_a)^{-N}
// through the weight B_{eps,delta,k}; application to sampled functions with
// a principal-value surrogate on the diagonal cell; and the scalar
// multiplier gap (delta + s)^gamma - s^gamma.

namespace grushin {

struct diagonal_singularity_error : std::domain_error {
    using std::domain_error::domain_error;
};
struct divergent_integral_error : std::domain_error {
    using std::domain_error::domain_error;
};

struct RieszKernelRequest {
    GrushinMultiIndex alpha;
    Drift a;
    GrushinPoint x, y;
    QuadratureSpec q;
};

struct RegularizationParams {
    double eps = 1e-2;
    double delta = 1e-2;
    int N = 0;  // 0 selects ceil(Q/2) + 1

    int resolve_N(const Dimensions& d) const;
    void validate() const;
};

// B_{eps,delta,k}(t) = e^{-t} Int_0^t h^{N-1} e^{-h/eps} (t-h)^{k/2-1}
//                      e^{-delta (t-h)} dh.
// The endpoint singularity at h = t (k = 1) is removed by the substitution
// t - h = w^2 before the adaptive quadrature.
double b_eps_delta(double t, const RegularizationParams& p, int k, const Dimensions& dims);

// Kernel of X^alpha G_a^{-k/2}.  Requires x != y, and a != 0 when k >= Q.
double riesz_kernel(const RieszKernelRequest& req);

// Kernel of X^alpha (delta I + G_a)^{-k/2} (I + eps G_a)^{-N}; finite on the
// diagonal for k < Q.
double regularized_riesz_kernel(const RieszKernelRequest& req, const RegularizationParams& p);

// x |-> sum_grid R_{alpha,a}(x,y) f(y) exp(2 a.y') cellvolume.  The diagonal
// cell uses a displaced-evaluation surrogate: zero when the alpha power
// along the leading differentiated axis is odd (odd kernel symmetry), else
// the kernel value half a cell away along that axis.
SampledFunction apply_riesz(const SampledFunction& f, const GrushinMultiIndex& alpha,
                            const Drift& a, const QuadratureSpec& q = {});

// (delta + s)^gamma - s^gamma; the elementary bound by delta^gamma is what
// lets the regularization parameter delta be removed in the operator norm.
double scalar_multiplier_gap(double gamma, double delta, double s);

}  // namespace grushin
