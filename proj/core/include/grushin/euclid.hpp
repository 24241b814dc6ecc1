#pragma once

#include "grushin/core.hpp"
#include "grushin/heat.hpp"
#include "grushin/sampled.hpp"

// The Euclidean drifted-Laplacian Riesz transform d^k/dx'_1^k (Lap_{e1})^{-k/2}
// that the scaled-drift Grushin transforms converge to, and the conjugated
// scaled operator itself.  Fourier convention: F(l) = Int f(x) e^{-2 pi i x.l} dx.

namespace grushin {

struct DriftLimitConfig {
    int k = 1;                      // derivative order
    std::vector<double> R_list;     // strictly decreasing scales
    GrushinPoint xi;                // translation anchor, |xi'| = |xi''| = 1
    std::vector<GrushinPoint> probe_points;

    static DriftLimitConfig defaults(const Dimensions& d, int k,
                                     std::vector<double> R_list = {1.0, 0.5, 0.25});
    void validate() const;
};

// e^{-x'_1} InvFourier[ (-1 + 2 pi i l'_1)^k (1 + 4 pi^2 |l|^2)^{-k/2}
//                       Fourier[f e^{y'_1}] ](x).
// The t-integral of the functional calculus collapses analytically through
// Int_0^inf t^{k/2-1} e^{-t(1+4pi^2|l|^2)} dt = Gamma(k/2)(1+4pi^2|l|^2)^{-k/2}.
// The output is real for real input; the discarded imaginary residue is
// reported through *imag_residue when given.
SampledFunction euclid_drift_riesz(const SampledFunction& f, int k,
                                   double* imag_residue = nullptr);

// (Lambda_R U) (d^k/dx'_1^k (G_{e1/R})^{-k/2}) (Lambda_R U)^{-1} f: builds
// g(y) = f((y - xi)/R) on the image grid, applies the Grushin Riesz
// transform with multi-index k e_1 and drift e_1/R, and reads the result
// back at y = R x + xi.  The returned function lives on f's grid.
SampledFunction scaled_conjugated_riesz(const SampledFunction& f, const DriftLimitConfig& cfg,
                                        double R, const QuadratureSpec& q = {});

}  // namespace grushin
