#pragma once

#include <string>

#include "grushin/core.hpp"
#include "grushin/euclid.hpp"
#include "grushin/heat.hpp"
#include "grushin/sampled.hpp"

// Weighted norms on sampled functions and the empirical experiments: the
// operator-norm sweep over drift magnitudes (the transforms' uniform
// boundedness made measurable), the scaled-drift convergence experiment,
// and the weak-(1,1) blow-up experiment for high-order transforms.

namespace grushin {

// (sum |f|^p exp(2 a.y') cellvolume)^{1/p} over valid cells.
double lp_norm(const SampledFunction& f, double p, const Drift& a);

// sup over a geometric s-grid of s * mu_a{|f| > s}; `levels` spans |f|'s
// dynamic range.
double weak_quasinorm(const SampledFunction& f, const Drift& a, int levels = 64);

struct NormSweepEntry {
    double drift_magnitude = 0.0;
    int points_per_axis = 0;
    std::string member;
    double ratio = 0.0;  // ||R f||_p / ||f||_p
};

struct NormReport {
    double p = 2.0;
    GrushinMultiIndex alpha;
    std::vector<double> drift_magnitudes;
    std::vector<NormSweepEntry> entries;

    // max and min over the dilation-matched member at the finest level
    double matched_max = 0.0;
    double matched_min = 0.0;
    // worst relative spread across refinement levels of any member
    double refinement_spread = 0.0;
};

struct NormSweepOptions {
    double p = 2.0;
    std::vector<int> levels{32, 48, 64};  // points per axis
    double half_extent = 6.0;
    bool matched_only = false;  // skip the offset/dilated family members
    QuadratureSpec quadrature;
};

// For each |a| in the sweep (drift along e_1): estimates
// ||apply_riesz(f)||_p / ||f||_p over the test family.  The family contains
// offset Gaussians at +-2 e_1', dilation-pulled profiles with s in
// {0.5, 1, 2}, and the dilation-matched member pulled back by delta_{|a|},
// each sampled on the delta_{1/s} image of the base grid.  n = m = 1 only.
NormReport norm_sweep(const GrushinMultiIndex& alpha, const std::vector<double>& drift_magnitudes,
                      const NormSweepOptions& opts);

struct DriftLimitReport {
    int k = 1;
    std::vector<double> R;
    std::vector<double> sup_err;  // sup over probe points vs the Euclidean limit
};

// Prop-style convergence run: sup over cfg.probe_points of
// |scaled_conjugated_riesz(f, R) - euclid_drift_riesz(f)| for each R.
DriftLimitReport drift_limit_experiment(const SampledFunction& f, const DriftLimitConfig& cfg,
                                        const QuadratureSpec& q = {});

struct BlowupReport {
    int k = 1;
    std::vector<double> R;
    std::vector<double> W;  // weak quasinorm ratios
};

// W_k(R) = weak_quasinorm(scaled_conjugated_riesz(f, R), e_1) / ||f||_{L^1(mu_{e_1})}.
// The change-of-measure factors of the scaling chain cancel exactly, so under
// a weak-(1,1) bound the sequence would stay bounded; k >= 3 is expected to
// grow as R decreases.
BlowupReport weak11_blowup_experiment(int k, const std::vector<double>& R_list,
                                      const SampledFunction& f, const QuadratureSpec& q = {});

// Default experiment inputs on [-half, half]^{n+m}.
SampledFunction gaussian_bump(const Dimensions& d, double half_extent, int points_per_axis,
                              double sigma, const Vec& center_prime = {});

}  // namespace grushin
