#pragma once

#include <cstdint>

#include "grushin/core.hpp"

// The explicit Grushin quasi-metric, the Lebesgue ball-volume comparison
// quantity, and ball volumes for the exponential measure
// d(mu_a) = exp(2 a . x') dx, both by Monte Carlo and by the two-regime
// closed-form asymptotic.

namespace grushin {

struct BallSpec {
    GrushinPoint center;
    double radius = 0.0;
};

struct VolumeEstimate {
    double value = 0.0;
    double std_err = 0.0;
    std::uint64_t samples = 0;
    std::uint64_t seed = 0;
};

// Two-regime quasi-metric:
//   d(x,y) = |x'-y'| + |x''-y''| / (|x'|+|y'|)   if |x''-y''|^{1/2} <= |x'|+|y'|
//   d(x,y) = |x'-y'| + |x''-y''|^{1/2}           otherwise.
// Both branches agree on the regime boundary.
double grushin_distance(const GrushinPoint& x, const GrushinPoint& y);

// Comparison quantity r^{n+m} (r + |x'|)^m for the Lebesgue measure of the
// quasi-metric ball B(x, r).
double ball_volume_lebesgue_ref(const GrushinPoint& x, double r);

// mu_a(B(x,r)) by uniform rejection sampling over the bounding box
// { |y'_i - x'_i| <= r, |y''_k - x''_k| <= r(2|x'|+r) + r^2 } with the
// exponential weight.  When |a| r > 2 the first x'-coordinate is stratified
// into 16 slabs with one deterministic substream each.
VolumeEstimate ball_volume_mu_mc(const GrushinPoint& x, double r, const Drift& a,
                                 std::uint64_t samples, std::uint64_t seed);

// Two-regime closed form:
//   r <= 1/|a|:  exp(2 a.x') r^{n+m} (r+|x'|)^m
//   r >  1/|a|:  |a|^{-(n+1)/2 - m} exp(2(a.x' + |a| r)) r^{(n-1)/2} (r+|x'|)^m
double ball_volume_mu_asymptotic(const GrushinPoint& x, double r, const Drift& a);

}  // namespace grushin
