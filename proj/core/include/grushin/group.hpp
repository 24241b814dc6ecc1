#pragma once

#include "grushin/core.hpp"
#include "grushin/sampled.hpp"

// The Heisenberg-Reiter group H_{n,m} = R^{n x m} x| (R^n x R^m) with law
//
//   (u,v,s) . (u',v',s') = (u+u', v+v', s+s' + (u'^T v - u^T v')/2),
//
// its representation sigma on functions over R^{n+m},
//
//   sigma_{(u,v,s)} f(x',x'') = f(x' + v, x'' + u^T x' + s + u^T v/2),
//
// and the transference operator Tf = Int k(g) sigma_{g^{-1}} f dg whose
// L^p(mu_a) norm is dominated by the weighted L^1 norm of k.

namespace grushin {

struct GroupElement {
    int n = 1, m = 1;
    Vec u;  // n x m, row-major over (j, k)
    Vec v;  // length n
    Vec s;  // length m

    GroupElement() : u(1, 0.0), v(1, 0.0), s(1, 0.0) {}
    GroupElement(int n_, int m_, Vec u_, Vec v_, Vec s_);
    static GroupElement identity(int n, int m);
};

GroupElement group_mul(const GroupElement& g, const GroupElement& h);
GroupElement group_inv(const GroupElement& g);

// sigma_g f, evaluated by multilinear interpolation with zero extension
// outside f's grid.  The output lives on f's grid.
SampledFunction sigma_apply(const GroupElement& g, const SampledFunction& f);

// Compactly supported kernel on a uniform (u, v, s) grid, with the exponent
// p of the weighted norm it will be measured in.  Axis order: the n*m
// u-coordinates, then v, then s.
struct GroupKernel {
    int n = 1, m = 1;
    Grid grid;
    std::vector<double> values;
    double p = 2.0;

    std::size_t size() const { return values.size(); }
    GroupElement element(std::size_t flat) const;
};

// ||k||_{L^1(exp(2 a.v / p) dg)}.
double group_kernel_weighted_l1(const GroupKernel& k, const Drift& a);

// Tf(x) = sum_g k(g) (sigma_{g^{-1}} f)(x) cellvolume(g).
SampledFunction transference_apply(const GroupKernel& k, const SampledFunction& f);

}  // namespace grushin
