#include "grushin/group.hpp"

#include <cmath>

#include "grushin/quadrature.hpp"

namespace grushin {

GroupElement::GroupElement(int n_, int m_, Vec u_, Vec v_, Vec s_)
    : n(n_), m(m_), u(std::move(u_)), v(std::move(v_)), s(std::move(s_)) {
    if (static_cast<int>(u.size()) != n * m || static_cast<int>(v.size()) != n ||
        static_cast<int>(s.size()) != m)
        throw std::invalid_argument("GroupElement: component size mismatch");
}

GroupElement GroupElement::identity(int n, int m) {
    return GroupElement(n, m, Vec(n * m, 0.0), Vec(n, 0.0), Vec(m, 0.0));
}

GroupElement group_mul(const GroupElement& g, const GroupElement& h) {
    if (g.n != h.n || g.m != h.m)
        throw std::invalid_argument("group_mul: elements from different groups");
    GroupElement out = GroupElement::identity(g.n, g.m);
    for (int i = 0; i < g.n * g.m; ++i) out.u[i] = g.u[i] + h.u[i];
    for (int j = 0; j < g.n; ++j) out.v[j] = g.v[j] + h.v[j];
    // s + s' + (u'^T v - u^T v')/2
    for (int k = 0; k < g.m; ++k) {
        double twist = 0.0;
        for (int j = 0; j < g.n; ++j)
            twist += h.u[j * g.m + k] * g.v[j] - g.u[j * g.m + k] * h.v[j];
        out.s[k] = g.s[k] + h.s[k] + 0.5 * twist;
    }
    return out;
}

GroupElement group_inv(const GroupElement& g) {
    GroupElement out = g;
    for (auto& c : out.u) c = -c;
    for (auto& c : out.v) c = -c;
    for (auto& c : out.s) c = -c;
    return out;
}

namespace {

// coordinates of (sigma_g f)'s argument: (x' + v, x'' + u^T x' + s + u^T v/2)
Vec sigma_argument(const GroupElement& g, const GrushinPoint& x) {
    Vec coords(g.n + g.m);
    for (int j = 0; j < g.n; ++j) coords[j] = x.x_prime[j] + g.v[j];
    for (int k = 0; k < g.m; ++k) {
        double shift = g.s[k];
        for (int j = 0; j < g.n; ++j)
            shift += g.u[j * g.m + k] * (x.x_prime[j] + 0.5 * g.v[j]);
        coords[g.n + k] = x.x_dprime[k] + shift;
    }
    return coords;
}

}  // namespace

SampledFunction sigma_apply(const GroupElement& g, const SampledFunction& f) {
    const Dimensions d = f.dims();
    if (g.n != d.n || g.m != d.m)
        throw std::invalid_argument("sigma_apply: group and function dimensions differ");
    SampledFunction out(d, f.grid());
    for (std::size_t i = 0; i < out.size(); ++i)
        out[i] = f.interpolate(sigma_argument(g, out.point(i)));
    return out;
}

GroupElement GroupKernel::element(std::size_t flat) const {
    const int rank = n * m + n + m;
    std::vector<int> idx(rank);
    for (int ax = rank - 1; ax >= 0; --ax) {
        idx[ax] = static_cast<int>(flat % grid.shape[ax]);
        flat /= grid.shape[ax];
    }
    GroupElement g = GroupElement::identity(n, m);
    int ax = 0;
    for (int i = 0; i < n * m; ++i, ++ax) g.u[i] = grid.coordinate(ax, idx[ax]);
    for (int j = 0; j < n; ++j, ++ax) g.v[j] = grid.coordinate(ax, idx[ax]);
    for (int k = 0; k < m; ++k, ++ax) g.s[k] = grid.coordinate(ax, idx[ax]);
    return g;
}

double group_kernel_weighted_l1(const GroupKernel& k, const Drift& a) {
    if (a.n() != k.n)
        throw std::invalid_argument("group_kernel_weighted_l1: drift dimension mismatch");
    const double vol = k.grid.cell_volume();
    double sum = 0.0;
    for (std::size_t i = 0; i < k.size(); ++i) {
        if (k.values[i] == 0.0) continue;
        const GroupElement g = k.element(i);
        sum += std::abs(k.values[i]) * std::exp(2.0 * dot(a.a, g.v) / k.p) * vol;
    }
    return sum;
}

SampledFunction transference_apply(const GroupKernel& k, const SampledFunction& f) {
    const Dimensions d = f.dims();
    if (k.n != d.n || k.m != d.m)
        throw std::invalid_argument("transference_apply: dimensions differ");
    const double vol = k.grid.cell_volume();

    // collect the non-zero kernel cells once
    std::vector<std::pair<GroupElement, double>> cells;
    for (std::size_t i = 0; i < k.size(); ++i)
        if (k.values[i] != 0.0) cells.emplace_back(group_inv(k.element(i)), k.values[i] * vol);

    SampledFunction out(d, f.grid());
    parallel_for(out.size(), [&](std::size_t i) {
        const GrushinPoint x = out.point(i);
        double sum = 0.0;
        for (const auto& [ginv, w] : cells) sum += w * f.interpolate(sigma_argument(ginv, x));
        out[i] = sum;
    });
    return out;
}

}  // namespace grushin
