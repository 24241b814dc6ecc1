#include "grushin/sampled.hpp"

#include <cmath>

namespace grushin {

std::size_t Grid::size() const {
    std::size_t total = 1;
    for (int s : shape) total *= static_cast<std::size_t>(s);
    return total;
}

double Grid::cell_volume() const {
    double v = 1.0;
    for (double h : spacing) v *= h;
    return v;
}

Grid Grid::centered_box(const std::vector<double>& half_extent, const std::vector<int>& points) {
    if (half_extent.size() != points.size())
        throw std::invalid_argument("Grid::centered_box: size mismatch");
    Grid g;
    const int rank = static_cast<int>(points.size());
    g.origin.resize(rank);
    g.spacing.resize(rank);
    g.shape = points;
    for (int ax = 0; ax < rank; ++ax) {
        if (points[ax] < 2) throw std::invalid_argument("Grid::centered_box: need >= 2 points");
        if (!(half_extent[ax] > 0.0))
            throw std::invalid_argument("Grid::centered_box: extent must be positive");
        g.origin[ax] = -half_extent[ax];
        g.spacing[ax] = 2.0 * half_extent[ax] / (points[ax] - 1);
    }
    return g;
}

SampledFunction::SampledFunction(Dimensions dims, Grid grid)
    : dims_(dims), grid_(std::move(grid)) {
    if (grid_.rank() != dims_.n + dims_.m)
        throw std::invalid_argument("SampledFunction: grid rank must equal n + m");
    for (double h : grid_.spacing)
        if (!(h > 0.0)) throw std::invalid_argument("SampledFunction: spacing must be positive");
    values_.assign(grid_.size(), 0.0);
    valid_.assign(grid_.size(), 1);
}

SampledFunction SampledFunction::sample(Dimensions dims, Grid grid,
                                        const std::function<double(const GrushinPoint&)>& f) {
    SampledFunction out(dims, std::move(grid));
    for (std::size_t i = 0; i < out.size(); ++i) out.values_[i] = f(out.point(i));
    return out;
}

bool SampledFunction::all_valid() const {
    for (auto v : valid_)
        if (!v) return false;
    return true;
}

std::size_t SampledFunction::flat_index(const std::vector<int>& idx) const {
    std::size_t flat = 0;
    for (int ax = 0; ax < grid_.rank(); ++ax) flat = flat * grid_.shape[ax] + idx[ax];
    return flat;
}

std::vector<int> SampledFunction::multi_index(std::size_t flat) const {
    std::vector<int> idx(grid_.rank());
    for (int ax = grid_.rank() - 1; ax >= 0; --ax) {
        idx[ax] = static_cast<int>(flat % grid_.shape[ax]);
        flat /= grid_.shape[ax];
    }
    return idx;
}

GrushinPoint SampledFunction::point(std::size_t flat) const { return point(multi_index(flat)); }

GrushinPoint SampledFunction::point(const std::vector<int>& idx) const {
    Vec xp(dims_.n), xpp(dims_.m);
    for (int j = 0; j < dims_.n; ++j) xp[j] = grid_.coordinate(j, idx[j]);
    for (int k = 0; k < dims_.m; ++k) xpp[k] = grid_.coordinate(dims_.n + k, idx[dims_.n + k]);
    return GrushinPoint(std::move(xp), std::move(xpp));
}

double SampledFunction::interpolate(const Vec& coords) const {
    const int rank = grid_.rank();
    std::vector<int> base(rank);
    std::vector<double> frac(rank);
    for (int ax = 0; ax < rank; ++ax) {
        const double u = (coords[ax] - grid_.origin[ax]) / grid_.spacing[ax];
        if (u < 0.0 || u > grid_.shape[ax] - 1) return 0.0;
        int i = static_cast<int>(std::floor(u));
        if (i == grid_.shape[ax] - 1) --i;  // top edge falls into the last cell
        base[ax] = i;
        frac[ax] = u - i;
    }
    double sum = 0.0;
    const int corners = 1 << rank;
    std::vector<int> idx(rank);
    for (int c = 0; c < corners; ++c) {
        double w = 1.0;
        for (int ax = 0; ax < rank; ++ax) {
            const int bit = (c >> ax) & 1;
            idx[ax] = base[ax] + bit;
            w *= bit ? frac[ax] : 1.0 - frac[ax];
        }
        if (w != 0.0) sum += w * values_[flat_index(idx)];
    }
    return sum;
}

SampledFunction SampledFunction::map(const std::function<double(double)>& fn) const {
    SampledFunction out = *this;
    for (auto& v : out.values_) v = fn(v);
    return out;
}

}  // namespace grushin
