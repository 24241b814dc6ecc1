#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "grushin/core.hpp"

// Functions sampled on uniform rectangular grids over R^{n+m}.  Axis order
// is (x'_1, ..., x'_n, x''_1, ..., x''_m); storage is row-major with the
// last axis fastest.  A validity mask marks cells whose values are not
// trustworthy (finite-difference boundary layers and the like); weighted
// norms skip invalid cells.

namespace grushin {

struct Grid {
    Vec origin;               // coordinate of the first sample on each axis
    Vec spacing;              // per-axis spacing, all > 0
    std::vector<int> shape;   // per-axis sample count

    int rank() const { return static_cast<int>(shape.size()); }
    std::size_t size() const;
    double cell_volume() const;
    double coordinate(int axis, int index) const { return origin[axis] + spacing[axis] * index; }
    // Centered box [-half_extent, half_extent] per axis with `points` samples.
    static Grid centered_box(const std::vector<double>& half_extent,
                             const std::vector<int>& points);
    bool operator==(const Grid&) const = default;
};

class SampledFunction {
  public:
    SampledFunction() = default;
    SampledFunction(Dimensions dims, Grid grid);

    static SampledFunction sample(Dimensions dims, Grid grid,
                                  const std::function<double(const GrushinPoint&)>& f);

    const Dimensions& dims() const { return dims_; }
    const Grid& grid() const { return grid_; }
    std::size_t size() const { return values_.size(); }

    double& operator[](std::size_t flat) { return values_[flat]; }
    double operator[](std::size_t flat) const { return values_[flat]; }
    std::vector<double>& values() { return values_; }
    const std::vector<double>& values() const { return values_; }

    bool is_valid(std::size_t flat) const { return valid_[flat] != 0; }
    void set_valid(std::size_t flat, bool v) { valid_[flat] = v ? 1 : 0; }
    bool all_valid() const;

    std::size_t flat_index(const std::vector<int>& idx) const;
    std::vector<int> multi_index(std::size_t flat) const;
    GrushinPoint point(std::size_t flat) const;
    GrushinPoint point(const std::vector<int>& idx) const;

    // Multilinear interpolation; zero outside the grid (functions are
    // treated as compactly supported on their grid).
    double interpolate(const Vec& coords) const;

    SampledFunction map(const std::function<double(double)>& fn) const;

  private:
    Dimensions dims_;
    Grid grid_;
    std::vector<double> values_;
    std::vector<std::uint8_t> valid_;
};

}  // namespace grushin
