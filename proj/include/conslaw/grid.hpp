#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace conslaw {

using Point = std::vector<double>;

/// Uniform, axis-aligned cell grid of rank 1..3. Axis 0 varies slowest.
/// Cell i along an axis covers [origin + i*h, origin + (i+1)*h].
struct Grid {
  std::vector<std::size_t> shape;
  std::vector<double> origin;
  std::vector<double> spacing;

  static Grid make_1d(std::size_t n, double lo, double hi);
  static Grid make_2d(std::size_t n0, double lo0, double hi0, std::size_t n1, double lo1, double hi1);

  /// Throws InputError unless rank is 1..3, all extents positive and spacings > 0.
  void validate() const;

  std::size_t rank() const { return shape.size(); }
  std::size_t size() const;
  double cell_volume() const;
  double lower(std::size_t axis) const { return origin[axis]; }
  double upper(std::size_t axis) const { return origin[axis] + shape[axis] * spacing[axis]; }
  double center(std::size_t axis, std::size_t i) const {
    return origin[axis] + (static_cast<double>(i) + 0.5) * spacing[axis];
  }
  double min_spacing() const;
  double max_spacing() const;

  std::size_t stride(std::size_t axis) const;
  std::vector<std::size_t> unravel(std::size_t flat) const;
  Point center_of(std::size_t flat) const;

  /// Index of the cell containing p along each axis, clamped to the grid.
  std::vector<std::size_t> locate(std::span<const double> p) const;
  bool contains(std::span<const double> p, double slack = 0.0) const;

  bool same_geometry(const Grid& other, double rel_tol = 1e-12) const;
};

/// Cell-averaged scalar on a Grid, with cached bounds and a timestamp.
class ScalarField {
 public:
  ScalarField() = default;
  ScalarField(Grid grid, std::vector<double> values, double time = 0.0);

  static ScalarField filled(const Grid& grid, double value, double time = 0.0);

  template <class F>
  static ScalarField sample(const Grid& grid, F&& f, double time = 0.0) {
    std::vector<double> v(grid.size());
    for (std::size_t k = 0; k < v.size(); ++k) v[k] = f(grid.center_of(k));
    return ScalarField(grid, std::move(v), time);
  }

  const Grid& grid() const { return grid_; }
  std::span<const double> values() const { return values_; }
  double operator[](std::size_t k) const { return values_[k]; }
  double time() const { return time_; }
  double min() const { return min_; }
  double max() const { return max_; }
  std::size_t size() const { return values_.size(); }

  /// Multilinear interpolation between cell centers; constant extrapolation
  /// in the outer half cells. Throws GeometryError outside the domain.
  double interpolate(std::span<const double> p) const;

  ScalarField with_values(std::vector<double> values) const;
  ScalarField with_time(double t) const;

  /// Sum of values times cell volume.
  double integral() const;

 private:
  Grid grid_;
  std::vector<double> values_;
  double time_ = 0.0;
  double min_ = 0.0;
  double max_ = 0.0;
};

/// Cellwise max/min of two fields on the same grid.
ScalarField pointwise_max(const ScalarField& a, const ScalarField& b);
ScalarField pointwise_min(const ScalarField& a, const ScalarField& b);

}  // namespace conslaw
