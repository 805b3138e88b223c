#include "conslaw/grid.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "conslaw/errors.hpp"

namespace conslaw {

Grid Grid::make_1d(std::size_t n, double lo, double hi) {
  Grid g{{n}, {lo}, {(hi - lo) / static_cast<double>(n)}};
  g.validate();
  return g;
}

Grid Grid::make_2d(std::size_t n0, double lo0, double hi0, std::size_t n1, double lo1, double hi1) {
  Grid g{{n0, n1}, {lo0, lo1}, {(hi0 - lo0) / static_cast<double>(n0), (hi1 - lo1) / static_cast<double>(n1)}};
  g.validate();
  return g;
}

void Grid::validate() const {
  if (shape.empty() || shape.size() > 3) throw InputError("grid rank must be 1..3");
  if (origin.size() != shape.size() || spacing.size() != shape.size())
    throw InputError("grid origin/spacing rank mismatch");
  for (std::size_t a = 0; a < shape.size(); ++a) {
    if (shape[a] == 0) throw InputError("grid extent must be positive");
    if (!(spacing[a] > 0.0) || !std::isfinite(spacing[a])) throw InputError("grid spacing must be positive");
    if (!std::isfinite(origin[a])) throw InputError("grid origin must be finite");
  }
}

std::size_t Grid::size() const {
  std::size_t n = 1;
  for (auto s : shape) n *= s;
  return n;
}

double Grid::cell_volume() const {
  double v = 1.0;
  for (auto h : spacing) v *= h;
  return v;
}

double Grid::min_spacing() const { return *std::min_element(spacing.begin(), spacing.end()); }
double Grid::max_spacing() const { return *std::max_element(spacing.begin(), spacing.end()); }

std::size_t Grid::stride(std::size_t axis) const {
  std::size_t s = 1;
  for (std::size_t a = axis + 1; a < shape.size(); ++a) s *= shape[a];
  return s;
}

std::vector<std::size_t> Grid::unravel(std::size_t flat) const {
  std::vector<std::size_t> idx(shape.size());
  for (std::size_t a = shape.size(); a-- > 0;) {
    idx[a] = flat % shape[a];
    flat /= shape[a];
  }
  return idx;
}

Point Grid::center_of(std::size_t flat) const {
  Point p(shape.size());
  for (std::size_t a = shape.size(); a-- > 0;) {
    p[a] = center(a, flat % shape[a]);
    flat /= shape[a];
  }
  return p;
}

std::vector<std::size_t> Grid::locate(std::span<const double> p) const {
  std::vector<std::size_t> idx(shape.size());
  for (std::size_t a = 0; a < shape.size(); ++a) {
    double f = std::floor((p[a] - origin[a]) / spacing[a]);
    f = std::clamp(f, 0.0, static_cast<double>(shape[a] - 1));
    idx[a] = static_cast<std::size_t>(f);
  }
  return idx;
}

bool Grid::contains(std::span<const double> p, double slack) const {
  for (std::size_t a = 0; a < shape.size(); ++a) {
    if (p[a] < lower(a) - slack || p[a] > upper(a) + slack) return false;
  }
  return true;
}

bool Grid::same_geometry(const Grid& o, double rel_tol) const {
  if (shape != o.shape) return false;
  for (std::size_t a = 0; a < shape.size(); ++a) {
    double h = spacing[a];
    if (std::abs(spacing[a] - o.spacing[a]) > rel_tol * h) return false;
    if (std::abs(origin[a] - o.origin[a]) > rel_tol * std::max(h, std::abs(origin[a]))) return false;
  }
  return true;
}

ScalarField::ScalarField(Grid grid, std::vector<double> values, double time)
    : grid_(std::move(grid)), values_(std::move(values)), time_(time) {
  grid_.validate();
  if (values_.size() != grid_.size())
    throw InputError("field has " + std::to_string(values_.size()) + " values for " +
                     std::to_string(grid_.size()) + " cells");
  if (!std::isfinite(time_)) throw InputError("field time must be finite");
  min_ = values_.front();
  max_ = values_.front();
  for (double v : values_) {
    if (!std::isfinite(v)) throw NumericalError("non-finite field value");
    min_ = std::min(min_, v);
    max_ = std::max(max_, v);
  }
}

ScalarField ScalarField::filled(const Grid& grid, double value, double time) {
  return ScalarField(grid, std::vector<double>(grid.size(), value), time);
}

double ScalarField::interpolate(std::span<const double> p) const {
  const std::size_t r = grid_.rank();
  if (p.size() != r) throw InputError("point rank does not match field rank");
  std::size_t i0[3];
  double w[3];
  for (std::size_t a = 0; a < r; ++a) {
    const double h = grid_.spacing[a];
    const double slack = 1e-9 * h;
    if (p[a] < grid_.lower(a) - slack || p[a] > grid_.upper(a) + slack)
      throw GeometryError("interpolation point outside field domain");
    const std::size_t n = grid_.shape[a];
    double s = (p[a] - grid_.origin[a]) / h - 0.5;
    if (n == 1 || s <= 0.0) {
      i0[a] = 0;
      w[a] = 0.0;
    } else if (s >= static_cast<double>(n - 1)) {
      i0[a] = n - 2;
      w[a] = 1.0;
    } else {
      const double nearest = std::round(s);
      if (std::abs(s - nearest) < 1e-9) s = nearest;
      double f = std::floor(s);
      if (f >= static_cast<double>(n - 1)) f = static_cast<double>(n - 2);
      i0[a] = static_cast<std::size_t>(f);
      w[a] = s - f;
    }
  }
  double acc = 0.0;
  const std::size_t corners = std::size_t{1} << r;
  for (std::size_t c = 0; c < corners; ++c) {
    double weight = 1.0;
    std::size_t flat = 0;
    bool skip = false;
    for (std::size_t a = 0; a < r; ++a) {
      const bool hi = (c >> a) & 1U;
      double wa = hi ? w[a] : 1.0 - w[a];
      if (wa == 0.0) {
        skip = true;
        break;
      }
      weight *= wa;
      flat += (i0[a] + (hi ? 1 : 0)) * grid_.stride(a);
    }
    if (!skip) acc += weight * values_[flat];
  }
  return acc;
}

ScalarField ScalarField::with_values(std::vector<double> values) const {
  return ScalarField(grid_, std::move(values), time_);
}

ScalarField ScalarField::with_time(double t) const {
  ScalarField out = *this;
  out.time_ = t;
  return out;
}

double ScalarField::integral() const {
  double s = 0.0;
  for (double v : values_) s += v;
  return s * grid_.cell_volume();
}

namespace {
template <class Op>
ScalarField combine(const ScalarField& a, const ScalarField& b, Op op) {
  if (!a.grid().same_geometry(b.grid())) throw InputError("fields live on different grids");
  std::vector<double> v(a.size());
  for (std::size_t k = 0; k < v.size(); ++k) v[k] = op(a[k], b[k]);
  return ScalarField(a.grid(), std::move(v), a.time());
}
}  // namespace

ScalarField pointwise_max(const ScalarField& a, const ScalarField& b) {
  return combine(a, b, [](double x, double y) { return std::max(x, y); });
}

ScalarField pointwise_min(const ScalarField& a, const ScalarField& b) {
  return combine(a, b, [](double x, double y) { return std::min(x, y); });
}

}  // namespace conslaw
