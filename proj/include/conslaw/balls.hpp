#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "conslaw/grid.hpp"

namespace conslaw {

/// Discrete balls are cell-center inclusion sets: a cell belongs to B_r(x)
/// when |center - x| <= r (physical units, tiny relative slack).

/// Flat indices of the cells of `grid` whose centers lie in B_r(center).
std::vector<std::size_t> ball_cells(const Grid& grid, std::span<const double> center, double radius);

/// True when the closed ball lies inside the grid's domain.
bool ball_fits(const Grid& grid, std::span<const double> center, double radius);

/// Cellwise max / min of the field over B_r(cell center), clipped to the domain.
ScalarField ball_max(const ScalarField& field, double radius);
ScalarField ball_min(const ScalarField& field, double radius);

/// Cellwise sum of `values` over B_r(cell center), clipped to the domain.
std::vector<double> ball_sum(const Grid& grid, std::span<const double> values, double radius);

struct BallStats {
  double min = 0.0;
  double max = 0.0;
  double mean = 0.0;
  double integral = 0.0;
  double mean_deviation = 0.0;
  std::size_t cells = 0;
};

/// Statistics of the field over one ball. Throws GeometryError if the ball is empty.
BallStats ball_stats(const ScalarField& field, std::span<const double> center, double radius);

}  // namespace conslaw
