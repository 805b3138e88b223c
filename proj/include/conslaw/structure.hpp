#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "conslaw/grid.hpp"
#include "conslaw/kinetic.hpp"

namespace conslaw {

/// Lower/upper envelopes at the smallest radius, plus the whole per-radius
/// sequence (index i belongs to radii_used[i]).
struct EnvelopePair {
  ScalarField lower;
  ScalarField upper;
  std::vector<double> radii_used;
  std::vector<ScalarField> lower_by_radius;
  std::vector<ScalarField> upper_by_radius;
};

/// Radii strictly decreasing, the smallest at least one cell (min spacing).
EnvelopePair semicontinuous_envelopes(const ScalarField& field, const std::vector<double>& radii);

/// Cells of the measure's space-time geometry with
///   max_r mu(B_r(x) x R) / r^(D-1) >= threshold.
struct JumpMask {
  Grid geometry;
  std::vector<std::uint8_t> flagged;
  /// max_r mu(B_r) / r^(D-1) per cell.
  std::vector<double> score;
  double threshold = 0.0;
  std::vector<double> radii;

  std::size_t count() const;
  std::vector<std::size_t> flagged_cells() const;
};

JumpMask jump_set(const DissipationMeasure& measure, const std::vector<double>& radii, double threshold);

/// 0.01 * (value range)^3.
double default_jump_threshold(double min, double max);

struct OscillationModulus {
  std::vector<double> radii;
  /// max - min over B_r(x).
  std::vector<double> osc;
  /// Mean absolute deviation from the ball average.
  std::vector<double> vmo;

  /// osc nonincreasing as the radius decreases (up to `slack`).
  bool decreasing(double slack = 0.0) const;
};

OscillationModulus oscillation_modulus(const ScalarField& field, const Point& x, const std::vector<double>& radii);

/// Single-shock fit of the blowups of `frame` at x0.
struct ShockFit {
  Point center;
  /// Unit normal pointing to the u_plus side, at the smallest radius.
  Point normal;
  double u_plus = 0.0;
  double u_minus = 0.0;
  std::vector<double> radii;
  /// Mean |u - profile| over the ball, per radius.
  std::vector<double> residual;
  std::vector<double> u_plus_by_radius;
  std::vector<double> u_minus_by_radius;
  std::vector<Point> normal_by_radius;
  /// max |u - u_plus| over {(y - x0).n > collar |y - x0|}, per radius; and the minus side.
  std::vector<double> cone_plus_deviation;
  std::vector<double> cone_minus_deviation;
  /// False when the residual exceeds half the jump at every radius.
  bool single_shock = true;
};

inline constexpr double kShockCollar = 0.1;
inline constexpr std::size_t kShockDirections = 180;

ShockFit blowup_trace(const ScalarField& frame, const Point& x0, const std::vector<double>& radii);

/// Numerical blur of a run: max spacing times the largest upward one-cell
/// slope of the initial data (at least the value range over the domain's
/// largest extent).
double grid_floor(const ScalarField& u0);

}  // namespace conslaw
