#pragma once

#include <cstddef>
#include <vector>

#include "conslaw/flux.hpp"
#include "conslaw/grid.hpp"
#include "conslaw/solver.hpp"

namespace conslaw {

/// Convex hull K of {a(v) : v in I}. For time-augmented fluxes the constant
/// time component is dropped and K lives in the spatial speed space.
struct VelocityHull {
  bool time_augmented = false;
  /// Dimension of the hull's ambient space (1 or 2).
  std::size_t dim = 0;
  /// Interval endpoints (dim 1) or counter-clockwise polygon (dim 2).
  std::vector<Point> vertices;

  /// Euclidean distance from p to K (0 inside).
  double distance(const Point& p) const;
  bool contains(const Point& p, double slack = 0.0) const { return distance(p) <= slack; }
  /// Largest |k| over K.
  double max_norm() const;
};

inline constexpr std::size_t kHullSamples = 1000;

/// Throws InputError if I leaves the flux interval, UnsupportedError if the
/// hull space has more than two dimensions.
VelocityHull velocity_hull(const FluxSpec& flux, Interval I, std::size_t samples = kHullSamples);

/// Cone maximum principle at (t, x): upper envelope vs its max over the foot
/// x - tau K at t - tau (and the lower/min analogue). Envelopes use one-cell
/// balls; the foot is widened by one cell.
struct ConeReport {
  double upper_at = 0.0;
  double upper_foot = 0.0;
  double lower_at = 0.0;
  double lower_foot = 0.0;
  /// upper_at - upper_foot and lower_foot - lower_at; both should be <= tol.
  double upper_diff = 0.0;
  double lower_diff = 0.0;
  double tol = 0.0;
  std::size_t foot_cells = 0;
  bool passed = true;
};

ConeReport cone_max_principle_check(const Trajectory& traj, const FluxSpec& flux, const Point& x, double t,
                                    double tau, double tol = -1.0);

struct CharPolygon {
  /// t_j = t_start + j (T - t_start) / k, j = 0..k.
  std::vector<double> times;
  std::vector<Point> points;
  double level = 0.0;
  /// Envelope value range over the two endpoints of segment j (j = 1..k, stored at j-1).
  std::vector<double> segment_lo;
  std::vector<double> segment_hi;
  double tol = 0.0;

  /// Largest distance from a vertex to the chord between the end vertices.
  double chord_deviation() const;
  /// Largest |x_j - x_{j-1}| / (t_j - t_{j-1}).
  double max_speed() const;
};

/// Traces the level v0 from (T, x0), T the last frame, back to the first
/// frame in k steps. Every t_j must be a frame time. tol < 0 uses
/// 2 * grid_floor of the first frame.
CharPolygon backward_characteristic(const Trajectory& traj, const FluxSpec& flux, const Point& x0, double v0, int k,
                                    double tol = -1.0);

struct LineConstancy {
  Point x0;
  double value = 0.0;
  /// a(u(x0)); the sampled segment is x0 + s * direction, s in [s_min, s_max].
  Point direction;
  double s_min = 0.0;
  double s_max = 0.0;
  std::size_t samples = 0;
  double deviation = 0.0;
};

/// Max |u(x0 + s a(u(x0))) - u(x0)| along the in-domain segment, for a
/// stationary solution of div A(u) = 0 on a grid of the flux's full dimension.
/// Throws PreconditionError when the two-cell oscillation at x0 exceeds
/// continuity_tol (default: a quarter of the value range).
LineConstancy line_constancy_check(const ScalarField& field, const Point& x0, const FluxSpec& flux,
                                   double continuity_tol = -1.0);

/// Forward point y at time t0 + s with y - s a(u(t0 + s, y)) = x0, by
/// fixed-point iteration seeded at x0 + s a(u(t0, x0)).
Point forward_characteristic_point(const Trajectory& traj, const FluxSpec& flux, const Point& x0, double t0, double s,
                                   int max_iter = 200);

}  // namespace conslaw
