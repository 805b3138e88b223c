#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "conslaw/flux.hpp"
#include "conslaw/grid.hpp"
#include "conslaw/solver.hpp"

namespace conslaw {

/// chi(x, v): +1 if 0 < v < u(x), -1 if u(x) < v < 0, else 0, at each level.
struct KineticField {
  Grid grid;
  std::vector<double> v_levels;
  /// values[cell * levels + level]
  std::vector<std::int8_t> values;

  int at(std::size_t cell, std::size_t level) const { return values[cell * v_levels.size() + level]; }
};

KineticField kinetic_function(const ScalarField& field, const std::vector<double>& v_levels);

struct MassEntry {
  std::uint32_t t_index = 0;
  std::uint32_t cell = 0;
  std::uint32_t level = 0;
  double mass = 0.0;
};

struct SinkEntry {
  std::uint32_t t_index = 0;
  std::uint32_t cell = 0;
  double mass = 0.0;
};

/// Discrete kinetic dissipation measure. Cell (n, x) of `geometry` is the
/// slab [t_n, t_{n+1}] x (spatial cell x). For level l with bin width w,
///   mass = 1/2 (-R_l)_+ * |cell| * w,
/// with R_l the Kruzhkov residual of the step; positive residual parts are
/// dropped from `entries` and summed in `clipped_total`. Levels outside the
/// local stencil range carry no mass.
struct DissipationMeasure {
  Grid geometry;
  std::vector<double> v_levels;
  std::vector<double> level_widths;
  /// Sorted by (t_index, cell, level); all masses > 0.
  std::vector<MassEntry> entries;
  /// Negative part of the conservation residual (subsolution sink), |cell|-weighted.
  std::vector<SinkEntry> sink;
  double total = 0.0;
  double clipped_total = 0.0;
  double sink_total = 0.0;

  std::size_t spatial_cells() const;
  /// Mass per geometry cell, summed over levels.
  std::vector<double> cell_mass() const;
  /// Mass per level, summed over cells.
  std::vector<double> level_marginal() const;
  /// Mass over the given geometry cells and levels in [vlo, vhi].
  double mass_in(const std::vector<std::size_t>& cells, double vlo, double vhi) const;
  double sink_in(const std::vector<std::size_t>& cells) const;
};

/// Needs at least two uniformly spaced frames (a solver run with
/// record_every_step and uniform_dt).
DissipationMeasure entropy_dissipation(const Trajectory& traj, const FluxSpec& flux,
                                       const std::vector<double>& v_levels);

struct MeasureBoundsReport {
  double delta = 0.0;
  double radius = 1.0;
  double slab_lo = 0.0;
  double slab_width = 0.0;
  double max_speed = 0.0;
  double l1_norm = 0.0;
  double mu1_lhs = 0.0;
  double mu1_rhs = 0.0;
  double mu0_lhs = 0.0;
  double mu0_rhs = 0.0;
  double tol = 0.0;
  bool mu1_ok = true;
  bool mu0_ok = true;
};

/// Mass bounds on B_R(center) in space-time, R = radius:
///   mu1(B_R x R)        <= max|a| (delta R)^-1 ||u||_{L1(B_{R(1+delta)})}
///   mu0(B_R x [v, v+r]) <= max|a| (delta R)^-1 r ||u||_{L1(B_{R(1+delta)})}
/// `spacetime` is the solution with time as axis 0. mu0 is the measure's
/// level mass and mu1 its sink.
MeasureBoundsReport measure_bounds_check(const DissipationMeasure& measure, const ScalarField& spacetime,
                                         const FluxSpec& flux, double delta, const Point& center, double radius,
                                         double slab_lo, double slab_width);

}  // namespace conslaw
