#include "conslaw/kinetic.hpp"

#include <algorithm>
#include <cmath>

#include "conslaw/balls.hpp"
#include "conslaw/entropy.hpp"
#include "conslaw/errors.hpp"
#include "conslaw/parallel.hpp"

namespace conslaw {

namespace {

void check_sorted(const std::vector<double>& levels) {
  if (levels.empty()) throw InputError("need at least one level");
  for (std::size_t k = 1; k < levels.size(); ++k)
    if (!(levels[k] > levels[k - 1])) throw InputError("levels must be strictly increasing");
}

std::vector<double> bin_widths(const std::vector<double>& levels) {
  const std::size_t n = levels.size();
  std::vector<double> w(n, 1.0);
  if (n == 1) return w;
  for (std::size_t k = 0; k < n; ++k) {
    if (k == 0)
      w[k] = levels[1] - levels[0];
    else if (k + 1 == n)
      w[k] = levels[n - 1] - levels[n - 2];
    else
      w[k] = 0.5 * (levels[k + 1] - levels[k - 1]);
  }
  return w;
}

std::uint64_t flat_key(std::uint32_t t, std::uint32_t cell, std::size_t spatial) {
  return static_cast<std::uint64_t>(t) * spatial + cell;
}

}  // namespace

KineticField kinetic_function(const ScalarField& field, const std::vector<double>& levels) {
  check_sorted(levels);
  KineticField k;
  k.grid = field.grid();
  k.v_levels = levels;
  k.values.resize(field.size() * levels.size());
  for (std::size_t c = 0; c < field.size(); ++c) {
    const double u = field[c];
    for (std::size_t l = 0; l < levels.size(); ++l) {
      const double v = levels[l];
      std::int8_t x = 0;
      if (0.0 < v && v < u) x = 1;
      if (u < v && v < 0.0) x = -1;
      k.values[c * levels.size() + l] = x;
    }
  }
  return k;
}

std::size_t DissipationMeasure::spatial_cells() const {
  return geometry.size() / geometry.shape[0];
}

std::vector<double> DissipationMeasure::cell_mass() const {
  std::vector<double> out(geometry.size(), 0.0);
  const std::size_t s = spatial_cells();
  for (const auto& e : entries) out[flat_key(e.t_index, e.cell, s)] += e.mass;
  return out;
}

std::vector<double> DissipationMeasure::level_marginal() const {
  std::vector<double> out(v_levels.size(), 0.0);
  for (const auto& e : entries) out[e.level] += e.mass;
  return out;
}

double DissipationMeasure::mass_in(const std::vector<std::size_t>& cells, double vlo, double vhi) const {
  const std::size_t s = spatial_cells();
  double total_mass = 0.0;
  for (std::size_t c : cells) {
    auto lo = std::lower_bound(entries.begin(), entries.end(), static_cast<std::uint64_t>(c),
                               [s](const MassEntry& e, std::uint64_t key) { return flat_key(e.t_index, e.cell, s) < key; });
    for (auto it = lo; it != entries.end() && flat_key(it->t_index, it->cell, s) == c; ++it) {
      const double v = v_levels[it->level];
      if (v >= vlo && v <= vhi) total_mass += it->mass;
    }
  }
  return total_mass;
}

double DissipationMeasure::sink_in(const std::vector<std::size_t>& cells) const {
  const std::size_t s = spatial_cells();
  double total_mass = 0.0;
  for (std::size_t c : cells) {
    auto lo = std::lower_bound(sink.begin(), sink.end(), static_cast<std::uint64_t>(c),
                               [s](const SinkEntry& e, std::uint64_t key) { return flat_key(e.t_index, e.cell, s) < key; });
    for (auto it = lo; it != sink.end() && flat_key(it->t_index, it->cell, s) == c; ++it) total_mass += it->mass;
  }
  return total_mass;
}

DissipationMeasure entropy_dissipation(const Trajectory& traj, const FluxSpec& flux, const std::vector<double>& levels) {
  check_sorted(levels);
  if (traj.frames.size() < 2) throw InputError("dissipation needs at least two frames");
  if (!traj.uniform(1e-6)) throw InputError("dissipation needs uniformly spaced frames");
  const Grid& g = traj.frames.front().grid();
  for (const auto& f : traj.frames)
    if (!f.grid().same_geometry(g)) throw InputError("trajectory frames have different grids");
  if (g.rank() != flux.spatial_dim()) throw InputError("trajectory does not match the flux dimension");

  DissipationMeasure mu;
  const std::size_t steps = traj.frames.size() - 1;
  const double t0 = traj.frames.front().time();
  const double dt = (traj.frames.back().time() - t0) / static_cast<double>(steps);
  mu.geometry.shape.push_back(steps);
  mu.geometry.origin.push_back(t0);
  mu.geometry.spacing.push_back(dt);
  for (std::size_t a = 0; a < g.rank(); ++a) {
    mu.geometry.shape.push_back(g.shape[a]);
    mu.geometry.origin.push_back(g.origin[a]);
    mu.geometry.spacing.push_back(g.spacing[a]);
  }
  mu.v_levels = levels;
  mu.level_widths = bin_widths(levels);
  const double volume = g.cell_volume();
  double scale = 1.0;
  for (const auto& f : traj.frames) scale = std::max({scale, std::abs(f.min()), std::abs(f.max())});
  const double sink_floor = 1e-13 * scale;

  std::vector<std::vector<MassEntry>> per_step(steps);
  std::vector<std::vector<SinkEntry>> sink_step(steps);
  std::vector<double> clipped(steps, 0.0);
  parallel_for(steps, [&](std::size_t n) {
    StepResidual sr(traj.frames[n], traj.frames[n + 1], flux, traj.config);
    auto& out = per_step[n];
    for (std::size_t c = 0; c < sr.size(); ++c) {
      double lo, hi;
      sr.stencil_range(c, lo, hi);
      const double cons = sr.conservation(c);
      if (-cons > sink_floor)
        sink_step[n].push_back({static_cast<std::uint32_t>(n), static_cast<std::uint32_t>(c), -cons * volume});
      if (!(hi > lo)) continue;
      auto first = std::upper_bound(levels.begin(), levels.end(), lo);
      for (auto it = first; it != levels.end() && *it < hi; ++it) {
        const std::size_t l = static_cast<std::size_t>(it - levels.begin());
        const double r = sr.residual(c, *it, EntropyKind::kruzhkov);
        const double m = 0.5 * std::abs(r) * volume * mu.level_widths[l];
        if (r < 0.0) {
          out.push_back({static_cast<std::uint32_t>(n), static_cast<std::uint32_t>(c), static_cast<std::uint32_t>(l), m});
        } else if (r > 0.0) {
          clipped[n] += m;
        }
      }
    }
  });
  std::size_t count = 0;
  for (const auto& v : per_step) count += v.size();
  mu.entries.reserve(count);
  for (std::size_t n = 0; n < steps; ++n) {
    for (const auto& e : per_step[n]) {
      mu.entries.push_back(e);
      mu.total += e.mass;
    }
    for (const auto& e : sink_step[n]) {
      mu.sink.push_back(e);
      mu.sink_total += e.mass;
    }
    mu.clipped_total += clipped[n];
  }
  return mu;
}

MeasureBoundsReport measure_bounds_check(const DissipationMeasure& measure, const ScalarField& spacetime,
                                         const FluxSpec& flux, double delta, const Point& center, double radius,
                                         double slab_lo, double slab_width) {
  if (!(delta > 0.0)) throw InputError("delta must be positive");
  if (!(radius > 0.0)) throw InputError("radius must be positive");
  if (!(slab_width >= 0.0)) throw InputError("slab width must be nonnegative");
  const Grid& g = spacetime.grid();
  if (g.rank() != measure.geometry.rank()) throw InputError("field and measure have different ranks");
  if (center.size() != g.rank()) throw InputError("center rank mismatch");
  const double outer = radius * (1.0 + delta);
  if (!ball_fits(g, center, outer) || !ball_fits(measure.geometry, center, radius))
    throw InputError("B_{1+delta} does not fit in the data's domain");

  MeasureBoundsReport rep;
  rep.delta = delta;
  rep.radius = radius;
  rep.slab_lo = slab_lo;
  rep.slab_width = slab_width;

  double lo = std::min(0.0, spacetime.min());
  double hi = std::max(0.0, spacetime.max());
  const double tol_neg = 1e-9 * std::max(1.0, hi);
  if (spacetime.min() < -tol_neg) throw InputError("measure bounds need a nonnegative field");
  for (int i = 0; i <= 1024; ++i) {
    const double v = lo + (hi - lo) * i / 1024.0;
    double n2 = 0.0;
    for (std::size_t c = 0; c < flux.dim; ++c) n2 += flux.a(c, v) * flux.a(c, v);
    rep.max_speed = std::max(rep.max_speed, std::sqrt(n2));
  }
  const auto outer_cells = ball_cells(g, center, outer);
  double l1 = 0.0;
  for (auto c : outer_cells) l1 += std::abs(spacetime[c]);
  rep.l1_norm = l1 * g.cell_volume();

  const auto inner = ball_cells(measure.geometry, center, radius);
  rep.mu1_lhs = measure.sink_in(inner);
  rep.mu1_rhs = rep.max_speed / (delta * radius) * rep.l1_norm;
  rep.mu0_lhs = measure.mass_in(inner, slab_lo, slab_lo + slab_width);
  rep.mu0_rhs = rep.mu1_rhs * slab_width;
  const double ball_volume = static_cast<double>(inner.size()) * measure.geometry.cell_volume();
  rep.tol = 5.0 * g.max_spacing() * rep.max_speed * (hi - lo) * ball_volume / radius + 1e-14;
  rep.mu1_ok = rep.mu1_lhs <= rep.mu1_rhs + rep.tol;
  rep.mu0_ok = rep.mu0_lhs <= rep.mu0_rhs + rep.tol;
  return rep;
}

}  // namespace conslaw
