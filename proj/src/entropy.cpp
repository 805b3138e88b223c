#include "conslaw/entropy.hpp"

#include <algorithm>
#include <cmath>

#include "conslaw/errors.hpp"
#include "conslaw/parallel.hpp"

namespace conslaw {

std::vector<double> uniform_levels(double lo, double hi, std::size_t n) {
  if (n == 0) throw InputError("need at least one level");
  if (!(hi > lo)) throw InputError("level range must have positive width");
  std::vector<double> out(n);
  const double w = (hi - lo) / static_cast<double>(n);
  for (std::size_t k = 0; k < n; ++k) out[k] = lo + (static_cast<double>(k) + 0.5) * w;
  return out;
}

std::vector<double> default_levels(double min, double max, std::size_t n) {
  double pad = 0.01 * (max - min);
  if (!(pad > 0.0)) pad = 0.01 * std::max(1.0, std::abs(max));
  return uniform_levels(min - pad, max + pad, n);
}

StepResidual::StepResidual(const ScalarField& un, const ScalarField& un1, const FluxSpec& flux,
                           const SolverConfig& config)
    : un_(&un), un1_(&un1), flux_(&flux), boundary_(config.boundary) {
  const Grid& g = un.grid();
  if (!g.same_geometry(un1.grid())) throw InputError("residual frames live on different grids");
  if (g.rank() != flux.spatial_dim()) throw InputError("field rank does not match the flux's spatial dimension");
  dt_ = un1.time() - un.time();
  if (!(dt_ > 0.0)) throw InputError("residual frames must be increasing in time");
  std::vector<double> u(un.values().begin(), un.values().end());
  for (std::size_t axis = 0; axis < g.rank(); ++axis) {
    kernels_.emplace_back(flux, flux.spatial_component(axis), un.min(), un.max(), config.numerical_flux);
    ratio_.push_back(dt_ / g.spacing[axis]);
    stages_.push_back(u);
    if (axis + 1 < g.rank()) u = sweep(g, u, kernels_.back(), axis, dt_, boundary_);
  }
}

std::size_t StepResidual::neighbor(std::size_t cell, std::size_t axis, int dir) const {
  const Grid& g = un_->grid();
  const std::size_t n = g.shape[axis];
  const std::size_t s = g.stride(axis);
  const std::size_t i = (cell / s) % n;
  if (dir > 0) {
    if (i + 1 < n) return cell + s;
    return boundary_ == Boundary::periodic ? cell - (n - 1) * s : cell;
  }
  if (i > 0) return cell - s;
  return boundary_ == Boundary::periodic ? cell + (n - 1) * s : cell;
}

void StepResidual::stencil_range(std::size_t cell, double& lo, double& hi) const {
  lo = hi = (*un1_)[cell];
  for (std::size_t a = 0; a < stages_.size(); ++a) {
    const auto& s = stages_[a];
    for (std::size_t c : {cell, neighbor(cell, a, -1), neighbor(cell, a, +1)}) {
      lo = std::min(lo, s[c]);
      hi = std::max(hi, s[c]);
    }
  }
}

double StepResidual::conservation(std::size_t cell) const {
  double r = (*un1_)[cell] - (*un_)[cell];
  for (std::size_t a = 0; a < stages_.size(); ++a) {
    const auto& s = stages_[a];
    const std::size_t l = neighbor(cell, a, -1);
    const std::size_t h = neighbor(cell, a, +1);
    r += ratio_[a] * (kernels_[a](s[cell], s[h]) - kernels_[a](s[l], s[cell]));
  }
  return r;
}

double StepResidual::residual(std::size_t cell, double level, EntropyKind kind) const {
  double lo, hi;
  stencil_range(cell, lo, hi);
  if (level <= lo) return conservation(cell);
  if (level >= hi) return kind == EntropyKind::kruzhkov ? -conservation(cell) : 0.0;
  auto eta = [&](double u) { return kind == EntropyKind::kruzhkov ? std::abs(u - level) : std::max(u - level, 0.0); };
  double r = eta((*un1_)[cell]) - eta((*un_)[cell]);
  for (std::size_t a = 0; a < stages_.size(); ++a) {
    const auto& s = stages_[a];
    const FluxKernel& F = kernels_[a];
    const double Al = F.physical(level);
    auto Q = [&](double x, double y) {
      const double up = F(std::max(x, level), std::max(y, level));
      if (kind == EntropyKind::kruzhkov) return up - F(std::min(x, level), std::min(y, level));
      return up - Al;
    };
    const double uc = s[cell];
    const double ul = s[neighbor(cell, a, -1)];
    const double uh = s[neighbor(cell, a, +1)];
    r += ratio_[a] * (Q(uc, uh) - Q(ul, uc));
  }
  return r;
}

std::vector<double> entropy_residual(const ScalarField& un, const ScalarField& un1, const FluxSpec& flux,
                                     double level, EntropyKind kind, const SolverConfig& config) {
  StepResidual sr(un, un1, flux, config);
  std::vector<double> out(sr.size());
  for (std::size_t k = 0; k < out.size(); ++k) out[k] = sr.residual(k, level, kind);
  return out;
}

std::vector<double> conservation_residual(const ScalarField& un, const ScalarField& un1, const FluxSpec& flux,
                                          const SolverConfig& config) {
  StepResidual sr(un, un1, flux, config);
  std::vector<double> out(sr.size());
  for (std::size_t k = 0; k < out.size(); ++k) out[k] = sr.conservation(k);
  return out;
}

namespace {

double tolerance_for(const Grid& g, double lo, double hi, const FluxSpec& flux) {
  const double dx = g.max_spacing();
  const double lip = flux.max_spatial_speed(lo, hi);
  const double roundoff = 1e-12 * std::max({1.0, std::abs(lo), std::abs(hi)});
  return 5.0 * dx * lip * (hi - lo) + roundoff;
}

ResidualReport check_frames(const std::vector<ScalarField>& frames, const FluxSpec& flux,
                            const std::vector<double>& levels, EntropyKind kind, const SolverConfig& config,
                            double tol) {
  if (frames.size() < 2) throw InputError("residual check needs at least two frames");
  if (levels.empty()) throw InputError("residual check needs at least one level");
  ResidualReport rep;
  rep.levels = levels.size();
  rep.steps = frames.size() - 1;
  if (tol < 0.0) {
    double lo = frames.front().min(), hi = frames.front().max();
    for (const auto& f : frames) {
      lo = std::min(lo, f.min());
      hi = std::max(hi, f.max());
    }
    tol = tolerance_for(frames.front().grid(), lo, hi, flux);
  }
  rep.tol = tol;
  rep.max_residual = -INFINITY;
  std::vector<double> worst(rep.steps, -INFINITY), worst_level(rep.steps, 0.0);
  parallel_for(rep.steps, [&](std::size_t n) {
    StepResidual sr(frames[n], frames[n + 1], flux, config);
    for (std::size_t k = 0; k < sr.size(); ++k) {
      for (double l : levels) {
        const double r = sr.residual(k, l, kind);
        if (r > worst[n]) {
          worst[n] = r;
          worst_level[n] = l;
        }
      }
    }
  });
  for (std::size_t n = 0; n < rep.steps; ++n) {
    if (worst[n] > rep.max_residual) {
      rep.max_residual = worst[n];
      rep.worst_level = worst_level[n];
      rep.worst_step = n;
    }
  }
  rep.passed = rep.max_residual <= rep.tol;
  return rep;
}

}  // namespace

double residual_tolerance(const Trajectory& traj, const FluxSpec& flux) {
  if (traj.frames.empty()) throw InputError("empty trajectory");
  double lo = traj.frames.front().min(), hi = traj.frames.front().max();
  for (const auto& f : traj.frames) {
    lo = std::min(lo, f.min());
    hi = std::max(hi, f.max());
  }
  return tolerance_for(traj.frames.front().grid(), lo, hi, flux);
}

ResidualReport entropy_residual_check(const Trajectory& traj, const FluxSpec& flux, const std::vector<double>& levels,
                                      EntropyKind kind, double tol) {
  return check_frames(traj.frames, flux, levels, kind, traj.config, tol);
}

ResidualReport entropy_residual_check(const ScalarField& spacetime, const FluxSpec& flux,
                                      const std::vector<double>& levels, EntropyKind kind,
                                      const SolverConfig& config, double tol) {
  auto traj = from_spacetime(spacetime, flux.name, config);
  return check_frames(traj.frames, flux, levels, kind, config, tol);
}

}  // namespace conslaw
