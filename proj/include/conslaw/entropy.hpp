#pragma once

#include <cstddef>
#include <vector>

#include "conslaw/flux.hpp"
#include "conslaw/solver.hpp"

namespace conslaw {

/// |u - l| (Kruzhkov) or (u - l)_+ (nondecreasing, for subsolutions).
enum class EntropyKind { kruzhkov, positive_part };

/// Midpoints of n uniform bins over [lo, hi].
std::vector<double> uniform_levels(double lo, double hi, std::size_t n);

/// Default level grid: midpoints of n bins over [min - 1%, max + 1%] of the range.
std::vector<double> default_levels(double min, double max, std::size_t n = 64);

/// Residual evaluator for one step un -> un1; precomputes the split stages.
class StepResidual {
 public:
  StepResidual(const ScalarField& un, const ScalarField& un1, const FluxSpec& flux, const SolverConfig& config);

  std::size_t size() const { return un_->size(); }
  double dt() const { return dt_; }
  /// Range of every value the residual of `cell` depends on.
  void stencil_range(std::size_t cell, double& lo, double& hi) const;
  /// Conservation residual of `cell`.
  double conservation(std::size_t cell) const;
  double residual(std::size_t cell, double level, EntropyKind kind) const;

 private:
  std::size_t neighbor(std::size_t cell, std::size_t axis, int dir) const;

  const ScalarField* un_;
  const ScalarField* un1_;
  const FluxSpec* flux_;
  Boundary boundary_;
  double dt_ = 0.0;
  std::vector<std::vector<double>> stages_;
  std::vector<FluxKernel> kernels_;
  std::vector<double> ratio_;
};

/// Per-cell discrete entropy residual of the step un -> un1 (time-integrated,
/// in units of u): eta(un1) - eta(un) + sum_axes (dt/h) (Q_{i+1/2} - Q_{i-1/2}),
/// with the numerical entropy flux of the scheme. Multi-axis data use the
/// split form, recomputing the intermediate sweeps from un. Levels outside
/// the local stencil range give exactly zero.
std::vector<double> entropy_residual(const ScalarField& un, const ScalarField& un1, const FluxSpec& flux,
                                     double level, EntropyKind kind, const SolverConfig& config = {});

/// Per-cell conservation residual un1 - un + sum_axes (dt/h) dF of the split scheme.
std::vector<double> conservation_residual(const ScalarField& un, const ScalarField& un1, const FluxSpec& flux,
                                          const SolverConfig& config = {});

/// 5 * dx * Lip(A) * (value range) over the trajectory.
double residual_tolerance(const Trajectory& traj, const FluxSpec& flux);

struct ResidualReport {
  double max_residual = 0.0;
  double tol = 0.0;
  bool passed = true;
  std::size_t levels = 0;
  std::size_t steps = 0;
  double worst_level = 0.0;
  std::size_t worst_step = 0;
};

/// Checks residual <= tol for every consecutive frame pair and every level.
/// With tol < 0 the default tolerance is used.
ResidualReport entropy_residual_check(const Trajectory& traj, const FluxSpec& flux, const std::vector<double>& levels,
                                      EntropyKind kind, double tol = -1.0);

/// Same for a space-time field (axis 0 is time).
ResidualReport entropy_residual_check(const ScalarField& spacetime, const FluxSpec& flux,
                                      const std::vector<double>& levels, EntropyKind kind,
                                      const SolverConfig& config = {}, double tol = -1.0);

}  // namespace conslaw
