#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "conslaw/flux.hpp"
#include "conslaw/grid.hpp"

namespace conslaw {

enum class Boundary { outflow, periodic };
enum class NumericalFluxKind { engquist_osher, godunov };

Boundary parse_boundary(const std::string& s);
NumericalFluxKind parse_numerical_flux(const std::string& s);
const char* to_string(Boundary b);
const char* to_string(NumericalFluxKind k);

struct SolverConfig {
  double cfl = 0.45;
  Boundary boundary = Boundary::outflow;
  NumericalFluxKind numerical_flux = NumericalFluxKind::engquist_osher;
  /// Record a frame after every step.
  bool record_every_step = false;
  /// Constant step (t_end - t0) / ceil((t_end - t0) / cfl_dt(u0)); snapshot
  /// times are then rounded to the step lattice.
  bool uniform_dt = false;
  /// Constant step, clipped only to hit snapshot times.
  std::optional<double> fixed_dt;
};

/// Time-ordered frames on one spatial grid.
struct Trajectory {
  std::vector<ScalarField> frames;
  std::string flux_name;
  SolverConfig config;

  std::vector<double> times() const;
  /// Index of the frame at time t (within tol); throws InputError if absent.
  std::size_t frame_index(double t, double tol = 1e-9) const;
  const ScalarField& at(double t, double tol = 1e-9) const { return frames[frame_index(t, tol)]; }
  /// True when consecutive frame times are equally spaced.
  bool uniform(double rel_tol = 1e-9) const;
};

/// Two-point monotone flux for one component of A, with turning points of
/// a_comp precomputed over a value range.
class FluxKernel {
 public:
  FluxKernel(const FluxSpec& flux, std::size_t comp, double lo, double hi, NumericalFluxKind kind);
  double operator()(double a, double b) const;
  double physical(double v) const { return flux_->A(comp_, v); }

 private:
  const FluxSpec* flux_;
  std::size_t comp_;
  NumericalFluxKind kind_;
  std::vector<double> turns_;
};

double cfl_dt(const ScalarField& field, const FluxSpec& flux, double cfl);

/// One forward-Euler update of u_t + div A_x(u) = 0 (Lie splitting over axes).
ScalarField step(const ScalarField& field, const FluxSpec& flux, double dt, const SolverConfig& config = {});

/// One sweep along a single axis; exposed for split-aware residuals.
std::vector<double> sweep(const Grid& grid, std::span<const double> u, const FluxKernel& kernel, std::size_t axis,
                          double dt, Boundary boundary);

/// Times are absolute; the run starts at u0.time(). Frames at u0.time(),
/// every snapshot time and t_end are always recorded.
Trajectory solve(const ScalarField& u0, const FluxSpec& flux, double t_end, std::vector<double> snapshot_times,
                 const SolverConfig& config = {});

/// Self-similar entropy solution of a convex 1D Riemann problem at x/t = xi.
double riemann_exact(const FluxSpec& flux, double uL, double uR, double xi);

/// Exact solution of u_t + (u^{m+1}/(m+1))_x = 0 from u0 = x^{1/m} on [0,1].
double exact_decay_solution(int m, double t, double x);

/// Stacks uniformly spaced frames into a field with time as axis 0; cell
/// centers along axis 0 sit at the frame times.
ScalarField to_spacetime(const Trajectory& traj);
Trajectory from_spacetime(const ScalarField& st, const std::string& flux_name, const SolverConfig& config = {});

}  // namespace conslaw
