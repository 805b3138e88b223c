#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "conslaw/flux.hpp"
#include "conslaw/grid.hpp"
#include "conslaw/solver.hpp"

namespace conslaw {

struct DecaySeries {
  std::vector<double> times;
  std::vector<double> sup_norms;
  double l1_norm = 0.0;
  double linf_norm = 0.0;
  std::string flux_name;
  std::size_t dim = 1;
  /// Times are measured from this origin when fitting power laws.
  double time_origin = 0.0;
};

/// Sample times: origin + (t_end - origin) * 16^(i/(n-1) - 1), i = 0..n-1,
/// keeping those at or after u0's time.
std::vector<double> decay_sample_times(double t0, double t_end, std::size_t n_samples, double time_origin);

/// Solves and records sup |u| at the sample times. Throws GeometryError if
/// the support touches the outermost cells at any sample (or initially).
DecaySeries decay_experiment(const FluxSpec& flux, const ScalarField& u0, double t_end, std::size_t n_samples,
                             double time_origin = 0.0, const SolverConfig& config = {});

struct DecayFit {
  double gamma_hat = 0.0;
  double C_hat = 0.0;
  double slope = 0.0;
  std::size_t samples = 0;
};

/// Least-squares slope of log sup vs log(t - origin) over t >= t_min (and
/// t <= t_max when given); gamma_hat = -slope / d. Needs 5 samples.
DecayFit fit_decay_exponent(const DecaySeries& series, double t_min, double t_max = -1.0);

/// gamma_{k+1} = 2 gamma_k - gamma_k^2 / gamma0, n times; returns n + 1 values.
std::vector<double> bootstrap_gamma(double gamma0, double gamma_init, int n);

/// Support radius plus max|a| * t_end * 1.1.
double decay_box_half_width(double support_radius, double max_speed, double t_end);

/// C1 ||u0||_inf^(1 - gamma (1 + d(d+1)/2)) ||u0||_1^gamma t^(-d gamma) for
/// `burgers` and `generalized_burgers:d` with d <= 2; C1 is calibrated once
/// per (d, gamma) from box-data runs and cached.
double decay_constant_prediction(const FluxSpec& flux, double l1, double linf, double gamma, double t);

/// The cached calibration constant itself.
double decay_calibration_constant(int d, double gamma);

}  // namespace conslaw
