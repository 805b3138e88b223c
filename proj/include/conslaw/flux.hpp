#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <vector>

namespace conslaw {

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
  double length() const { return hi - lo; }
  bool contains(double v, double slack = 0.0) const { return v >= lo - slack && v <= hi + slack; }
};

/// Flux A : I -> R^dim together with the velocity a = A' and its derivatives.
/// For a time-augmented flux component 0 is the time component (A_0(v) = v).
struct FluxSpec {
  std::string name;
  std::size_t dim = 0;
  bool time_augmented = false;
  Interval interval;
  int m_max = 0;

  /// A_comp(v).
  std::function<double(std::size_t comp, double v)> flux;
  /// a_comp^(order)(v); order 0 is the velocity a = A'.
  std::function<double(std::size_t comp, int order, double v)> deriv;
  /// Sign changes of a_comp inside (lo, hi), ascending. Optional; a sampled
  /// root search is used when empty.
  std::function<std::vector<double>(std::size_t comp, double lo, double hi)> turning_points;

  double A(std::size_t comp, double v) const { return flux(comp, v); }
  double a(std::size_t comp, double v, int order = 0) const { return deriv(comp, order, v); }
  std::vector<double> velocity(double v, int order = 0) const;

  std::size_t spatial_dim() const { return time_augmented ? dim - 1 : dim; }
  /// Component index of spatial axis `axis`.
  std::size_t spatial_component(std::size_t axis) const { return time_augmented ? axis + 1 : axis; }

  /// Zeros of a_comp in (lo, hi) where it changes sign.
  std::vector<double> sign_changes(std::size_t comp, double lo, double hi) const;
  /// max |a_comp| over [lo, hi] (sampled, plus endpoints).
  double max_speed(std::size_t comp, double lo, double hi) const;
  /// max over spatial components of max_speed.
  double max_spatial_speed(double lo, double hi) const;

  /// Throws InputError if the invariants (bounded interval, time component) fail on samples.
  void validate() const;
};

/// Parses `burgers`, `power:m`, `generalized_burgers:d`, `trig`.
FluxSpec make_flux(const std::string& key);
std::vector<std::string> flux_catalogue();

/// Flux with velocity components given by polynomials in v (coefficients in
/// ascending order), A_c(0) = 0.
FluxSpec polynomial_flux(std::string name, std::vector<std::vector<double>> velocity_coeffs, Interval interval,
                         bool time_augmented, int m_max = -1);

/// v -> A(v - c) on I + c.
FluxSpec shifted_flux(const FluxSpec& base, double c);

/// a~(v) = S^{-1} a(lambda v), A~(v) = lambda^{-1} S^{-1} A(lambda v) on I / lambda.
/// `s_matrix` is row-major dim x dim.
FluxSpec transformed_flux(const FluxSpec& base, const std::vector<double>& s_matrix, double lambda);

struct SampleGrid {
  std::size_t xi_samples = 0;
  std::size_t v_samples = 0;
  std::vector<double> deltas;
  std::vector<double> worst_xi;
  bool degenerate = false;
  std::vector<std::string> notes;
};

struct NonlinearityReport {
  double alpha_hat = 1.0;
  double C_hat = 0.0;
  int m_hat = 0;
  double c0_hat = 0.0;
  SampleGrid sample_grid;
};

/// Measure of {v in I : |a(v).xi| < delta} by uniform sampling with linear
/// interpolation of the crossings.
double nonlinearity_measure(const FluxSpec& flux, std::span<const double> xi, double delta,
                            std::size_t v_samples = 100000);

/// Deterministic direction sample on the unit half-sphere of R^dim (antipodes
/// collapsed), with the coordinate axes always included.
std::vector<std::vector<double>> sphere_directions(std::size_t dim, std::size_t n);

std::vector<double> default_delta_grid();

NonlinearityReport estimate_alpha(const FluxSpec& flux, std::size_t xi_samples,
                                  const std::vector<double>& delta_grid, std::size_t v_samples = 100000);

/// Smallest m <= m_max with {a, a', ..., a^(m)} spanning R^dim at every sampled v;
/// m_max + 1 when none does.
int hormander_order(const FluxSpec& flux, std::size_t v_samples = 1001);

/// min over sampled (v, xi) of max_{0<=j<=m} |xi . a^(j)(v)|. With m < 0 the
/// Hormander order is used.
double nondegeneracy_constant(const FluxSpec& flux, std::size_t v_samples = 401, std::size_t xi_samples = 2000,
                              int m = -1);

enum class SignTag { neg, small, pos };

struct TaggedInterval {
  Interval interval;
  SignTag tag;
};

/// f(v, j) returns f^(j)(v). Splits I by the sign of f^(k-1) at level delta,
/// given f^(k) >= 1 on I.
std::vector<TaggedInterval> sign_decomposition(const std::function<double(double, int)>& f, Interval I,
                                               double delta, int k, std::size_t samples = 2001);

const char* to_string(SignTag t);

}  // namespace conslaw
