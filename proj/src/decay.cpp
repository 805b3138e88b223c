#include "conslaw/decay.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <string>
#include <utility>

#include "conslaw/errors.hpp"
#include "conslaw/scaling.hpp"

namespace conslaw {

namespace {

double sup_abs(const ScalarField& f) { return std::max(std::abs(f.min()), std::abs(f.max())); }

/// Largest |u| over the outermost layer of cells.
double boundary_sup(const ScalarField& f) {
  const Grid& g = f.grid();
  double m = 0.0;
  for (std::size_t k = 0; k < f.size(); ++k) {
    const auto idx = g.unravel(k);
    bool edge = false;
    for (std::size_t a = 0; a < g.rank(); ++a) edge = edge || idx[a] == 0 || idx[a] + 1 == g.shape[a];
    if (edge) m = std::max(m, std::abs(f[k]));
  }
  return m;
}

int burgers_dimension(const FluxSpec& flux) {
  if (flux.name == "burgers") return 1;
  const std::string prefix = "generalized_burgers:";
  if (flux.name.rfind(prefix, 0) == 0) return std::stoi(flux.name.substr(prefix.size()));
  return 0;
}

}  // namespace

std::vector<double> decay_sample_times(double t0, double t_end, std::size_t n_samples, double time_origin) {
  if (n_samples < 2) throw InputError("need at least two samples");
  if (!(t_end > time_origin)) throw InputError("t_end must lie after the time origin");
  std::vector<double> out;
  const double span = t_end - time_origin;
  for (std::size_t i = 0; i < n_samples; ++i) {
    const double e = static_cast<double>(i) / static_cast<double>(n_samples - 1) - 1.0;
    const double t = i + 1 == n_samples ? t_end : time_origin + span * std::pow(16.0, e);
    if (t >= t0 - 1e-12 * std::max(1.0, std::abs(t0))) out.push_back(std::max(t, t0));
  }
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

DecaySeries decay_experiment(const FluxSpec& flux, const ScalarField& u0, double t_end, std::size_t n_samples,
                             double time_origin, const SolverConfig& config) {
  if (!(t_end > u0.time())) throw InputError("t_end must lie after the initial time");
  const double scale = std::max(1.0, sup_abs(u0));
  const double zero = 1e-12 * scale;
  if (boundary_sup(u0) > zero) throw GeometryError("initial support touches the boundary at t = " +
                                                   std::to_string(u0.time()));
  DecaySeries s;
  s.flux_name = flux.name;
  s.dim = u0.grid().rank();
  s.time_origin = time_origin;
  s.linf_norm = sup_abs(u0);
  double l1 = 0.0;
  for (double v : u0.values()) l1 += std::abs(v);
  s.l1_norm = l1 * u0.grid().cell_volume();

  const auto times = decay_sample_times(u0.time(), t_end, n_samples, time_origin);
  const auto traj = solve(u0, flux, t_end, times, config);
  for (double t : times) {
    const ScalarField& f = traj.at(t, 1e-9 * std::max(1.0, std::abs(t_end)));
    if (boundary_sup(f) > zero) throw GeometryError("support reaches the boundary at t = " + std::to_string(t));
    s.times.push_back(f.time());
    s.sup_norms.push_back(sup_abs(f));
  }
  return s;
}

DecayFit fit_decay_exponent(const DecaySeries& series, double t_min, double t_max) {
  std::vector<double> x, y;
  for (std::size_t i = 0; i < series.times.size(); ++i) {
    const double t = series.times[i];
    if (t < t_min - 1e-12 * std::max(1.0, std::abs(t_min))) continue;
    if (t_max >= 0.0 && t > t_max + 1e-12 * std::max(1.0, t_max)) continue;
    const double tau = t - series.time_origin;
    if (!(tau > 0.0) || !(series.sup_norms[i] > 0.0)) continue;
    x.push_back(std::log(tau));
    y.push_back(std::log(series.sup_norms[i]));
  }
  if (x.size() < 5) throw InputError("need at least 5 positive samples in the fit window");
  const double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (!(sxx > 0.0)) throw InputError("fit window has a single time");
  DecayFit fit;
  fit.samples = x.size();
  fit.slope = sxy / sxx;
  fit.gamma_hat = -fit.slope / static_cast<double>(series.dim);
  const double intercept = my - fit.slope * mx;
  fit.C_hat = series.l1_norm > 0.0 ? std::exp(intercept) / std::pow(series.l1_norm, fit.gamma_hat)
                                   : std::exp(intercept);
  return fit;
}

std::vector<double> bootstrap_gamma(double gamma0, double gamma_init, int n) {
  if (!(gamma0 > 0.0)) throw InputError("gamma0 must be positive");
  if (!(gamma_init > 0.0 && gamma_init <= gamma0)) throw InputError("gamma_init must lie in (0, gamma0]");
  if (n < 0) throw InputError("n must be nonnegative");
  std::vector<double> out{gamma_init};
  double g = gamma_init;
  for (int i = 0; i < n; ++i) {
    g = 2.0 * g - g * g / gamma0;
    out.push_back(g);
  }
  return out;
}

double decay_box_half_width(double support_radius, double max_speed, double t_end) {
  return support_radius + max_speed * t_end * 1.1;
}

double decay_calibration_constant(int d, double gamma) {
  if (d < 1 || d > 2) throw UnsupportedError("decay calibration supports d = 1, 2");
  static std::mutex mu;
  static std::map<std::pair<int, double>, double> cache;
  {
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find({d, gamma});
    if (it != cache.end()) return it->second;
  }
  const FluxSpec flux = make_flux(d == 1 ? "burgers" : "generalized_burgers:2");
  const double t_end = d == 1 ? 8.0 : 4.0;
  const std::size_t n = d == 1 ? 2048 : 256;
  const double radius = 0.5 * std::sqrt(static_cast<double>(d));
  const double half = decay_box_half_width(radius, flux.max_spatial_speed(0.0, 1.0) * std::sqrt(static_cast<double>(d)),
                                           t_end);
  Grid g = d == 1 ? Grid::make_1d(n, 0.5 - half, 0.5 + half)
                  : Grid::make_2d(n, 0.5 - half, 0.5 + half, n, 0.5 - half, 0.5 + half);
  auto u0 = ScalarField::sample(g, [](const Point& p) {
    for (double x : p)
      if (x < 0.0 || x > 1.0) return 0.0;
    return 1.0;
  });
  const auto series = decay_experiment(flux, u0, t_end, 33, 0.0);
  const double exp_inf = 1.0 - gamma * (1.0 + d * (d + 1) / 2.0);
  double c1 = 0.0;
  for (std::size_t i = 0; i < series.times.size(); ++i) {
    const double t = series.times[i];
    if (!(t > 0.0)) continue;
    const double bound = std::pow(series.linf_norm, exp_inf) * std::pow(series.l1_norm, gamma) * std::pow(t, -d * gamma);
    c1 = std::max(c1, series.sup_norms[i] / bound);
  }
  std::lock_guard<std::mutex> lock(mu);
  cache[{d, gamma}] = c1;
  return c1;
}

double decay_constant_prediction(const FluxSpec& flux, double l1, double linf, double gamma, double t) {
  const int d = burgers_dimension(flux);
  if (d < 1) throw UnsupportedError("decay constants are known for the generalized Burgers family only");
  if (!(gamma > 0.0 && gamma < gamma_zero(flux))) throw InputError("gamma must lie in (0, gamma_zero)");
  if (!(t > 0.0)) throw InputError("t must be positive");
  if (l1 < 0.0 || linf < 0.0) throw InputError("norms must be nonnegative");
  const double c1 = decay_calibration_constant(d, gamma);
  const double exp_inf = 1.0 - gamma * (1.0 + d * (d + 1) / 2.0);
  return c1 * std::pow(linf, exp_inf) * std::pow(l1, gamma) * std::pow(t, -d * gamma);
}

}  // namespace conslaw
