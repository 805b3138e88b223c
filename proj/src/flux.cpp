#include "conslaw/flux.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numbers>

#include "conslaw/errors.hpp"
#include "conslaw/parallel.hpp"

namespace conslaw {

std::vector<double> FluxSpec::velocity(double v, int order) const {
  std::vector<double> out(dim);
  for (std::size_t c = 0; c < dim; ++c) out[c] = deriv(c, order, v);
  return out;
}

std::vector<double> FluxSpec::sign_changes(std::size_t comp, double lo, double hi) const {
  if (!(hi > lo)) return {};
  if (turning_points) {
    auto t = turning_points(comp, lo, hi);
    std::vector<double> out;
    for (double r : t)
      if (r > lo && r < hi) out.push_back(r);
    std::sort(out.begin(), out.end());
    return out;
  }
  constexpr int kCells = 512;
  std::vector<double> out;
  const double h = (hi - lo) / kCells;
  double v_prev = lo;
  double f_prev = a(comp, lo);
  for (int i = 1; i <= kCells; ++i) {
    const double v = i == kCells ? hi : lo + i * h;
    const double f = a(comp, v);
    if (f == 0.0) continue;
    if (f_prev != 0.0 && (f > 0.0) != (f_prev > 0.0)) {
      double l = v_prev, r = v, fl = f_prev;
      for (int it = 0; it < 80 && r - l > 1e-15 * std::max(1.0, std::abs(l)); ++it) {
        const double m = 0.5 * (l + r);
        const double fm = a(comp, m);
        if (fm == 0.0) {
          l = r = m;
          break;
        }
        if ((fm > 0.0) == (fl > 0.0)) {
          l = m;
          fl = fm;
        } else {
          r = m;
        }
      }
      const double root = 0.5 * (l + r);
      if (root > lo && root < hi) out.push_back(root);
    }
    v_prev = v;
    f_prev = f;
  }
  return out;
}

double FluxSpec::max_speed(std::size_t comp, double lo, double hi) const {
  double m = std::max(std::abs(a(comp, lo)), std::abs(a(comp, hi)));
  if (hi > lo) {
    constexpr int kSamples = 1024;
    for (int i = 1; i < kSamples; ++i) m = std::max(m, std::abs(a(comp, lo + (hi - lo) * i / kSamples)));
  }
  return m;
}

double FluxSpec::max_spatial_speed(double lo, double hi) const {
  double m = 0.0;
  for (std::size_t k = 0; k < spatial_dim(); ++k) m = std::max(m, max_speed(spatial_component(k), lo, hi));
  return m;
}

void FluxSpec::validate() const {
  if (dim == 0) throw InputError("flux dimension must be positive");
  if (!std::isfinite(interval.lo) || !std::isfinite(interval.hi) || interval.lo > interval.hi)
    throw InputError("flux interval must be nonempty and bounded");
  if (!flux || !deriv) throw InputError("flux '" + name + "' lacks evaluation maps");
  if (time_augmented) {
    if (dim < 2) throw InputError("time-augmented flux needs at least one spatial component");
    for (int i = 0; i <= 16; ++i) {
      const double v = interval.lo + interval.length() * i / 16.0;
      if (std::abs(a(0, v) - 1.0) > 1e-12) throw InputError("time component of a must be 1");
      for (int j = 1; j <= m_max; ++j)
        if (std::abs(a(0, v, j)) > 1e-12) throw InputError("time component of a^(j) must vanish");
    }
  }
}

namespace {

double poly_eval(const std::vector<double>& c, double v) {
  double s = 0.0;
  for (std::size_t k = c.size(); k-- > 0;) s = s * v + c[k];
  return s;
}

std::vector<double> poly_derivative(const std::vector<double>& c, int order) {
  std::vector<double> out = c;
  for (int j = 0; j < order; ++j) {
    if (out.size() <= 1) return {0.0};
    std::vector<double> d(out.size() - 1);
    for (std::size_t k = 1; k < out.size(); ++k) d[k - 1] = out[k] * static_cast<double>(k);
    out = std::move(d);
  }
  return out;
}

int parse_int_suffix(const std::string& key, const std::string& prefix) {
  const std::string rest = key.substr(prefix.size());
  std::size_t pos = 0;
  int n = 0;
  try {
    n = std::stoi(rest, &pos);
  } catch (const std::exception&) {
    throw InputError("unknown flux key '" + key + "'");
  }
  if (pos != rest.size()) throw InputError("unknown flux key '" + key + "'");
  return n;
}

}  // namespace

FluxSpec polynomial_flux(std::string name, std::vector<std::vector<double>> coeffs, Interval interval,
                         bool time_augmented, int m_max) {
  if (coeffs.empty()) throw InputError("polynomial flux needs at least one component");
  int degree = 0;
  for (const auto& c : coeffs) degree = std::max(degree, static_cast<int>(c.size()) - 1);
  FluxSpec f;
  f.name = std::move(name);
  f.dim = coeffs.size();
  f.time_augmented = time_augmented;
  f.interval = interval;
  f.m_max = m_max >= 0 ? m_max : std::max({degree, static_cast<int>(f.dim) - 1, 1});

  const std::size_t dim = f.dim;
  std::vector<std::vector<double>> antider(dim);
  std::vector<std::vector<std::vector<double>>> derivs(dim);
  for (std::size_t c = 0; c < dim; ++c) {
    antider[c].assign(coeffs[c].size() + 1, 0.0);
    for (std::size_t k = 0; k < coeffs[c].size(); ++k) antider[c][k + 1] = coeffs[c][k] / static_cast<double>(k + 1);
    for (int j = 0; j <= f.m_max + 1; ++j) derivs[c].push_back(poly_derivative(coeffs[c], j));
  }
  f.flux = [antider](std::size_t c, double v) { return poly_eval(antider[c], v); };
  f.deriv = [derivs, coeffs](std::size_t c, int order, double v) {
    if (order < 0) throw InputError("negative derivative order");
    if (static_cast<std::size_t>(order) < derivs[c].size()) return poly_eval(derivs[c][order], v);
    return poly_eval(poly_derivative(coeffs[c], order), v);
  };
  // Monomial components v^k change sign only at 0 (odd k); other polynomials use the sampled search.
  bool monomials = true;
  for (const auto& c : coeffs) {
    int nz = 0;
    for (double x : c) nz += x != 0.0;
    monomials = monomials && nz <= 1;
  }
  if (monomials) {
    f.turning_points = [coeffs](std::size_t c, double lo, double hi) {
      std::vector<double> out;
      const auto& p = coeffs[c];
      for (std::size_t k = 0; k < p.size(); ++k)
        if (p[k] != 0.0 && k % 2 == 1 && lo < 0.0 && hi > 0.0) out.push_back(0.0);
      return out;
    };
  }
  f.validate();
  return f;
}

FluxSpec make_flux(const std::string& key) {
  const Interval unit{-1.0, 1.0};
  if (key == "burgers") return polynomial_flux("burgers", {{1.0}, {0.0, 1.0}}, unit, true);
  if (key.rfind("power:", 0) == 0) {
    const int m = parse_int_suffix(key, "power:");
    if (m < 1 || m > 12) throw InputError("power flux exponent must be in 1..12");
    std::vector<double> c(static_cast<std::size_t>(m) + 1, 0.0);
    c[static_cast<std::size_t>(m)] = 1.0;
    return polynomial_flux(key, {{1.0}, c}, unit, true);
  }
  if (key.rfind("generalized_burgers:", 0) == 0) {
    const int d = parse_int_suffix(key, "generalized_burgers:");
    if (d < 1 || d > 6) throw InputError("generalized Burgers dimension must be in 1..6");
    std::vector<std::vector<double>> comps{{1.0}};
    for (int k = 1; k <= d; ++k) {
      std::vector<double> c(static_cast<std::size_t>(k) + 1, 0.0);
      c[static_cast<std::size_t>(k)] = 1.0;
      comps.push_back(c);
    }
    return polynomial_flux(key, comps, unit, true);
  }
  if (key == "trig") {
    FluxSpec f;
    f.name = "trig";
    f.dim = 2;
    f.time_augmented = false;
    f.interval = {0.0, std::numbers::pi / 2};
    f.m_max = 4;
    f.flux = [](std::size_t c, double v) { return c == 0 ? std::sin(v) : 1.0 - std::cos(v); };
    f.deriv = [](std::size_t c, int order, double v) {
      const double phase = v + order * std::numbers::pi / 2;
      return c == 0 ? std::cos(phase) : std::sin(phase);
    };
    f.validate();
    return f;
  }
  throw InputError("unknown flux key '" + key + "'");
}

std::vector<std::string> flux_catalogue() {
  return {"burgers", "power:m", "generalized_burgers:d", "trig"};
}

FluxSpec shifted_flux(const FluxSpec& base, double c) {
  FluxSpec f = base;
  f.name = base.name + "+shift";
  f.interval = {base.interval.lo + c, base.interval.hi + c};
  auto bf = base.flux;
  auto bd = base.deriv;
  f.flux = [bf, c](std::size_t k, double v) { return bf(k, v - c); };
  f.deriv = [bd, c](std::size_t k, int order, double v) { return bd(k, order, v - c); };
  if (base.turning_points) {
    auto tp = base.turning_points;
    f.turning_points = [tp, c](std::size_t k, double lo, double hi) {
      auto r = tp(k, lo - c, hi - c);
      for (double& x : r) x += c;
      return r;
    };
  }
  return f;
}

FluxSpec transformed_flux(const FluxSpec& base, const std::vector<double>& s_matrix, double lambda) {
  const std::size_t n = base.dim;
  if (s_matrix.size() != n * n) throw InputError("scaling matrix has wrong size");
  if (!(lambda > 0.0)) throw InputError("lambda must be positive");
  Eigen::MatrixXd S(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) S(i, j) = s_matrix[i * n + j];
  Eigen::FullPivLU<Eigen::MatrixXd> lu(S);
  if (!lu.isInvertible()) throw InputError("scaling matrix is singular");
  Eigen::MatrixXd inv = lu.inverse();
  std::vector<double> sinv(n * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) sinv[i * n + j] = std::abs(inv(i, j)) < 1e-15 ? 0.0 : inv(i, j);

  FluxSpec f;
  f.name = base.name + "~";
  f.dim = n;
  f.interval = {base.interval.lo / lambda, base.interval.hi / lambda};
  f.m_max = base.m_max;
  auto bf = base.flux;
  auto bd = base.deriv;
  f.flux = [bf, sinv, n, lambda](std::size_t c, double v) {
    double s = 0.0;
    for (std::size_t k = 0; k < n; ++k)
      if (sinv[c * n + k] != 0.0) s += sinv[c * n + k] * bf(k, lambda * v);
    return s / lambda;
  };
  f.deriv = [bd, sinv, n, lambda](std::size_t c, int order, double v) {
    double s = 0.0;
    for (std::size_t k = 0; k < n; ++k)
      if (sinv[c * n + k] != 0.0) s += sinv[c * n + k] * bd(k, order, lambda * v);
    return s * std::pow(lambda, order);
  };
  // Components that are a pure rescaling of one base component inherit its turning points.
  if (base.turning_points) {
    bool diagonal = true;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (i != j && sinv[i * n + j] != 0.0) diagonal = false;
    if (diagonal) {
      auto tp = base.turning_points;
      f.turning_points = [tp, lambda](std::size_t c, double lo, double hi) {
        auto r = tp(c, lo * lambda, hi * lambda);
        for (double& x : r) x /= lambda;
        return r;
      };
    }
  }
  f.time_augmented = false;
  if (base.time_augmented) {
    bool ok = true;
    for (int i = 0; i <= 8 && ok; ++i) {
      const double v = f.interval.lo + f.interval.length() * i / 8.0;
      ok = std::abs(f.deriv(0, 0, v) - 1.0) < 1e-12;
      for (int j = 1; j <= f.m_max && ok; ++j) ok = std::abs(f.deriv(0, j, v)) < 1e-12;
    }
    f.time_augmented = ok;
  }
  f.validate();
  return f;
}

namespace {

/// Measure of {|g| < delta} from samples of g on a uniform grid with spacing h.
double measure_from_samples(const std::vector<double>& g, double h, double delta) {
  double total = 0.0;
  double prev = std::abs(g[0]) - delta;
  for (std::size_t i = 1; i < g.size(); ++i) {
    const double cur = std::abs(g[i]) - delta;
    if (prev < 0.0 && cur < 0.0) {
      total += h;
    } else if (prev < 0.0) {
      total += h * prev / (prev - cur);
    } else if (cur < 0.0) {
      total += h * cur / (cur - prev);
    }
    prev = cur;
  }
  return total;
}

struct VelocitySamples {
  double h = 0.0;
  std::vector<std::vector<double>> comps;
};

VelocitySamples sample_velocity(const FluxSpec& f, std::size_t n) {
  VelocitySamples s;
  s.comps.assign(f.dim, std::vector<double>(n));
  const double lo = f.interval.lo;
  const double len = f.interval.length();
  s.h = n > 1 ? len / static_cast<double>(n - 1) : 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double v = n > 1 ? lo + len * static_cast<double>(i) / static_cast<double>(n - 1) : lo;
    for (std::size_t c = 0; c < f.dim; ++c) s.comps[c][i] = f.a(c, v);
  }
  return s;
}

std::vector<double> project(const VelocitySamples& s, std::span<const double> xi) {
  const std::size_t n = s.comps[0].size();
  std::vector<double> g(n, 0.0);
  for (std::size_t c = 0; c < s.comps.size(); ++c) {
    if (xi[c] == 0.0) continue;
    for (std::size_t i = 0; i < n; ++i) g[i] += xi[c] * s.comps[c][i];
  }
  return g;
}

void check_unit(std::span<const double> xi, std::size_t dim) {
  if (xi.size() != dim) throw InputError("direction has wrong dimension");
  double n2 = 0.0;
  for (double x : xi) n2 += x * x;
  if (std::abs(std::sqrt(n2) - 1.0) > 1e-12) throw InputError("direction must be a unit vector");
}

void canonical_sign(std::vector<double>& x) {
  for (double c : x) {
    if (std::abs(c) > 1e-14) {
      if (c < 0.0)
        for (double& y : x) y = -y;
      return;
    }
  }
}

}  // namespace

double nonlinearity_measure(const FluxSpec& flux, std::span<const double> xi, double delta, std::size_t v_samples) {
  check_unit(xi, flux.dim);
  if (!(delta > 0.0)) throw InputError("delta must be positive");
  if (v_samples < 2) throw InputError("need at least two v samples");
  auto s = sample_velocity(flux, v_samples);
  return measure_from_samples(project(s, xi), s.h, delta);
}

std::vector<std::vector<double>> sphere_directions(std::size_t dim, std::size_t n) {
  std::vector<std::vector<double>> out;
  if (dim == 0) return out;
  for (std::size_t k = 0; k < dim; ++k) {
    std::vector<double> e(dim, 0.0);
    e[k] = 1.0;
    out.push_back(e);
  }
  if (dim == 1) return out;
  if (dim == 2) {
    for (std::size_t i = 0; i < n; ++i) {
      const double t = std::numbers::pi * static_cast<double>(i) / static_cast<double>(n);
      out.push_back({std::cos(t), std::sin(t)});
    }
  } else if (dim == 3) {
    const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
    for (std::size_t i = 0; i < n; ++i) {
      const double z = (static_cast<double>(i) + 0.5) / static_cast<double>(n);
      const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
      const double phi = golden * static_cast<double>(i);
      out.push_back({r * std::cos(phi), r * std::sin(phi), z});
    }
  } else {
    // Kronecker sequence with generalized golden ratio, mapped to Gaussians.
    const std::size_t m = dim + (dim % 2);
    double phi = 2.0;
    for (int it = 0; it < 64; ++it) phi = std::pow(1.0 + phi, 1.0 / static_cast<double>(m + 1));
    std::vector<double> alpha(m);
    for (std::size_t k = 0; k < m; ++k) alpha[k] = std::fmod(std::pow(1.0 / phi, static_cast<double>(k + 1)), 1.0);
    for (std::size_t i = 0; i < n; ++i) {
      std::vector<double> u(m), x(dim);
      for (std::size_t k = 0; k < m; ++k) u[k] = std::fmod(0.5 + alpha[k] * static_cast<double>(i + 1), 1.0);
      for (std::size_t k = 0; k + 1 < m; k += 2) {
        const double r = std::sqrt(-2.0 * std::log(std::max(u[k], 1e-300)));
        const double th = 2.0 * std::numbers::pi * u[k + 1];
        if (k < dim) x[k] = r * std::cos(th);
        if (k + 1 < dim) x[k + 1] = r * std::sin(th);
      }
      double nrm = 0.0;
      for (double c : x) nrm += c * c;
      nrm = std::sqrt(nrm);
      if (nrm < 1e-12) continue;
      for (double& c : x) c /= nrm;
      out.push_back(x);
    }
  }
  for (auto& x : out) {
    double nrm = 0.0;
    for (double c : x) nrm += c * c;
    nrm = std::sqrt(nrm);
    for (double& c : x) c /= nrm;
    canonical_sign(x);
  }
  // Drop exact duplicates (axes already present in the lattice).
  std::vector<std::vector<double>> unique;
  for (auto& x : out) {
    bool dup = false;
    for (const auto& y : unique) {
      double d = 0.0;
      for (std::size_t k = 0; k < dim; ++k) d = std::max(d, std::abs(x[k] - y[k]));
      if (d < 1e-12) {
        dup = true;
        break;
      }
    }
    if (!dup) unique.push_back(std::move(x));
  }
  return unique;
}

std::vector<double> default_delta_grid() {
  std::vector<double> g;
  for (int k = 2; k <= 12; ++k) g.push_back(std::ldexp(1.0, -k));
  return g;
}

NonlinearityReport estimate_alpha(const FluxSpec& flux, std::size_t xi_samples, const std::vector<double>& deltas,
                                  std::size_t v_samples) {
  if (deltas.size() < 2) throw InputError("delta grid needs at least two values");
  for (std::size_t i = 0; i < deltas.size(); ++i) {
    if (!(deltas[i] > 0.0 && deltas[i] < 1.0)) throw InputError("deltas must lie in (0,1)");
    if (i > 0 && !(deltas[i] < deltas[i - 1])) throw InputError("delta grid must be strictly decreasing");
  }
  if (xi_samples < flux.dim) throw InputError("xi_samples must be at least the flux dimension");
  if (v_samples < 2) throw InputError("need at least two v samples");

  const auto dirs = sphere_directions(flux.dim, xi_samples);
  const auto samples = sample_velocity(flux, v_samples);

  struct Fit {
    double slope = 1.0;
    double C = 0.0;
    bool degenerate = false;
    bool all_zero = false;
  };
  std::vector<Fit> fits(dirs.size());
  parallel_for(dirs.size(), [&](std::size_t d) {
    auto g = project(samples, dirs[d]);
    const double edge = std::min(std::abs(g.front()), std::abs(g.back()));
    std::vector<double> lx, ly, ex, ey;
    double last_measure = 0.0;
    for (double delta : deltas) {
      const double m = measure_from_samples(g, samples.h, delta);
      if (m > 0.0) {
        ex.push_back(std::log(delta));
        ey.push_back(std::log(m));
        last_measure = m / delta;
        // Sublevel sets reaching an end of I are clipped there; keep them out of the fit.
        if (edge >= delta) {
          lx.push_back(std::log(delta));
          ly.push_back(std::log(m));
        }
      }
    }
    if (lx.size() < 2) {
      lx = std::move(ex);
      ly = std::move(ey);
    }
    Fit f;
    if (lx.empty()) {
      f.all_zero = true;
      f.slope = 1.0;
      f.C = 0.0;
    } else if (lx.size() == 1) {
      f.slope = 1.0;
      f.C = last_measure;
    } else {
      const double n = static_cast<double>(lx.size());
      double mx = 0.0, my = 0.0;
      for (std::size_t i = 0; i < lx.size(); ++i) {
        mx += lx[i];
        my += ly[i];
      }
      mx /= n;
      my /= n;
      double sxx = 0.0, sxy = 0.0;
      for (std::size_t i = 0; i < lx.size(); ++i) {
        sxx += (lx[i] - mx) * (lx[i] - mx);
        sxy += (lx[i] - mx) * (ly[i] - my);
      }
      f.slope = sxy / sxx;
      f.C = std::exp(my - f.slope * mx);
      f.degenerate = f.slope <= 1e-9;
    }
    fits[d] = f;
  });

  NonlinearityReport rep;
  rep.sample_grid.xi_samples = dirs.size();
  rep.sample_grid.v_samples = v_samples;
  rep.sample_grid.deltas = deltas;
  std::size_t worst = 0;
  double worst_slope = INFINITY;
  std::size_t zero_dirs = 0;
  for (std::size_t d = 0; d < dirs.size(); ++d) {
    if (fits[d].all_zero) ++zero_dirs;
    if (fits[d].slope < worst_slope) {
      worst_slope = fits[d].slope;
      worst = d;
    }
  }
  rep.sample_grid.worst_xi = dirs[worst];
  rep.C_hat = fits[worst].C;
  if (worst_slope <= 1e-9) {
    rep.sample_grid.degenerate = true;
    rep.sample_grid.notes.push_back("measure does not shrink with delta in the worst direction: not genuinely nonlinear");
  }
  if (zero_dirs > 0)
    rep.sample_grid.notes.push_back(std::to_string(zero_dirs) +
                                    " directions had zero measure on the whole grid and contribute alpha = 1");
  rep.alpha_hat = std::clamp(worst_slope, 1e-3, 1.0);
  if (flux.m_max >= static_cast<int>(flux.dim) - 1) {
    rep.m_hat = hormander_order(flux);
    if (rep.m_hat <= flux.m_max) {
      rep.c0_hat = nondegeneracy_constant(flux, 401, 2000, rep.m_hat);
    } else {
      rep.c0_hat = 0.0;
      rep.sample_grid.notes.push_back("Hormander order not reached up to m_max; c0 set to 0");
    }
  }
  return rep;
}

int hormander_order(const FluxSpec& flux, std::size_t v_samples) {
  if (flux.m_max < static_cast<int>(flux.dim) - 1) throw InputError("m_max is below dim - 1");
  if (v_samples < 1) throw InputError("need at least one v sample");
  const std::size_t n = flux.dim;
  std::vector<double> vs(v_samples);
  for (std::size_t i = 0; i < v_samples; ++i)
    vs[i] = v_samples == 1 ? flux.interval.lo
                           : flux.interval.lo + flux.interval.length() * static_cast<double>(i) /
                                                    static_cast<double>(v_samples - 1);
  // Smallest order spanning at v, then the maximum over samples.
  int worst = 0;
  for (double v : vs) {
    Eigen::MatrixXd M(n, flux.m_max + 1);
    for (int j = 0; j <= flux.m_max; ++j)
      for (std::size_t c = 0; c < n; ++c) M(static_cast<Eigen::Index>(c), j) = flux.a(c, v, j);
    int found = flux.m_max + 1;
    for (int m = static_cast<int>(n) - 1; m <= flux.m_max; ++m) {
      Eigen::JacobiSVD<Eigen::MatrixXd> svd(M.leftCols(m + 1));
      const auto& sv = svd.singularValues();
      if (sv.size() < static_cast<Eigen::Index>(n) || sv(0) == 0.0) continue;
      std::size_t rank = 0;
      for (Eigen::Index k = 0; k < sv.size(); ++k)
        if (sv(k) > 1e-10 * sv(0)) ++rank;
      if (rank == n) {
        found = m;
        break;
      }
    }
    worst = std::max(worst, found);
    if (worst > flux.m_max) break;
  }
  return worst;
}

double nondegeneracy_constant(const FluxSpec& flux, std::size_t v_samples, std::size_t xi_samples, int m) {
  if (v_samples < 1 || xi_samples < 1) throw InputError("sample counts must be positive");
  if (m < 0) m = std::min(hormander_order(flux), flux.m_max);
  const std::size_t n = flux.dim;
  const auto dirs = sphere_directions(n, xi_samples);
  std::vector<double> best(v_samples, INFINITY);
  parallel_for(v_samples, [&](std::size_t i) {
    const double v = v_samples == 1 ? flux.interval.lo
                                    : flux.interval.lo + flux.interval.length() * static_cast<double>(i) /
                                                             static_cast<double>(v_samples - 1);
    std::vector<std::vector<double>> vecs;
    for (int j = 0; j <= m; ++j) vecs.push_back(flux.velocity(v, j));
    double mn = INFINITY;
    for (const auto& xi : dirs) {
      double mx = 0.0;
      for (const auto& a : vecs) {
        double dot = 0.0;
        for (std::size_t c = 0; c < n; ++c) dot += xi[c] * a[c];
        mx = std::max(mx, std::abs(dot));
      }
      mn = std::min(mn, mx);
    }
    best[i] = mn;
  });
  return *std::min_element(best.begin(), best.end());
}

const char* to_string(SignTag t) {
  switch (t) {
    case SignTag::neg:
      return "neg";
    case SignTag::small:
      return "small";
    case SignTag::pos:
      return "pos";
  }
  return "?";
}

std::vector<TaggedInterval> sign_decomposition(const std::function<double(double, int)>& f, Interval I,
                                               double delta, int k, std::size_t samples) {
  if (k < 1) throw InputError("k must be at least 1");
  if (!(delta > 0.0)) throw InputError("delta must be positive");
  if (!(I.hi > I.lo)) throw InputError("interval must have positive length");
  if (samples < 2) samples = 2;
  double prev = 0.0;
  for (std::size_t i = 0; i < samples; ++i) {
    const double v = I.lo + I.length() * static_cast<double>(i) / static_cast<double>(samples - 1);
    if (f(v, k) < 1.0 - 1e-12) throw ContractError("f^(k) >= 1 fails at a sampled point");
    const double g = f(v, k - 1);
    if (i > 0 && g < prev) throw ContractError("f^(k-1) is not increasing on the interval");
    prev = g;
  }
  auto g = [&](double v) { return f(v, k - 1); };
  // First v with g(v) >= level, by bisection on the increasing g.
  auto crossing = [&](double level) {
    if (g(I.lo) >= level) return I.lo;
    if (g(I.hi) < level) return I.hi;
    double l = I.lo, r = I.hi;
    for (int it = 0; it < 200 && r - l > 0.0; ++it) {
      const double m = 0.5 * (l + r);
      if (m <= l || m >= r) break;
      if (g(m) >= level)
        r = m;
      else
        l = m;
    }
    return r;
  };
  const double a = crossing(-delta);
  const double b = crossing(delta);
  std::vector<TaggedInterval> out;
  if (a > I.lo) out.push_back({{I.lo, a}, SignTag::neg});
  if (b > a) out.push_back({{a, b}, SignTag::small});
  if (I.hi > b) out.push_back({{b, I.hi}, SignTag::pos});
  const double small = b - a;
  if (small > 2.0 * delta * (1.0 + 1e-9)) throw ContractError("middle interval exceeds 2*delta");
  return out;
}

}  // namespace conslaw
