#include "conslaw/solver.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "conslaw/errors.hpp"
#include "conslaw/parallel.hpp"

namespace conslaw {

Boundary parse_boundary(const std::string& s) {
  if (s == "outflow") return Boundary::outflow;
  if (s == "periodic") return Boundary::periodic;
  throw InputError("unknown boundary mode '" + s + "'");
}

NumericalFluxKind parse_numerical_flux(const std::string& s) {
  if (s == "engquist_osher" || s == "eo") return NumericalFluxKind::engquist_osher;
  if (s == "godunov") return NumericalFluxKind::godunov;
  throw InputError("unknown numerical flux '" + s + "'");
}

const char* to_string(Boundary b) { return b == Boundary::outflow ? "outflow" : "periodic"; }
const char* to_string(NumericalFluxKind k) {
  return k == NumericalFluxKind::engquist_osher ? "engquist_osher" : "godunov";
}

std::vector<double> Trajectory::times() const {
  std::vector<double> t;
  t.reserve(frames.size());
  for (const auto& f : frames) t.push_back(f.time());
  return t;
}

std::size_t Trajectory::frame_index(double t, double tol) const {
  auto it = std::lower_bound(frames.begin(), frames.end(), t - tol,
                             [](const ScalarField& f, double x) { return f.time() < x; });
  if (it == frames.end() || std::abs(it->time() - t) > tol)
    throw InputError("trajectory has no frame at t = " + std::to_string(t));
  return static_cast<std::size_t>(it - frames.begin());
}

bool Trajectory::uniform(double rel_tol) const {
  if (frames.size() < 2) return false;
  const double dt = frames[1].time() - frames[0].time();
  for (std::size_t k = 1; k < frames.size(); ++k) {
    if (std::abs(frames[k].time() - frames[k - 1].time() - dt) > rel_tol * std::max(1.0, dt) + 1e-12 * std::abs(frames[k].time()))
      return false;
  }
  return true;
}

FluxKernel::FluxKernel(const FluxSpec& flux, std::size_t comp, double lo, double hi, NumericalFluxKind kind)
    : flux_(&flux), comp_(comp), kind_(kind) {
  turns_ = flux.sign_changes(comp, lo, hi);
}

double FluxKernel::operator()(double a, double b) const {
  const double fa = flux_->A(comp_, a);
  if (a == b) return fa;
  const double fb = flux_->A(comp_, b);
  const double lo = std::min(a, b);
  const double hi = std::max(a, b);
  if (kind_ == NumericalFluxKind::engquist_osher) {
    double variation = 0.0;
    double prev = a < b ? fa : fb;
    for (double t : turns_) {
      if (t <= lo || t >= hi) continue;
      const double ft = flux_->A(comp_, t);
      variation += std::abs(ft - prev);
      prev = ft;
    }
    variation += std::abs((a < b ? fb : fa) - prev);
    return 0.5 * (fa + fb) - 0.5 * (b > a ? variation : -variation);
  }
  double m = a <= b ? std::min(fa, fb) : std::max(fa, fb);
  for (double t : turns_) {
    if (t <= lo || t >= hi) continue;
    const double ft = flux_->A(comp_, t);
    m = a <= b ? std::min(m, ft) : std::max(m, ft);
  }
  return m;
}

double cfl_dt(const ScalarField& field, const FluxSpec& flux, double cfl) {
  if (!(cfl > 0.0 && cfl <= 0.5)) throw InputError("cfl must lie in (0, 0.5]");
  const auto& g = field.grid();
  if (g.rank() != flux.spatial_dim()) throw InputError("field rank does not match the flux's spatial dimension");
  double dt = INFINITY;
  for (std::size_t k = 0; k < g.rank(); ++k) {
    const double s = flux.max_speed(flux.spatial_component(k), field.min(), field.max());
    if (s > 0.0) dt = std::min(dt, g.spacing[k] / s);
  }
  if (!std::isfinite(dt)) dt = g.min_spacing();
  return cfl * dt;
}

std::vector<double> sweep(const Grid& g, std::span<const double> u, const FluxKernel& kernel, std::size_t axis,
                          double dt, Boundary boundary) {
  const std::size_t n = g.shape[axis];
  const std::size_t s = g.stride(axis);
  const std::size_t lines = g.size() / n;
  const double ratio = dt / g.spacing[axis];
  std::vector<double> out(u.size());
  auto line = [&](std::size_t l) {
    const std::size_t outer = l / s;
    const std::size_t inner = l % s;
    const std::size_t base = outer * n * s + inner;
    std::vector<double> v(n + 2), F(n + 1);
    for (std::size_t i = 0; i < n; ++i) v[i + 1] = u[base + i * s];
    if (boundary == Boundary::periodic) {
      v[0] = v[n];
      v[n + 1] = v[1];
    } else {
      v[0] = v[1];
      v[n + 1] = v[n];
    }
    for (std::size_t i = 0; i <= n; ++i) F[i] = kernel(v[i], v[i + 1]);
    for (std::size_t i = 0; i < n; ++i) out[base + i * s] = v[i + 1] - ratio * (F[i + 1] - F[i]);
  };
  if (lines >= 64) {
    parallel_for(lines, line);
  } else {
    for (std::size_t l = 0; l < lines; ++l) line(l);
  }
  return out;
}

ScalarField step(const ScalarField& field, const FluxSpec& flux, double dt, const SolverConfig& config) {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw InputError("dt must be positive");
  const double limit = cfl_dt(field, flux, config.cfl);
  if (dt > limit * (1.0 + 1e-9)) throw StabilityError("dt = " + std::to_string(dt) + " exceeds the CFL step " + std::to_string(limit));
  const auto& g = field.grid();
  std::vector<double> u(field.values().begin(), field.values().end());
  for (std::size_t axis = 0; axis < g.rank(); ++axis) {
    FluxKernel kernel(flux, flux.spatial_component(axis), field.min(), field.max(), config.numerical_flux);
    u = sweep(g, u, kernel, axis, dt, config.boundary);
  }
  for (double x : u)
    if (!std::isfinite(x)) throw NumericalError("non-finite value after step");
  return ScalarField(g, std::move(u), field.time() + dt);
}

Trajectory solve(const ScalarField& u0, const FluxSpec& flux, double t_end, std::vector<double> snapshot_times,
                 const SolverConfig& config) {
  const double t0 = u0.time();
  if (!(t_end > t0)) throw InputError("t_end must exceed the initial time");
  const double span = t_end - t0;
  const double eps = 1e-12 * std::max(1.0, std::abs(t_end));
  for (double t : snapshot_times)
    if (t < t0 - eps || t > t_end + eps) throw InputError("snapshot time " + std::to_string(t) + " outside the run");
  snapshot_times.push_back(t_end);
  std::sort(snapshot_times.begin(), snapshot_times.end());

  Trajectory traj;
  traj.flux_name = flux.name;
  traj.config = config;
  traj.frames.push_back(u0);
  ScalarField u = u0;

  if (config.uniform_dt) {
    const double dtc = config.fixed_dt ? *config.fixed_dt : cfl_dt(u0, flux, config.cfl);
    const auto steps = static_cast<std::size_t>(std::ceil(span / dtc * (1.0 - 1e-12)));
    const double dt = span / static_cast<double>(steps);
    std::set<std::size_t> record;
    for (double t : snapshot_times) record.insert(static_cast<std::size_t>(std::llround((t - t0) / dt)));
    for (std::size_t k = 1; k <= steps; ++k) {
      u = step(u, flux, dt, config);
      const double t = k == steps ? t_end : t0 + static_cast<double>(k) * dt;
      u = u.with_time(t);
      if (config.record_every_step || record.count(k)) traj.frames.push_back(u);
    }
    return traj;
  }

  double t = t0;
  std::size_t next = 0;
  while (next < snapshot_times.size() && snapshot_times[next] <= t0 + eps) ++next;
  while (t < t_end - eps) {
    double dt = config.fixed_dt ? *config.fixed_dt : cfl_dt(u, flux, config.cfl);
    const double target = next < snapshot_times.size() ? snapshot_times[next] : t_end;
    bool hit = false;
    double t_new = t + dt;
    if (t_new >= target - 1e-9 * dt) {
      dt = target - t;
      t_new = target;
      hit = true;
    }
    u = step(u, flux, dt, config).with_time(t_new);
    t = t_new;
    if (hit) {
      while (next < snapshot_times.size() && snapshot_times[next] <= t + eps) ++next;
    }
    if (hit || config.record_every_step) traj.frames.push_back(u);
  }
  return traj;
}

double riemann_exact(const FluxSpec& flux, double uL, double uR, double xi) {
  if (flux.spatial_dim() != 1) throw UnsupportedError("riemann_exact needs a one-dimensional law");
  if (uL == uR) return uL;
  const std::size_t c = flux.spatial_component(0);
  const double lo = std::min(uL, uR);
  const double hi = std::max(uL, uR);
  for (int i = 0; i <= 256; ++i) {
    const double v = lo + (hi - lo) * i / 256.0;
    if (flux.a(c, v, 1) < -1e-12) throw UnsupportedError("riemann_exact needs a convex flux on the data range");
  }
  if (uL > uR) {
    const double s = (flux.A(c, uL) - flux.A(c, uR)) / (uL - uR);
    return xi < s ? uL : uR;
  }
  const double aL = flux.a(c, uL);
  const double aR = flux.a(c, uR);
  if (xi <= aL) return uL;
  if (xi >= aR) return uR;
  double l = uL, r = uR;
  for (int it = 0; it < 200; ++it) {
    const double m = 0.5 * (l + r);
    if (m <= l || m >= r) break;
    if (flux.a(c, m) < xi)
      l = m;
    else
      r = m;
  }
  return 0.5 * (l + r);
}

double exact_decay_solution(int m, double t, double x) {
  if (m < 1) throw InputError("m must be at least 1");
  if (t < 0.0) throw InputError("t must be nonnegative");
  const double support = std::pow(t + 1.0, 1.0 / (m + 1.0));
  if (x < 0.0 || x > support) return 0.0;
  return std::pow(x / (t + 1.0), 1.0 / m);
}

ScalarField to_spacetime(const Trajectory& traj) {
  if (traj.frames.size() < 2) throw InputError("space-time field needs at least two frames");
  if (!traj.uniform(1e-6)) throw InputError("space-time field needs uniformly spaced frames");
  const Grid& g = traj.frames.front().grid();
  if (g.rank() > 2) throw InputError("space-time field supports at most two spatial axes");
  const double t0 = traj.frames.front().time();
  const double dt = (traj.frames.back().time() - t0) / static_cast<double>(traj.frames.size() - 1);
  Grid st;
  st.shape.push_back(traj.frames.size());
  st.origin.push_back(t0 - 0.5 * dt);
  st.spacing.push_back(dt);
  for (std::size_t a = 0; a < g.rank(); ++a) {
    st.shape.push_back(g.shape[a]);
    st.origin.push_back(g.origin[a]);
    st.spacing.push_back(g.spacing[a]);
  }
  std::vector<double> v;
  v.reserve(st.size());
  for (const auto& f : traj.frames) {
    if (!f.grid().same_geometry(g)) throw InputError("frames have different grids");
    v.insert(v.end(), f.values().begin(), f.values().end());
  }
  return ScalarField(st, std::move(v), t0);
}

Trajectory from_spacetime(const ScalarField& st, const std::string& flux_name, const SolverConfig& config) {
  const Grid& g = st.grid();
  if (g.rank() < 2) throw InputError("space-time field needs a time axis and at least one spatial axis");
  Grid sg;
  for (std::size_t a = 1; a < g.rank(); ++a) {
    sg.shape.push_back(g.shape[a]);
    sg.origin.push_back(g.origin[a]);
    sg.spacing.push_back(g.spacing[a]);
  }
  Trajectory traj;
  traj.flux_name = flux_name;
  traj.config = config;
  const std::size_t m = sg.size();
  for (std::size_t k = 0; k < g.shape[0]; ++k) {
    std::vector<double> v(st.values().begin() + static_cast<std::ptrdiff_t>(k * m),
                          st.values().begin() + static_cast<std::ptrdiff_t>((k + 1) * m));
    traj.frames.emplace_back(sg, std::move(v), g.center(0, k));
  }
  return traj;
}

}  // namespace conslaw
