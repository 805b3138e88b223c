#include "conslaw/acceptance.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>

#include "conslaw/balls.hpp"
#include "conslaw/characteristics.hpp"
#include "conslaw/decay.hpp"
#include "conslaw/degiorgi.hpp"
#include "conslaw/entropy.hpp"
#include "conslaw/flux.hpp"
#include "conslaw/initial_conditions.hpp"
#include "conslaw/kinetic.hpp"
#include "conslaw/scaling.hpp"
#include "conslaw/solver.hpp"
#include "conslaw/structure.hpp"

namespace conslaw {

namespace {

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

struct Checks {
  std::vector<std::string> lines;
  bool all = true;

  void le(const std::string& what, double measured, double limit) {
    add(measured <= limit, what, num(measured) + " <= " + num(limit));
  }
  void add(bool ok, const std::string& what, const std::string& detail) {
    all = all && ok;
    lines.push_back(std::string(ok ? "ok   " : "FAIL ") + what + ": " + detail);
  }
};

SolverConfig every_step() {
  SolverConfig c;
  c.uniform_dt = true;
  c.record_every_step = true;
  return c;
}

ScalarField ic(const std::string& key, const Grid& g, std::map<std::string, double> params = {}) {
  InitialCondition c;
  c.key = key;
  c.params = std::move(params);
  return make_initial_condition(c, g);
}

double frame_range_lo(const Trajectory& t) {
  double lo = t.frames.front().min();
  for (const auto& f : t.frames) lo = std::min(lo, f.min());
  return lo;
}

double frame_range_hi(const Trajectory& t) {
  double hi = t.frames.front().max();
  for (const auto& f : t.frames) hi = std::max(hi, f.max());
  return hi;
}

/// Composite Simpson rule on [a, b].
double simpson(const std::function<double(double)>& f, double a, double b, int n) {
  const double h = (b - a) / n;
  double s = f(a) + f(b);
  for (int i = 1; i < n; ++i) s += f(a + i * h) * (i % 2 ? 4.0 : 2.0);
  return s * h / 3.0;
}

// ---------------------------------------------------------------------------

void criterion_decay(Checks& c) {
  const FluxSpec flux = make_flux("burgers");
  const double half = decay_box_half_width(0.5, 1.0, 15.0);
  const Grid g = Grid::make_1d(4096, 0.5 - half, 0.5 + half);
  const auto u0 = ic("decay_example", g, {{"m", 1.0}});
  const auto s = decay_experiment(flux, u0, 15.0, 33, -1.0);
  for (double t : {1.0, 3.0, 7.0, 15.0}) {
    std::size_t i = 0;
    while (i < s.times.size() && std::abs(s.times[i] - t) > 1e-9) ++i;
    if (i == s.times.size()) {
      c.add(false, "sample at t = " + num(t), "missing");
      continue;
    }
    const double exact = std::pow(t + 1.0, -0.5);
    c.le("max u relative error at t = " + num(t) + " (computed " + num(s.sup_norms[i]) + ", exact " + num(exact) + ")",
         std::abs(s.sup_norms[i] / exact - 1.0), 0.03);
  }
  const auto fit = fit_decay_exponent(s, 2.0, 15.0);
  c.le("fitted exponent over t in [2, 15] (gamma_hat " + num(fit.gamma_hat) + ")", std::abs(fit.gamma_hat - 0.5), 0.02);
}

void criterion_gamma(Checks& c) {
  c.add(gamma_zero(make_flux("burgers")) == 0.5, "gamma_zero(burgers) == 1/2", num(gamma_zero(make_flux("burgers"))));
  for (int d = 1; d <= 3; ++d) {
    const FluxSpec f = make_flux("generalized_burgers:" + std::to_string(d));
    const double closed = 1.0 / (1.0 + d * (d + 1) / 2.0);
    const double g0 = gamma_zero(f);
    c.add(g0 == closed, "gamma_zero(generalized_burgers:" + std::to_string(d) + ") == " + num(closed), num(g0));
    const auto seq = bootstrap_gamma(g0, g0 / 2.0, 6);
    int hit = -1;
    for (std::size_t k = 0; k < seq.size(); ++k) {
      if (std::abs(seq[k] - g0) < 1e-8) {
        hit = static_cast<int>(k);
        break;
      }
    }
    c.add(hit >= 0 && hit <= 6, "bootstrap from gamma0/2 (d = " + std::to_string(d) + ") within 6 iterations",
          hit >= 0 ? "reached after " + std::to_string(hit) : "not reached");
  }
}

void criterion_shock(Checks& c) {
  const FluxSpec flux = make_flux("burgers");
  // Shock 1 -> 0 on [-1, 1] over t in [0, 1].
  {
    const std::size_t N = 2048;
    const Grid g = Grid::make_1d(N, -1.0, 1.0);
    const auto traj = solve(ic("riemann", g, {{"uL", 1.0}, {"uR", 0.0}, {"x0", 0.0}}), flux, 1.0, {}, every_step());
    const auto mu = entropy_dissipation(traj, flux, default_levels(0.0, 1.0));
    const double oracle = simpson([](double v) { return 0.5 * v * (1.0 - v); }, 0.0, 1.0, 1000);
    c.le("shock dissipation relative error (total " + num(mu.total) + ", oracle " + num(oracle) + ")",
         std::abs(mu.total / oracle - 1.0), 0.10);

    const double dx = g.spacing[0];
    const auto mask = jump_set(mu, {dx}, default_jump_threshold(0.0, 1.0));
    const double speed = (0.5 * 1.0 * 1.0 - 0.0) / (1.0 - 0.0);
    const std::size_t S = mu.spatial_cells();
    long worst = 0;
    std::vector<char> row_hit(mu.geometry.shape[0], 0);
    for (auto k : mask.flagged_cells()) {
      const double t = mu.geometry.center(0, k / S);
      const long is = static_cast<long>(std::floor((speed * t - g.lower(0)) / dx));
      worst = std::max(worst, std::labs(static_cast<long>(k % S) - is));
      row_hit[k / S] = 1;
    }
    const auto rows = static_cast<std::size_t>(std::count(row_hit.begin(), row_hit.end(), 1));
    c.add(mask.count() > 0 && rows == row_hit.size(), "shock detected in every time slab",
          std::to_string(rows) + " / " + std::to_string(row_hit.size()) + " slabs, " + std::to_string(mask.count()) +
              " flagged cells");
    c.le("largest cell distance of a flagged cell from x = t/2", static_cast<double>(worst), 2.0);
  }
  // Rarefaction x/t on t in [1, 2].
  double totals[2] = {0.0, 0.0};
  const std::size_t sizes[2] = {1024, 2048};
  for (int i = 0; i < 2; ++i) {
    const Grid g = Grid::make_1d(sizes[i], -1.0, 3.0);
    const auto traj = solve(ic("rarefaction", g), flux, 2.0, {}, every_step());
    const auto mu = entropy_dissipation(traj, flux, default_levels(0.0, 1.0));
    totals[i] = mu.total;
    const auto mask = jump_set(mu, {g.spacing[0]}, default_jump_threshold(0.0, 1.0));
    c.le("rarefaction flagged cells at N = " + std::to_string(sizes[i]), static_cast<double>(mask.count()), 0.0);
  }
  c.le("rarefaction total(N=2048) / total(N=1024) (totals " + num(totals[1]) + ", " + num(totals[0]) + ")",
       totals[1] / totals[0], 0.5);
}

struct ShockCurve {
  std::function<double(double)> x;
  std::function<double(double)> jump;
};

void continuity_fixture(Checks& c, const std::string& label, const ScalarField& u0, double t_end,
                        const std::vector<ShockCurve>& shocks) {
  const FluxSpec flux = make_flux("burgers");
  const auto traj = solve(u0, flux, t_end, {}, every_step());
  const auto mu = entropy_dissipation(traj, flux, default_levels(frame_range_lo(traj), frame_range_hi(traj)));
  const auto st = to_spacetime(traj);
  const double h = u0.grid().spacing[0];
  const double floor = grid_floor(u0);
  const auto strict = jump_set(mu, {h, 2 * h, 4 * h}, 1e-3);
  const std::vector<double> radii{8 * h, 4 * h, 2 * h, h};
  const Grid& sg = st.grid();
  const std::size_t S = mu.spatial_cells();
  std::size_t tested = 0, not_decreasing = 0, above = 0;
  double worst = 0.0;
  for (std::size_t n = 0; n < sg.shape[0]; n += 7) {
    for (std::size_t i = 0; i < sg.shape[1]; i += 3) {
      const Point x{sg.center(0, n), sg.center(1, i)};
      if (!ball_fits(sg, x, radii.front())) continue;
      const auto loc = mu.geometry.locate(x);
      if (strict.flagged[loc[0] * S + loc[1]]) continue;
      const auto om = oscillation_modulus(st, x, radii);
      ++tested;
      if (!om.decreasing(1e-12)) ++not_decreasing;
      worst = std::max(worst, om.osc.back());
      if (om.osc.back() > 3.0 * floor) ++above;
    }
  }
  c.add(tested > 0 && not_decreasing == 0, label + ": osc decreasing across radii at unflagged points",
        std::to_string(not_decreasing) + " violations of " + std::to_string(tested));
  c.le(label + ": largest osc(1 cell) / grid floor at unflagged points", worst / floor, 3.0);

  std::size_t shock_pts = 0, unflagged = 0;
  double worst_rel = 0.0;
  const std::vector<double> shock_radii{16 * h, 8 * h, 4 * h};
  for (const auto& sc : shocks) {
    for (std::size_t n = 0; n < sg.shape[0]; n += 5) {
      const double t = sg.center(0, n);
      const Point x{t, sc.x(t)};
      if (!ball_fits(sg, x, shock_radii.front())) continue;
      ++shock_pts;
      const auto loc = mu.geometry.locate(x);
      if (!strict.flagged[loc[0] * S + loc[1]]) ++unflagged;
      const auto om = oscillation_modulus(st, x, shock_radii);
      const double j = sc.jump(t);
      worst_rel = std::max(worst_rel, std::abs(om.osc.back() - j) / j);
    }
  }
  c.add(shock_pts > 0 && unflagged == 0, label + ": exact shock points flagged",
        std::to_string(shock_pts - unflagged) + " / " + std::to_string(shock_pts));
  c.le(label + ": osc(4 cells) vs exact jump height, relative", worst_rel, 0.10);
}

void criterion_continuity(Checks& c) {
  {
    const Grid g = Grid::make_1d(1024, -1.0, 3.0);
    continuity_fixture(c, "composite", ic("composite", g), 1.0,
                       {{[](double t) { return 0.5 * t; }, [](double) { return 1.0; }}});
  }
  const auto sq = [](double t) { return std::sqrt(t + 1.0); };
  const auto jump = [](double t) { return 1.0 / std::sqrt(t + 1.0); };
  {
    const double half = decay_box_half_width(0.5, 1.0, 3.0);
    const Grid g = Grid::make_1d(1024, 0.5 - half, 0.5 + half);
    continuity_fixture(c, "decay example", ic("decay_example", g), 3.0, {{sq, jump}});
  }
  {
    const double half = decay_box_half_width(1.0, 1.0, 3.0);
    const Grid g = Grid::make_1d(1024, -half, half);
    continuity_fixture(c, "N-wave", ic("mirror", g), 3.0,
                       {{sq, jump}, {[sq](double t) { return -sq(t); }, jump}});
  }
}

double ladder_oracle(const ScalarField& f, const BallFrame& fr, double level, double r) {
  const Grid& g = f.grid();
  const double R = r * fr.unit;
  double a = 0.0;
  for (std::size_t k = 0; k < f.size(); ++k) {
    const Point p = g.center_of(k);
    double d2 = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) d2 += (p[i] - fr.center[i]) * (p[i] - fr.center[i]);
    if (std::sqrt(d2) <= R * (1.0 + 1e-10)) a += std::max(f[k] - level, 0.0);
  }
  return a * g.cell_volume();
}

void criterion_degiorgi(Checks& c) {
  // Randomized nonnegative fixtures.
  std::size_t nonmonotone = 0;
  double worst_quad = 0.0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    std::mt19937_64 rng(seed);
    const bool two_d = seed % 2;
    const Grid g = two_d ? Grid::make_2d(64, -2.5, 2.5, 64, -2.5, 2.5) : Grid::make_1d(256, -2.5, 2.5);
    struct Bump {
      Point c;
      double w, h;
    };
    std::vector<Bump> bumps(3);
    for (auto& b : bumps) {
      for (std::size_t a = 0; a < g.rank(); ++a) b.c.push_back(-2.0 + 4.0 * unit_uniform(rng()));
      b.w = 0.2 + 1.5 * unit_uniform(rng());
      b.h = 2.0 * unit_uniform(rng());
    }
    std::vector<double> noise(g.size());
    for (auto& v : noise) v = 0.1 * unit_uniform(rng());
    std::vector<double> vals(g.size());
    for (std::size_t k = 0; k < g.size(); ++k) {
      const Point p = g.center_of(k);
      double v = noise[k];
      for (const auto& b : bumps) {
        double r2 = 0.0;
        for (std::size_t a = 0; a < p.size(); ++a) r2 += (p[a] - b.c[a]) * (p[a] - b.c[a]);
        v += b.h * std::max(0.0, 1.0 - std::sqrt(r2) / b.w);
      }
      vals[k] = v;
    }
    const ScalarField f(g, vals);
    const double U = (0.1 + 1.9 * unit_uniform(rng())) * f.max();
    const auto lad = truncation_ladder(f, U, 25);
    for (std::size_t k = 1; k < lad.A.size(); ++k)
      if (lad.A[k] > lad.A[k - 1]) ++nonmonotone;
    if (seed < 10) {
      for (std::size_t k = 0; k < lad.A.size(); k += 5) {
        const double o = ladder_oracle(f, lad.frame, lad.levels[k], lad.radii[k]);
        worst_quad = std::max(worst_quad, std::abs(o - lad.A[k]) / (1.0 + o));
      }
    }
  }
  c.le("count of A_k increases over 100 random fixtures", static_cast<double>(nonmonotone), 0.0);
  c.le("ladder vs brute-force quadrature, relative", worst_quad, 1e-12);

  // Solver fixtures.
  const FluxSpec flux = make_flux("burgers");
  struct Fixture {
    std::string name;
    ScalarField u0;
    double t_end;
  };
  std::vector<Fixture> fixtures;
  fixtures.push_back({"rarefaction", ic("rarefaction", Grid::make_1d(1024, -1.0, 3.0)), 2.0});
  fixtures.push_back({"shock", ic("riemann", Grid::make_1d(1024, -1.0, 1.0)), 1.0});
  {
    const double half = decay_box_half_width(0.5, 1.0, 3.0);
    fixtures.push_back({"decay example", ic("decay_example", Grid::make_1d(1024, 0.5 - half, 0.5 + half)), 3.0});
  }
  for (const auto& fx : fixtures) {
    const auto traj = solve(fx.u0, flux, fx.t_end, {});
    const ScalarField& f = traj.frames.back();
    const BallFrame fr = inscribed_frame(f.grid());
    const double U = 2.0 * degiorgi_norms(f, fr).linf;
    const auto lad = truncation_ladder(f, U > 0.0 ? U : 1.0, 25, fr);
    c.le(fx.name + ": A_25 vs grid floor", lad.A.back(), grid_floor(fx.u0));
  }

  // Library of truncated translates of a Burgers bump solution in space-time.
  const Grid g = Grid::make_1d(512, -3.0, 3.0);
  const auto traj = solve(ic("bump", g, {{"height", 1.0}, {"c", 0.0}, {"w", 0.5}}), flux, 4.0, {}, every_step());
  const auto st = to_spacetime(traj);
  const Grid& sg = st.grid();
  std::vector<ScalarField> lib;
  for (int shift : {-64, -32, 0, 32, 64}) {
    for (double cut : {0.0, 0.1, 0.2, 0.3}) {
      std::vector<double> v(st.size(), 0.0);
      for (std::size_t n = 0; n < sg.shape[0]; ++n) {
        for (std::size_t i = 0; i < sg.shape[1]; ++i) {
          const long src = static_cast<long>(i) - shift;
          if (src < 0 || src >= static_cast<long>(sg.shape[1])) continue;
          v[n * sg.shape[1] + i] = std::max(st[n * sg.shape[1] + static_cast<std::size_t>(src)] - cut, 0.0);
        }
      }
      lib.emplace_back(sg, std::move(v));
    }
  }
  const auto fit = oscillation_bound_check(lib, default_gamma_grid());
  c.add(fit.best_gamma > 0.0 && std::isfinite(fit.best_C), "finite (C, gamma) on the 20-field library",
        "gamma " + num(fit.best_gamma) + ", C " + num(fit.best_C));
  c.add(fit.best_gamma >= 0.2 - 1e-12, "fitted gamma >= 0.2", num(fit.best_gamma));
}

void criterion_solver(Checks& c) {
  const FluxSpec flux = make_flux("burgers");
  const std::size_t N = 256;
  const Grid g = Grid::make_1d(N, -1.0, 1.0);
  double worst_mp = 0.0, worst_l1 = 0.0, worst_res = -INFINITY, worst_sub = -INFINITY;
  std::size_t res_fail = 0, sub_fail = 0;
  for (std::uint64_t p = 0; p < 50; ++p) {
    InitialCondition a{"random_pc", {{"pieces", 4.0 + (p % 5) * 3.0}, {"vmin", -1.0}, {"vmax", 1.0}}, 2 * p + 1};
    InitialCondition b{"random_pc", {{"pieces", 5.0 + (p % 4) * 4.0}, {"vmin", -1.0}, {"vmax", 1.0}}, 2 * p + 2};
    const auto u0 = make_initial_condition(a, g), v0 = make_initial_condition(b, g);
    SolverConfig cfg;
    cfg.boundary = Boundary::periodic;
    cfg.numerical_flux = p < 25 ? NumericalFluxKind::engquist_osher : NumericalFluxKind::godunov;
    cfg.record_every_step = true;
    cfg.fixed_dt = 0.45 * g.spacing[0] / 1.0;
    const auto tu = solve(u0, flux, 0.5, {}, cfg);
    const auto tv = solve(v0, flux, 0.5, {}, cfg);
    const double d0 = [&] {
      double s = 0.0;
      for (std::size_t k = 0; k < N; ++k) s += std::abs(u0[k] - v0[k]);
      return s * g.cell_volume();
    }();
    std::vector<ScalarField> wf;
    for (std::size_t n = 0; n < tu.frames.size(); ++n) {
      const auto& fu = tu.frames[n];
      const auto& fv = tv.frames[n];
      worst_mp = std::max({worst_mp, u0.min() - fu.min(), fu.max() - u0.max(), v0.min() - fv.min(), fv.max() - v0.max()});
      double s = 0.0;
      for (std::size_t k = 0; k < N; ++k) s += std::abs(fu[k] - fv[k]);
      worst_l1 = std::max(worst_l1, s * g.cell_volume() - d0);
      wf.push_back(pointwise_max(fu, fv));
    }
    const auto lu = uniform_levels(std::min(u0.min(), v0.min()), std::max(u0.max(), v0.max()), 16);
    for (const auto* t : {&tu, &tv}) {
      const auto rep = entropy_residual_check(*t, flux, lu, EntropyKind::kruzhkov);
      worst_res = std::max(worst_res, rep.max_residual - rep.tol);
      if (!rep.passed) ++res_fail;
    }
    Trajectory tw;
    tw.frames = std::move(wf);
    tw.flux_name = flux.name;
    tw.config = cfg;
    const auto rep = entropy_residual_check(tw, flux, lu, EntropyKind::positive_part);
    worst_sub = std::max(worst_sub, rep.max_residual - rep.tol);
    if (!rep.passed) ++sub_fail;
  }
  c.le("maximum principle overshoot over 50 pairs", worst_mp, 1e-14);
  c.le("L1 contraction excess over 50 pairs", worst_l1, 1e-12);
  c.add(res_fail == 0, "Kruzhkov residuals <= tol on 16 levels",
        std::to_string(res_fail) + " failing runs, worst residual - tol " + num(worst_res));
  c.add(sub_fail == 0, "max of two solutions passes the subsolution test",
        std::to_string(sub_fail) + " failing pairs, worst residual - tol " + num(worst_sub));
}

void criterion_characteristics(Checks& c) {
  const FluxSpec flux = make_flux("burgers");
  const int k = 64;
  const Grid g = Grid::make_1d(1024, -1.0, 3.0);
  const auto u0 = ic("rarefaction", g);
  std::vector<double> snaps;
  for (int j = 0; j <= k; ++j) snaps.push_back(1.0 + static_cast<double>(j) / k);
  const auto traj = solve(u0, flux, 2.0, snaps);
  const double h = g.spacing[0];
  const double M = flux.max_spatial_speed(flux.interval.lo, flux.interval.hi);
  const double floor = grid_floor(u0);
  for (double x0 : {0.25, 0.5, 1.0, 1.5}) {
    const double v0 = traj.frames.back().interpolate(Point{x0});
    const auto poly = backward_characteristic(traj, flux, {x0}, v0, k);
    c.le("x0 = " + num(x0) + ": chord deviation", poly.chord_deviation(), M / k + 3.0 * h);
    double var = 0.0;
    for (std::size_t j = 0; j < poly.points.size(); ++j)
      var = std::max(var, std::abs(traj.at(poly.times[j]).interpolate(poly.points[j]) - v0));
    c.le("x0 = " + num(x0) + ": variation of u along the polygon", var, 3.0 * floor);
    // Exact characteristic: the straight line through the origin.
    c.le("x0 = " + num(x0) + ": |x(1) - x0/2|", std::abs(poly.points.front()[0] - 0.5 * x0), M / k + 3.0 * h);
  }

  struct Fixture {
    std::string name;
    Trajectory traj;
    std::vector<double> xs;
  };
  std::vector<Fixture> fixtures;
  fixtures.push_back({"rarefaction", traj, {0.0, 0.5, 1.0, 1.5, 2.0}});
  {
    const Grid gs = Grid::make_1d(1024, -1.0, 1.0);
    fixtures.push_back(
        {"shock", solve(ic("riemann", gs), flux, 1.0, {0.25, 0.5, 0.75}), {-0.3, 0.2, 0.3, 0.375, 0.45, 0.5}});
  }
  {
    const Grid gc = Grid::make_1d(1024, -1.0, 3.0);
    fixtures.push_back(
        {"composite", solve(ic("composite", gc), flux, 1.0, {0.25, 0.5, 0.75}), {-0.3, 0.3, 0.5, 1.2, 1.8, 2.5}});
  }
  for (const auto& fx : fixtures) {
    std::size_t checks = 0, fails = 0;
    double worst = -INFINITY, tol = 0.0;
    const double T = fx.traj.frames.back().time();
    for (double x : fx.xs) {
      for (double tau : {0.25, 0.5}) {
        const auto rep = cone_max_principle_check(fx.traj, flux, {x}, T, tau);
        ++checks;
        if (!rep.passed) ++fails;
        worst = std::max({worst, rep.upper_diff, rep.lower_diff});
        tol = rep.tol;
      }
    }
    c.add(fails == 0, fx.name + ": cone maximum principle", std::to_string(checks - fails) + " / " +
                                                                 std::to_string(checks) + " within tol " + num(tol) +
                                                                 ", worst difference " + num(worst));
  }
}

void criterion_flux(Checks& c) {
  for (int m = 1; m <= 3; ++m) {
    const FluxSpec f = make_flux("power:" + std::to_string(m));
    const auto rep = estimate_alpha(f, 256, default_delta_grid(), 20001);
    c.le("power:" + std::to_string(m) + " |alpha_hat - 1/m| (alpha_hat " + num(rep.alpha_hat) + ")",
         std::abs(rep.alpha_hat - 1.0 / m), 0.05);
    const int order = hormander_order(f);
    c.add(order == m, "power:" + std::to_string(m) + " hormander_order == " + std::to_string(m), std::to_string(order));
  }
  // Brute-force oracle: min over v in [-1, 1], |xi| = 1 of max(|xi . (1, v)|, |xi . (0, 1)|).
  double oracle = INFINITY;
  for (int i = 0; i <= 4000; ++i) {
    const double v = -1.0 + 2.0 * i / 4000.0;
    for (int j = 0; j < 20000; ++j) {
      const double th = std::numbers::pi * j / 10000.0;
      const double x0 = std::cos(th), x1 = std::sin(th);
      oracle = std::min(oracle, std::max(std::abs(x0 + x1 * v), std::abs(x1)));
    }
  }
  const double c0 = nondegeneracy_constant(make_flux("burgers"));
  c.le("burgers c0 vs brute-force oracle (c0 " + num(c0) + ", oracle " + num(oracle) + ")", std::abs(c0 - oracle), 0.01);
  c.le("burgers c0 vs 1/sqrt(2)", std::abs(c0 - 1.0 / std::sqrt(2.0)), 0.01);
}

void criterion_scaling(Checks& c) {
  const FluxSpec flux = make_flux("burgers");
  const Grid g = Grid::make_1d(512, -1.0, 3.0);
  SolverConfig cfg = every_step();
  const auto traj = solve(ic("composite", g), flux, 1.0, {}, cfg);
  const auto st = to_spacetime(traj);
  const auto base_levels = uniform_levels(st.min() - 0.01, st.max() + 0.01, 32);
  const double base = entropy_residual_check(st, flux, base_levels, EntropyKind::kruzhkov, cfg).max_residual;
  const double r = 0.5;
  for (double lambda : {0.25, 0.5, 1.0}) {
    const auto map = build_scaling(flux, lambda);
    const auto scaled = apply_scaling(st, r, map);
    double worst_val = 0.0;
    for (std::size_t k = 0; k < scaled.size(); ++k)
      worst_val = std::max(worst_val, std::abs(scaled[k] - st[k] / lambda));
    c.le("lambda = " + num(lambda) + ": pullback values equal u / lambda", worst_val, 1e-12);
    const FluxSpec tf = scaled_flux(flux, map);
    const auto levels = uniform_levels(scaled.min() - 0.01, scaled.max() + 0.01, 32);
    const auto rep = entropy_residual_check(scaled, tf, levels, EntropyKind::kruzhkov, cfg);
    c.le("lambda = " + num(lambda) + ": transformed-flux entropy residual", rep.max_residual, rep.tol);
    c.le("lambda = " + num(lambda) + ": residual vs unscaled residual / lambda", rep.max_residual,
         std::max(base, 0.0) / lambda + 1e-12);
  }
}

struct Spec {
  const char* name;
  double time_limit;
  void (*body)(Checks&);
};

const Spec kCriteria[] = {
    {"optimal decay oracle", 60.0, criterion_decay},
    {"gamma_0 closed forms and bootstrap", 1.0, criterion_gamma},
    {"shock dissipation concentration", 120.0, criterion_shock},
    {"continuity outside the jump set", 0.0, criterion_continuity},
    {"De Giorgi ladder", 0.0, criterion_degiorgi},
    {"solver entropy/property suite", 120.0, criterion_solver},
    {"characteristics", 0.0, criterion_characteristics},
    {"flux classification", 0.0, criterion_flux},
    {"scaling invariance", 0.0, criterion_scaling},
};

}  // namespace

CriterionResult run_criterion(int id) {
  if (id < 1 || id > 9) throw std::out_of_range("criterion id must be 1..9");
  const Spec& s = kCriteria[id - 1];
  CriterionResult r;
  r.id = id;
  r.name = s.name;
  r.time_limit = s.time_limit;
  Checks c;
  const auto t0 = std::chrono::steady_clock::now();
  try {
    s.body(c);
  } catch (const std::exception& e) {
    c.add(false, "completed without error", e.what());
  }
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (s.time_limit > 0.0) c.le("runtime seconds", r.seconds, s.time_limit);
  r.passed = c.all;
  r.details = std::move(c.lines);
  return r;
}

std::vector<CriterionResult> run_acceptance(const std::vector<int>& ids) {
  std::vector<CriterionResult> out;
  if (ids.empty()) {
    for (int i = 1; i <= 9; ++i) out.push_back(run_criterion(i));
  } else {
    for (int i : ids) out.push_back(run_criterion(i));
  }
  return out;
}

std::string format_result(const CriterionResult& r, bool verbose) {
  std::ostringstream os;
  os << (r.passed ? "PASS" : "FAIL") << " criterion " << r.id << " (" << r.name << ") " << num(r.seconds) << " s";
  if (verbose)
    for (const auto& l : r.details) os << "\n    " << l;
  return os.str();
}

}  // namespace conslaw
