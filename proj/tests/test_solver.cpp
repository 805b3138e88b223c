#include <doctest.h>

#include <cmath>
#include <random>

#include "conslaw/flux.hpp"
#include "conslaw/initial_conditions.hpp"
#include "conslaw/solver.hpp"

using namespace conslaw;

TEST_CASE("constant and zero data") {
  const auto f = make_flux("burgers");
  const Grid g = Grid::make_1d(128, -1.0, 1.0);
  const auto c = ScalarField::filled(g, 0.4);
  const auto s = step(c, f, 0.005);
  for (std::size_t k = 0; k < g.size(); ++k) CHECK(s[k] == doctest::Approx(0.4).epsilon(1e-15));
  const auto traj = solve(ScalarField::filled(g, 0.0), f, 0.5, {0.25});
  for (const auto& fr : traj.frames) CHECK(fr.max() == 0.0);
}

TEST_CASE("cfl_dt") {
  const auto f = make_flux("burgers");
  const Grid g = Grid::make_1d(100, 0.0, 1.0);
  const auto u = ScalarField::sample(g, [](const Point& p) { return p[0]; });
  const auto u_ends = u.with_values([&] {
    std::vector<double> v(u.values().begin(), u.values().end());
    v.front() = 0.0;
    v.back() = 1.0;
    return v;
  }());
  CHECK(cfl_dt(u_ends, f, 0.45) == doctest::Approx(0.0045));
  const auto doubled = ScalarField::sample(g, [](const Point& p) { return 2.0 * p[0]; }).with_values([&] {
    std::vector<double> v(g.size());
    for (std::size_t k = 0; k < v.size(); ++k) v[k] = 2.0 * u_ends[k];
    return v;
  }());
  CHECK(cfl_dt(doubled, f, 0.45) == doctest::Approx(0.00225));

  const auto f2 = make_flux("generalized_burgers:2");
  const Grid g2 = Grid::make_2d(10, 0.0, 1.0, 20, 0.0, 1.0);
  const auto c2 = ScalarField::filled(g2, 0.5);
  // Speeds 0.5 and 0.25 on spacings 0.1 and 0.05.
  CHECK(cfl_dt(c2, f2, 0.45) == doctest::Approx(0.45 * std::min(0.1 / 0.5, 0.05 / 0.25)));
}

TEST_CASE("riemann_exact") {
  const auto f = make_flux("burgers");
  CHECK(riemann_exact(f, 1.0, 0.0, 0.3) == 1.0);
  CHECK(riemann_exact(f, 1.0, 0.0, 0.6) == 0.0);
  CHECK(riemann_exact(f, 0.0, 1.0, 0.5) == doctest::Approx(0.5));
  CHECK(riemann_exact(f, 0.3, 0.3, -5.0) == 0.3);
}

TEST_CASE("shock speed after 100 steps") {
  const auto f = make_flux("burgers");
  const Grid g = Grid::make_1d(400, -1.0, 1.0);
  InitialCondition ic{"riemann", {{"uL", 1.0}, {"uR", 0.0}}, 0};
  const auto u0 = make_initial_condition(ic, g);
  SolverConfig cfg;
  cfg.fixed_dt = 0.45 * g.spacing[0];
  auto u = u0;
  for (int n = 0; n < 100; ++n) u = step(u, f, *cfg.fixed_dt, cfg);
  const double t = 100 * *cfg.fixed_dt;
  // Shock position from the mass to the right of x = 0.
  double mass = 0.0;
  for (std::size_t k = g.size() / 2; k < g.size(); ++k) mass += u[k] * g.spacing[0];
  CHECK(std::abs(mass - 0.5 * t) <= g.spacing[0]);
}

TEST_CASE("rarefaction converges to the exact fan") {
  const auto f = make_flux("burgers");
  double err[2];
  for (int i = 0; i < 2; ++i) {
    const Grid g = Grid::make_1d(i ? 1024 : 512, -1.0, 2.0);
    const auto u0 = make_initial_condition({"riemann", {{"uL", 0.0}, {"uR", 1.0}}, 0}, g);
    const auto traj = solve(u0, f, 1.0, {});
    double e = 0.0;
    for (std::size_t k = 0; k < g.size(); ++k)
      e += std::abs(traj.frames.back()[k] - riemann_exact(f, 0.0, 1.0, g.center(0, k))) * g.spacing[0];
    err[i] = e;
    CHECK(e <= 10.0 * g.spacing[0]);
  }
  CHECK(err[1] < 0.75 * err[0]);
}

TEST_CASE("comparison principle on ordered random pairs") {
  const auto f = make_flux("burgers");
  const Grid g = Grid::make_1d(128, -1.0, 1.0);
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const auto u0 = make_initial_condition({"random_pc", {{"vmin", -1.0}, {"vmax", 0.5}}, seed}, g);
    std::mt19937_64 rng(seed + 100);
    std::vector<double> v(g.size());
    for (std::size_t k = 0; k < v.size(); ++k) v[k] = u0[k] + 0.5 * unit_uniform(rng());
    const ScalarField v0(g, v);
    SolverConfig same;
    same.fixed_dt = 0.4 * g.spacing[0];
    const auto a = solve(u0, f, 0.5, {}, same);
    const auto b = solve(v0, f, 0.5, {}, same);
    for (std::size_t n = 0; n < a.frames.size(); ++n)
      for (std::size_t k = 0; k < g.size(); ++k) CHECK(a.frames[n][k] <= b.frames[n][k] + 1e-15);
  }
}

TEST_CASE("exact decay solution") {
  CHECK(exact_decay_solution(1, 3.0, 0.25) == doctest::Approx(0.0625));
  double mx = 0.0;
  for (int i = 0; i <= 4000; ++i) mx = std::max(mx, exact_decay_solution(1, 3.0, 3.0 * i / 4000.0));
  CHECK(mx == doctest::Approx(0.5).epsilon(1e-3));
  CHECK(exact_decay_solution(1, 0.0, 1.0 + 1e-9) == 0.0);
}

TEST_CASE("space-time round trip") {
  const auto f = make_flux("burgers");
  const Grid g = Grid::make_1d(64, -1.0, 1.0);
  SolverConfig cfg;
  cfg.uniform_dt = true;
  cfg.record_every_step = true;
  const auto traj = solve(make_initial_condition({"riemann", {}, 0}, g), f, 0.5, {}, cfg);
  const auto st = to_spacetime(traj);
  CHECK(st.grid().rank() == 2);
  const auto back = from_spacetime(st, "burgers", cfg);
  REQUIRE(back.frames.size() == traj.frames.size());
  for (std::size_t k = 0; k < g.size(); ++k) CHECK(back.frames.back()[k] == traj.frames.back()[k]);
}
