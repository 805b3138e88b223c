#include <doctest.h>

#include <cmath>

#include "conslaw/entropy.hpp"
#include "conslaw/flux.hpp"
#include "conslaw/initial_conditions.hpp"
#include "conslaw/kinetic.hpp"
#include "conslaw/solver.hpp"

using namespace conslaw;

namespace {

SolverConfig every_step() {
  SolverConfig c;
  c.uniform_dt = true;
  c.record_every_step = true;
  return c;
}

}  // namespace

TEST_CASE("kinetic function") {
  const Grid g = Grid::make_1d(4, 0.0, 1.0);
  const auto zero = kinetic_function(ScalarField::filled(g, 0.0), {-0.5, 0.5});
  for (auto v : zero.values) CHECK(v == 0);
  const auto one = kinetic_function(ScalarField::filled(g, 1.0), {0.25, 0.75, 1.25});
  CHECK(one.at(2, 0) == 1);
  CHECK(one.at(2, 1) == 1);
  CHECK(one.at(2, 2) == 0);
  const auto neg = kinetic_function(ScalarField::filled(g, -0.5), {-0.25});
  CHECK(neg.at(0, 0) == -1);
}

TEST_CASE("dissipation of constant and shock data") {
  const auto f = make_flux("burgers");
  const Grid g = Grid::make_1d(256, -1.0, 1.0);
  const auto flat = solve(ScalarField::filled(g, 0.3), f, 0.5, {}, every_step());
  const auto mu0 = entropy_dissipation(flat, f, default_levels(0.0, 1.0));
  CHECK(mu0.total == 0.0);
  CHECK(mu0.entries.empty());

  const Grid gs = Grid::make_1d(2048, -1.0, 1.0);
  const auto shock = solve(make_initial_condition({"riemann", {}, 0}, gs), f, 1.0, {}, every_step());
  const auto mu = entropy_dissipation(shock, f, default_levels(0.0, 1.0));
  // Exact kinetic mass of the unit shock: int_0^1 v(1 - v)/2 dv.
  CHECK(std::abs(mu.total * 12.0 - 1.0) <= 0.1);
  double marg = 0.0;
  for (double m : mu.level_marginal()) marg += m;
  CHECK(marg == doctest::Approx(mu.total));
}

TEST_CASE("measure bounds") {
  const auto f = make_flux("burgers");
  const Grid g = Grid::make_1d(512, -2.0, 2.0);
  const auto zero = solve(ScalarField::filled(g, 0.0), f, 1.0, {}, every_step());
  const auto mz = entropy_dissipation(zero, f, default_levels(0.0, 1.0));
  const auto rz = measure_bounds_check(mz, to_spacetime(zero), f, 0.5, {0.5, 0.0}, 0.3, 0.2, 0.2);
  CHECK(rz.mu1_lhs == 0.0);
  CHECK(rz.mu1_rhs == 0.0);
  CHECK(rz.mu0_lhs == 0.0);
  CHECK(rz.mu0_rhs == 0.0);

  const auto shock = solve(make_initial_condition({"riemann", {}, 0}, g), f, 1.0, {}, every_step());
  const auto ms = entropy_dissipation(shock, f, default_levels(0.0, 1.0));
  const auto st = to_spacetime(shock);
  double prev_lhs = -1.0, prev_rhs = -1.0;
  for (double r : {0.4, 0.2, 0.1}) {
    const auto rep = measure_bounds_check(ms, st, f, 0.5, {0.5, 0.25}, 0.2, 0.3, r);
    CHECK(rep.mu1_ok);
    CHECK(rep.mu0_ok);
    if (prev_rhs > 0.0) {
      CHECK(rep.mu0_rhs == doctest::Approx(prev_rhs / 2.0));
      CHECK(rep.mu0_lhs <= prev_lhs + 1e-15);
    }
    prev_lhs = rep.mu0_lhs;
    prev_rhs = rep.mu0_rhs;
  }
}

TEST_CASE("entropy residuals of the scheme") {
  const auto f = make_flux("burgers");
  const auto traj = solve(make_initial_condition({"composite", {}, 0}, Grid::make_1d(256, -1.0, 3.0)), f, 1.0, {},
                          every_step());
  const auto rep = entropy_residual_check(traj, f, uniform_levels(0.0, 1.0, 16), EntropyKind::kruzhkov);
  CHECK(rep.passed);
  CHECK(rep.max_residual <= rep.tol);
}
