#include <doctest.h>

#include <cmath>
#include <numbers>

#include "conslaw/entropy.hpp"
#include "conslaw/errors.hpp"
#include "conslaw/flux.hpp"
#include "conslaw/initial_conditions.hpp"
#include "conslaw/kinetic.hpp"
#include "conslaw/solver.hpp"
#include "conslaw/structure.hpp"

using namespace conslaw;

namespace {

ScalarField step_field(std::size_t n) {
  return ScalarField::sample(Grid::make_1d(n, -1.0, 1.0), [](const Point& p) { return p[0] < 0.0 ? 1.0 : 0.0; });
}

}  // namespace

TEST_CASE("semicontinuous envelopes") {
  const auto s = step_field(64);
  const double h = s.grid().spacing[0];
  const auto env = semicontinuous_envelopes(s, {4 * h, 2 * h, h});
  CHECK(env.upper[32] == 1.0);
  CHECK(env.lower[32] == 0.0);
  CHECK(env.upper[31] == 1.0);
  CHECK(env.lower[31] == 0.0);
  CHECK(env.lower[10] == 1.0);

  const auto c = ScalarField::filled(s.grid(), 0.25);
  const auto ec = semicontinuous_envelopes(c, {2 * h, h});
  CHECK(ec.upper.max() == 0.25);
  CHECK(ec.lower.min() == 0.25);

  const auto lip = ScalarField::sample(s.grid(), [](const Point& p) { return 3.0 * p[0]; });
  const auto el = semicontinuous_envelopes(lip, {2 * h, h});
  for (std::size_t k = 0; k < lip.size(); ++k) CHECK(el.upper[k] - el.lower[k] <= 2.0 * 3.0 * h + 1e-12);

  CHECK_THROWS_AS(semicontinuous_envelopes(c, {h, 2 * h}), InputError);
  CHECK_THROWS_AS(semicontinuous_envelopes(c, {h / 2}), InputError);
}

TEST_CASE("jump set of a constant run is empty") {
  const auto f = make_flux("burgers");
  SolverConfig cfg;
  cfg.uniform_dt = cfg.record_every_step = true;
  const auto traj = solve(ScalarField::filled(Grid::make_1d(128, -1.0, 1.0), 0.5), f, 0.5, {}, cfg);
  const auto mu = entropy_dissipation(traj, f, default_levels(0.0, 1.0));
  for (double th : {1e-12, 0.01, 1.0}) CHECK(jump_set(mu, {1.0 / 64}, th).count() == 0);
}

TEST_CASE("oscillation modulus") {
  const Grid g = Grid::make_1d(512, -1.0, 1.0);
  const double h = g.spacing[0];
  const auto lip = ScalarField::sample(g, [](const Point& p) { return 2.0 * p[0]; });
  const std::vector<double> radii{32 * h, 16 * h, 8 * h, 4 * h, 2 * h, h};
  const auto ol = oscillation_modulus(lip, {0.1}, radii);
  for (std::size_t i = 0; i < radii.size(); ++i) CHECK(ol.osc[i] <= 2.0 * 2.0 * radii[i] + 1e-12);
  CHECK(ol.decreasing());

  const auto os = oscillation_modulus(step_field(512), {0.0}, radii);
  CHECK(os.osc.back() == 1.0);
  CHECK(os.vmo.back() > 0.1);

  CHECK_THROWS_AS(oscillation_modulus(lip, {0.99}, radii), GeometryError);
}

TEST_CASE("blowup trace") {
  const double angle = 30.0 * std::numbers::pi / 180.0;
  const Point n0{std::cos(angle), std::sin(angle)};
  const Grid g = Grid::make_2d(256, -1.0, 1.0, 256, -1.0, 1.0);
  const auto shock = ScalarField::sample(g, [&](const Point& p) { return p[0] * n0[0] + p[1] * n0[1] > 0.0 ? 1.0 : 0.0; });
  const double h = g.spacing[0];
  const auto fit = blowup_trace(shock, {0.0, 0.0}, {64 * h, 32 * h, 16 * h});
  CHECK(fit.single_shock);
  CHECK(std::acos(std::min(1.0, fit.normal[0] * n0[0] + fit.normal[1] * n0[1])) <= 2.0 * std::numbers::pi / 180.0);
  CHECK(fit.u_plus == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(fit.u_minus == doctest::Approx(0.0).epsilon(1e-6));
  CHECK(fit.residual.back() <= 0.05);

  const auto smooth = ScalarField::sample(g, [](const Point& p) { return 0.5 + 0.1 * p[0] * p[1]; });
  const auto sf = blowup_trace(smooth, {0.2, 0.1}, {32 * h, 16 * h});
  CHECK_FALSE(sf.single_shock);
  CHECK(sf.u_plus == doctest::Approx(0.502).epsilon(0.01));
  CHECK(sf.u_minus == doctest::Approx(0.502).epsilon(0.01));
}

TEST_CASE("blowup of a numerical Burgers shock") {
  const auto f = make_flux("burgers");
  const Grid g = Grid::make_1d(1024, -1.0, 2.0);
  const auto traj = solve(make_initial_condition({"riemann", {}, 0}, g), f, 1.0, {});
  const double h = g.spacing[0];
  const auto fit = blowup_trace(traj.frames.back(), {0.5}, {64 * h, 32 * h, 16 * h, 8 * h});
  for (std::size_t i = 0; i < fit.radii.size(); ++i) {
    CHECK(std::abs(fit.u_plus_by_radius[i] - 1.0) <= 0.05);
    CHECK(std::abs(fit.u_minus_by_radius[i]) <= 0.05);
  }
}

TEST_CASE("grid floor") {
  const auto s = step_field(64);
  CHECK(grid_floor(s) == doctest::Approx(s.grid().spacing[0] * 0.5));
  const auto ramp = ScalarField::sample(Grid::make_1d(100, 0.0, 1.0), [](const Point& p) { return 4.0 * p[0]; });
  CHECK(grid_floor(ramp) == doctest::Approx(0.01 * 4.0 * 0.01 / 0.01));
}
