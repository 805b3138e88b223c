#include <doctest.h>

#include <cmath>

#include "conslaw/characteristics.hpp"
#include "conslaw/errors.hpp"
#include "conslaw/flux.hpp"
#include "conslaw/initial_conditions.hpp"
#include "conslaw/solver.hpp"
#include "conslaw/structure.hpp"

using namespace conslaw;

namespace {

std::vector<double> uniform_times(double t0, double t1, int k) {
  std::vector<double> t;
  for (int j = 0; j <= k; ++j) t.push_back(t0 + (t1 - t0) * j / k);
  return t;
}

}  // namespace

TEST_CASE("velocity hulls") {
  const auto b = velocity_hull(make_flux("burgers"), {0.0, 1.0});
  CHECK(b.dim == 1);
  CHECK(b.contains({0.5}));
  CHECK(b.contains({1.0}, 1e-12));
  CHECK_FALSE(b.contains({1.1}, 1e-6));
  CHECK(b.max_norm() == doctest::Approx(1.0));

  const auto gb = velocity_hull(make_flux("generalized_burgers:2"), {0.0, 1.0});
  CHECK(gb.dim == 2);
  CHECK(gb.contains({0.5, 0.3}, 1e-9));
  CHECK_FALSE(gb.contains({0.5, 0.2}, 1e-3));
  CHECK_FALSE(gb.contains({0.5, 0.55}, 1e-3));

  const auto pt = velocity_hull(make_flux("burgers"), {0.4, 0.4});
  CHECK(pt.contains({0.4}, 1e-12));
  CHECK_FALSE(pt.contains({0.41}, 1e-6));

  CHECK_THROWS_AS(velocity_hull(make_flux("burgers"), {0.0, 2.0}), InputError);
  CHECK_THROWS_AS(velocity_hull(make_flux("generalized_burgers:3"), {0.0, 1.0}), UnsupportedError);
}

TEST_CASE("cone maximum principle") {
  const auto f = make_flux("burgers");
  const Grid g = Grid::make_1d(512, -1.0, 2.0);
  const auto flat = solve(ScalarField::filled(g, 0.3), f, 1.0, {0.5});
  const auto rc = cone_max_principle_check(flat, f, {0.5}, 1.0, 0.5);
  CHECK(rc.upper_diff == 0.0);
  CHECK(rc.lower_diff == 0.0);
  CHECK(rc.passed);

  const auto shock = solve(make_initial_condition({"riemann", {}, 0}, g), f, 1.0, {0.5});
  for (double x : {0.3, 0.55, 0.9}) CHECK(cone_max_principle_check(shock, f, {x}, 1.0, 0.5).passed);

  const Grid gr = Grid::make_1d(512, -1.0, 3.0);
  const auto rare = solve(make_initial_condition({"rarefaction", {}, 0}, gr), f, 2.0, {1.5});
  for (double x : {0.5, 1.0, 1.5}) CHECK(cone_max_principle_check(rare, f, {x}, 2.0, 0.5).passed);
  CHECK_THROWS_AS(cone_max_principle_check(rare, f, {1.0}, 2.0, 0.3), InputError);
}

TEST_CASE("backward characteristics") {
  const auto f = make_flux("burgers");
  const int k = 32;
  const Grid g = Grid::make_1d(512, -1.0, 3.0);
  const auto rare = solve(make_initial_condition({"rarefaction", {}, 0}, g), f, 2.0, uniform_times(1.0, 2.0, k));
  const auto poly = backward_characteristic(rare, f, {1.0}, 0.5, k);
  const double h = g.spacing[0];
  CHECK(std::abs(poly.points.front()[0] - 0.5) <= 1.0 / k + 3.0 * h);
  CHECK(poly.chord_deviation() <= 1.0 / k + 3.0 * h);

  const auto flat = solve(ScalarField::filled(g, 0.3), f, 1.0, uniform_times(0.0, 1.0, k));
  const auto pf = backward_characteristic(flat, f, {1.0}, 0.3, k);
  for (std::size_t j = 0; j < pf.times.size(); ++j)
    CHECK(pf.points[j][0] == doctest::Approx(1.0 - 0.3 * (1.0 - pf.times[j])).epsilon(1e-9));

  const Grid gs = Grid::make_1d(512, -1.0, 1.0);
  const auto still = solve(make_initial_condition({"riemann", {{"uL", 1.0}, {"uR", -1.0}}, 0}, gs), f, 1.0,
                           uniform_times(0.0, 1.0, k));
  const auto ps = backward_characteristic(still, f, {0.0}, 0.0, k);
  for (const auto& p : ps.points) CHECK(std::abs(p[0]) <= gs.spacing[0] + 1e-12);

  CHECK_THROWS_AS(backward_characteristic(rare, f, {1.0}, 0.9, k), PreconditionError);
}

TEST_CASE("line constancy") {
  const Grid g = Grid::make_2d(128, 0.0, 1.0, 128, -1.0, 1.0);
  const auto f = make_flux("burgers");
  const auto c = ScalarField::filled(g, 0.2);
  CHECK(line_constancy_check(c, {0.5, 0.0}, f).deviation <= 1e-15);

  const auto transport = polynomial_flux("transport", {{1.0}, {0.5}}, {-1.0, 1.0}, true);
  const auto wave = ScalarField::sample(g, [](const Point& p) { return 0.5 + 0.3 * std::sin(2.0 * (p[1] - 0.5 * p[0])); });
  CHECK(line_constancy_check(wave, {0.5, 0.1}, transport).deviation <= 1e-3);

  const Grid gr = Grid::make_2d(128, 1.0, 2.0, 256, -1.0, 3.0);
  const auto fan = ScalarField::sample(gr, [](const Point& p) { return std::clamp(p[1] / p[0], 0.0, 1.0); });
  CHECK(line_constancy_check(fan, {1.5, 0.6}, f).deviation <= 2.0 * gr.max_spacing());
}
