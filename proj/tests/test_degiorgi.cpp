#include <doctest.h>

#include <cmath>

#include "conslaw/degiorgi.hpp"
#include "conslaw/errors.hpp"
#include "conslaw/flux.hpp"
#include "conslaw/initial_conditions.hpp"
#include "conslaw/solver.hpp"
#include "conslaw/structure.hpp"

using namespace conslaw;

TEST_CASE("truncation ladder of constants") {
  const Grid g = Grid::make_1d(200, -2.5, 2.5);
  const BallFrame fr{{0.0}, 1.0};
  const auto zero = truncation_ladder(ScalarField::filled(g, 0.0), 1.0, 10, fr);
  for (double a : zero.A) CHECK(a == 0.0);

  const double U = 3.0;
  const auto half = truncation_ladder(ScalarField::filled(g, U / 2), U, 10, fr);
  CHECK(half.levels[1] == doctest::Approx(U / 2));
  // |B_2| in 1D is 4, up to one cell at each end.
  CHECK(std::abs(half.A[0] - U / 2 * 4.0) <= U / 2 * 2 * g.spacing[0] + 1e-12);
  for (std::size_t k = 1; k < half.A.size(); ++k) CHECK(half.A[k] == 0.0);

  CHECK_THROWS_AS(truncation_ladder(ScalarField::filled(g, 0.0), 0.0, 10, fr), InputError);
  CHECK_THROWS_AS(truncation_ladder(ScalarField::filled(g, -1.0), 1.0, 10, fr), InputError);
  CHECK_THROWS_AS(truncation_ladder(ScalarField::filled(g, 0.0), 1.0, 10, BallFrame{{0.0}, 2.0}), GeometryError);
}

TEST_CASE("ladder on a numerical rarefaction") {
  const auto f = make_flux("burgers");
  const Grid g = Grid::make_1d(1024, -1.0, 3.0);
  const auto traj = solve(make_initial_condition({"rarefaction", {}, 0}, g), f, 2.0, {});
  const auto& u = traj.frames.back();
  const BallFrame fr = inscribed_frame(g);
  const auto lad = truncation_ladder(u, 2.0 * u.max(), 25, fr);
  for (std::size_t k = 1; k < lad.A.size(); ++k) CHECK(lad.A[k] <= lad.A[k - 1]);
  CHECK(lad.A.back() <= grid_floor(traj.frames.front()));
  // With U = 2 max u every level from l_1 on sits at or above max u.
  CHECK(lad.A[1] == 0.0);
}

TEST_CASE("oscillation bound fits") {
  const Grid g = Grid::make_1d(256, -2.5, 2.5);
  std::vector<ScalarField> consts;
  for (double c : {0.1, 0.5, 1.0}) consts.push_back(ScalarField::filled(g, c));
  const auto fc = oscillation_bound_check(consts, default_gamma_grid());
  CHECK(fc.best_gamma == doctest::Approx(1.0));

  std::vector<ScalarField> bumps;
  for (double eps : {0.1, 0.3, 1.0}) {
    bumps.push_back(ScalarField::sample(g, [eps](const Point& p) { return eps * std::max(0.0, 1.0 - std::abs(p[0])); }));
  }
  const auto fb = oscillation_bound_check(bumps, default_gamma_grid());
  CHECK(fb.best_gamma <= 1.0);
  CHECK(fb.best_gamma > 0.0);
  // Homogeneity: linf / l1 is the same for every member.
  for (std::size_t i = 1; i < fb.norms.size(); ++i)
    CHECK(fb.norms[i].linf / fb.norms[i].l1 == doctest::Approx(fb.norms[0].linf / fb.norms[0].l1));
  CHECK_THROWS_AS(oscillation_bound_check(bumps, {0.0}), InputError);
}

TEST_CASE("sup and inf convolutions") {
  const Grid g = Grid::make_1d(400, -1.0, 1.0);
  const double eps = 0.1;
  const auto c = sup_inf_convolution(ScalarField::filled(g, 0.3), eps);
  CHECK(c.upper.max() == 0.3);
  CHECK(c.lower.min() == 0.3);

  const auto step = ScalarField::sample(g, [](const Point& p) { return p[0] < 0.0 ? 1.0 : 0.0; });
  const auto cs = sup_inf_convolution(step, eps);
  double gap = 0.0;
  for (std::size_t k = 0; k < g.size(); ++k) gap += (cs.upper[k] - cs.lower[k]) * g.spacing[0];
  CHECK(std::abs(gap - 2.0 * eps) <= 2.0 * g.spacing[0]);

  const auto lip = ScalarField::sample(g, [](const Point& p) { return std::sin(3.0 * p[0]); });
  const auto cl = sup_inf_convolution(lip, eps);
  double l1 = 0.0;
  for (std::size_t k = 0; k < g.size(); ++k) l1 += (cl.upper[k] - cl.lower[k]) * g.spacing[0];
  CHECK(l1 <= 2.0 * 3.0 * eps * 2.0);
}

TEST_CASE("convolutions bracket the field and dilations are open") {
  const Grid g = Grid::make_2d(48, -1.0, 1.0, 48, -1.0, 1.0);
  const auto u = ScalarField::sample(g, [](const Point& p) { return std::sin(4.0 * p[0]) * std::cos(3.0 * p[1]) + (p[0] > 0.2); });
  const double eps = 0.1;
  const auto c = sup_inf_convolution(u, eps);
  for (std::size_t k = 0; k < u.size(); ++k) {
    CHECK(c.lower[k] <= u[k]);
    CHECK(u[k] <= c.upper[k]);
  }
  // Opening of a dilation returns the dilation; closing of an erosion returns the erosion.
  const auto opened = sup_inf_convolution(sup_inf_convolution(c.upper, eps).lower, eps).upper;
  const auto closed = sup_inf_convolution(sup_inf_convolution(c.lower, eps).upper, eps).lower;
  for (std::size_t k = 0; k < u.size(); ++k) {
    CHECK(opened[k] == c.upper[k]);
    CHECK(closed[k] == c.lower[k]);
  }
}

TEST_CASE("De Giorgi exponents") {
  const auto a = degiorgi_exponents(0.2, 2);
  CHECK(a.inv_p_prime == doctest::Approx(0.475));
  CHECK(a.delta == doctest::Approx(0.075));
  const auto b = degiorgi_exponents(0.5, 1);
  CHECK(b.inv_p_prime == doctest::Approx(0.625));
  CHECK(b.delta == doctest::Approx(0.375));
  // delta = 3 theta / (4 d) shrinks to 0 with theta.
  const auto c = degiorgi_exponents(1e-6, 3);
  CHECK(c.delta > 0.0);
  CHECK(c.delta == doctest::Approx(3e-6 / 12.0));
  CHECK_THROWS_AS(degiorgi_exponents(0.0, 1), InputError);
}
