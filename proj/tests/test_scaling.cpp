#include <doctest.h>

#include <cmath>

#include "conslaw/flux.hpp"
#include "conslaw/scaling.hpp"

using namespace conslaw;

TEST_CASE("scaling maps") {
  const double lambda = 0.3;
  const auto gb = build_scaling(make_flux("generalized_burgers:2"), lambda);
  CHECK(gb.indexes == std::vector<int>{1, 2});
  CHECK(gb.det == doctest::Approx(std::pow(lambda, 3)));
  CHECK(gb.entry(1, 1) == doctest::Approx(lambda));
  CHECK(gb.entry(2, 2) == doctest::Approx(lambda * lambda));

  const auto b = build_scaling(make_flux("burgers"), lambda);
  CHECK(b.indexes == std::vector<int>{1});
  CHECK(b.det == doctest::Approx(lambda));

  const auto id = build_scaling(make_flux("generalized_burgers:2"), 1.0);
  CHECK(id.det == doctest::Approx(1.0));
  for (std::size_t i = 0; i < id.dim; ++i)
    for (std::size_t j = 0; j < id.dim; ++j) CHECK(id.entry(i, j) == doctest::Approx(i == j ? 1.0 : 0.0));
}

TEST_CASE("apply_scaling") {
  const auto map = build_scaling(make_flux("burgers"), 0.5);
  const Grid g = Grid::make_2d(16, 1.0, 2.0, 32, -1.0, 3.0);
  const auto c = ScalarField::filled(g, 0.7);
  const auto sc = apply_scaling(c, 0.8, map);
  CHECK(sc.min() == doctest::Approx(1.4));
  CHECK(sc.max() == doctest::Approx(1.4));

  // u = x / t is a fixed point of u -> lambda^-1 u(t, lambda x).
  const auto rare = ScalarField::sample(g, [](const Point& p) { return p[1] / p[0]; });
  const auto fixed = apply_scaling(rare, 1.0, map);
  double worst = 0.0;
  for (std::size_t k = 0; k < fixed.size(); ++k) {
    const auto p = fixed.grid().center_of(k);
    worst = std::max(worst, std::abs(fixed[k] - p[1] / p[0]));
  }
  CHECK(worst < 1e-12);

  const auto same = apply_scaling(rare, 1.0, build_scaling(make_flux("burgers"), 1.0));
  for (std::size_t k = 0; k < rare.size(); ++k) CHECK(same[k] == doctest::Approx(rare[k]));
}

TEST_CASE("gamma_zero") {
  CHECK(gamma_zero(make_flux("burgers")) == 0.5);
  CHECK(gamma_zero(make_flux("generalized_burgers:2")) == 0.25);
  // Lower bound (1 + d(2m - d + 1)/2)^-1 with Hormander order m.
  for (int d = 1; d <= 3; ++d) {
    const auto f = make_flux("generalized_burgers:" + std::to_string(d));
    const int m = hormander_order(f);
    CHECK(gamma_zero(f) >= 1.0 / (1.0 + d * (2.0 * m - d + 1.0) / 2.0) - 1e-15);
  }
  for (int m = 1; m <= 3; ++m) {
    const auto f = make_flux("power:" + std::to_string(m));
    CHECK(gamma_zero(f) >= 1.0 / (1.0 + (2.0 * m) / 2.0) - 1e-15);
  }
}
