#include <doctest.h>

#include <cmath>

#include "conslaw/decay.hpp"
#include "conslaw/errors.hpp"
#include "conslaw/flux.hpp"
#include "conslaw/initial_conditions.hpp"

using namespace conslaw;

TEST_CASE("exponent fit of analytic series") {
  DecaySeries s;
  s.time_origin = -1.0;
  for (double t : decay_sample_times(4.0, 64.0, 17, -1.0)) {
    s.times.push_back(t);
    s.sup_norms.push_back(std::pow(t + 1.0, -0.5));
  }
  CHECK(fit_decay_exponent(s, 4.0).gamma_hat == doctest::Approx(0.5).epsilon(1e-9));

  DecaySeries flat;
  for (int i = 0; i < 8; ++i) {
    flat.times.push_back(1.0 + i);
    flat.sup_norms.push_back(0.7);
  }
  CHECK(std::abs(fit_decay_exponent(flat, 1.0).gamma_hat) < 1e-12);
  flat.times.resize(3);
  flat.sup_norms.resize(3);
  CHECK_THROWS_AS(fit_decay_exponent(flat, 1.0), InputError);
}

TEST_CASE("sample times include the dyadic checkpoints") {
  const auto t = decay_sample_times(0.0, 15.0, 33, -1.0);
  for (double want : {1.0, 3.0, 7.0, 15.0}) {
    bool found = false;
    for (double x : t) found = found || std::abs(x - want) < 1e-9;
    CHECK(found);
  }
}

TEST_CASE("decay of zero data and of the decay example") {
  const auto f = make_flux("burgers");
  const double half = decay_box_half_width(0.5, 1.0, 15.0);
  const Grid g = Grid::make_1d(2048, 0.5 - half, 0.5 + half);
  const auto zero = decay_experiment(f, ScalarField::filled(g, 0.0), 15.0, 9, -1.0);
  for (double v : zero.sup_norms) CHECK(v == 0.0);

  const auto s = decay_experiment(f, make_initial_condition({"decay_example", {}, 0}, g), 15.0, 33, -1.0);
  const double gamma = fit_decay_exponent(s, 2.0, 15.0).gamma_hat;
  CHECK(gamma >= 0.45);
  CHECK(gamma <= 0.52);
}

TEST_CASE("power flux m = 2 decays like t^(-1/3)") {
  const auto f = make_flux("power:2");
  const double half = decay_box_half_width(0.5, 1.0, 30.0);
  const Grid g = Grid::make_1d(4096, 0.5 - half, 0.5 + half);
  const auto s = decay_experiment(f, make_initial_condition({"decay_example", {{"m", 2.0}}, 0}, g), 30.0, 33, -1.0);
  CHECK(std::abs(fit_decay_exponent(s, 2.0, 30.0).gamma_hat - 1.0 / 3.0) <= 0.05);
}

TEST_CASE("bootstrap map") {
  const auto a = bootstrap_gamma(0.5, 0.1, 1);
  REQUIRE(a.size() == 2);
  CHECK(a[1] == doctest::Approx(0.18));
  const auto b = bootstrap_gamma(0.5, 0.25, 3);
  CHECK(0.5 - b[1] == doctest::Approx(0.125));
  CHECK(0.5 - b[2] == doctest::Approx(0.03125));
  for (double g : bootstrap_gamma(0.5, 0.5, 4)) CHECK(g == 0.5);
  CHECK_THROWS_AS(bootstrap_gamma(0.5, 0.6, 2), InputError);
}

TEST_CASE("decay constant prediction homogeneity") {
  const auto f = make_flux("burgers");
  const double gamma = 0.4, t = 5.0;
  const double base = decay_constant_prediction(f, 1.0, 1.0, gamma, t);
  // L^inf exponent 1 - gamma (1 + d) = 0.2 for d = 1.
  CHECK(decay_constant_prediction(f, 1.0, 2.0, gamma, t) / base == doctest::Approx(std::pow(2.0, 0.2)));
  CHECK(decay_constant_prediction(f, 2.0, 1.0, gamma, t) / base == doctest::Approx(std::pow(2.0, gamma)));
  CHECK_THROWS_AS(decay_constant_prediction(f, 1.0, 1.0, 0.5, t), InputError);
  CHECK_THROWS_AS(decay_constant_prediction(make_flux("power:2"), 1.0, 1.0, 0.2, t), UnsupportedError);
}

TEST_CASE("decay example stays below the calibrated bound") {
  const auto f = make_flux("burgers");
  const double half = decay_box_half_width(0.5, 1.0, 8.0);
  const Grid g = Grid::make_1d(2048, 0.5 - half, 0.5 + half);
  const auto u0 = make_initial_condition({"decay_example", {}, 0}, g);
  const auto s = decay_experiment(f, u0, 8.0, 17, 0.0);
  for (std::size_t i = 0; i < s.times.size(); ++i) {
    if (s.times[i] < 0.5) continue;
    CHECK(s.sup_norms[i] <= decay_constant_prediction(f, s.l1_norm, s.linf_norm, 0.45, s.times[i]));
  }
}
