#include <doctest.h>

#include <cmath>
#include <numbers>

#include "conslaw/errors.hpp"
#include "conslaw/flux.hpp"

using namespace conslaw;

namespace {

FluxSpec linear_st() { return polynomial_flux("lin", {{1.0}, {0.0, 1.0}}, {-1.0, 1.0}, true); }
FluxSpec quad_st(Interval I) { return polynomial_flux("quad", {{1.0}, {0.0, 1.0}, {0.0, 0.0, 1.0}}, I, true); }
FluxSpec constant_st() { return polynomial_flux("const", {{1.0}, {0.0}}, {0.0, 1.0}, true, 3); }

}  // namespace

TEST_CASE("nonlinearity measure of simple fluxes") {
  const double xi1[] = {0.0, 1.0};
  CHECK(nonlinearity_measure(linear_st(), xi1, 0.1) == doctest::Approx(0.2).epsilon(1e-4));
  const double xi0[] = {1.0, 0.0};
  CHECK(nonlinearity_measure(linear_st(), xi0, 0.1) == 0.0);
  const double xi2[] = {0.0, 0.0, 1.0};
  CHECK(nonlinearity_measure(quad_st({0.0, 1.0}), xi2, 0.25) == doctest::Approx(0.5).epsilon(1e-4));
}

TEST_CASE("estimate_alpha") {
  const auto deltas = default_delta_grid();
  CHECK(std::abs(estimate_alpha(make_flux("burgers"), 128, deltas, 20001).alpha_hat - 1.0) <= 0.05);
  CHECK(std::abs(estimate_alpha(quad_st({-1.0, 1.0}), 128, deltas, 20001).alpha_hat - 0.5) <= 0.05);
  const auto degenerate = estimate_alpha(constant_st(), 64, deltas, 2001);
  CHECK(degenerate.sample_grid.degenerate);
}

TEST_CASE("hormander order") {
  CHECK(hormander_order(linear_st()) == 1);
  CHECK(hormander_order(quad_st({-1.0, 1.0})) == 2);
  const auto c = constant_st();
  CHECK(hormander_order(c) == c.m_max + 1);
  for (int m = 1; m <= 4; ++m) CHECK(hormander_order(make_flux("power:" + std::to_string(m))) == m);
}

TEST_CASE("nondegeneracy constant") {
  // Brute-force minimum of max(|xi . (1, v)|, |xi_1|) on a grid unrelated to the library's.
  double oracle = 1e9;
  for (int i = 0; i <= 600; ++i) {
    const double v = -1.0 + 2.0 * i / 600.0;
    for (int j = 0; j < 3000; ++j) {
      const double th = std::numbers::pi * j / 3000.0;
      oracle = std::min(oracle, std::max(std::abs(std::cos(th) + std::sin(th) * v), std::abs(std::sin(th))));
    }
  }
  CHECK(nondegeneracy_constant(make_flux("burgers")) == doctest::Approx(oracle).epsilon(0.01));
  CHECK(nondegeneracy_constant(constant_st(), 101, 400, 1) == doctest::Approx(0.0).epsilon(1e-12));
  const double trig = nondegeneracy_constant(make_flux("trig"), 201, 2000, 1);
  CHECK(trig >= 1.0 / std::sqrt(2.0) - 1e-3);
  CHECK(trig <= 1.0 + 1e-12);
}

TEST_CASE("sign decomposition") {
  auto identity = [](double v, int j) { return j == 0 ? v : (j == 1 ? 1.0 : 0.0); };
  auto parts = sign_decomposition(identity, {-1.0, 1.0}, 0.3, 1);
  REQUIRE(parts.size() == 3);
  CHECK(parts[0].tag == SignTag::neg);
  CHECK(parts[0].interval.hi == doctest::Approx(-0.3).epsilon(1e-3));
  CHECK(parts[1].tag == SignTag::small);
  CHECK(parts[2].tag == SignTag::pos);
  CHECK(parts[2].interval.lo == doctest::Approx(0.3).epsilon(1e-3));

  auto half_square = [](double v, int j) { return j == 0 ? 0.5 * v * v : (j == 1 ? v : (j == 2 ? 1.0 : 0.0)); };
  parts = sign_decomposition(half_square, {-1.0, 1.0}, 0.5, 2);
  REQUIRE(parts.size() == 3);
  CHECK(parts[1].interval.lo == doctest::Approx(-0.5).epsilon(1e-3));
  CHECK(parts[1].interval.hi == doctest::Approx(0.5).epsilon(1e-3));

  parts = sign_decomposition(identity, {0.5, 1.0}, 0.3, 1);
  REQUIRE(parts.size() == 1);
  CHECK(parts[0].tag == SignTag::pos);
}

TEST_CASE("flux catalogue errors") {
  CHECK_THROWS_AS(make_flux("nope"), InputError);
  CHECK_THROWS_AS(make_flux("power:0"), InputError);
  const auto f = make_flux("generalized_burgers:2");
  CHECK(f.dim == 3);
  CHECK(f.spatial_dim() == 2);
  CHECK(f.a(2, 0.5) == doctest::Approx(0.25));
}
