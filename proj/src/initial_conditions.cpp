#include "conslaw/initial_conditions.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <set>

#include "conslaw/errors.hpp"

namespace conslaw {

namespace {

const std::map<std::string, std::set<std::string>>& allowed_params() {
  static const std::map<std::string, std::set<std::string>> table = {
      {"decay_example", {"m"}},
      {"riemann", {"uL", "uR", "x0"}},
      {"rarefaction", {"uL", "uR", "t0"}},
      {"box", {"height", "lo", "hi"}},
      {"bump", {"height", "c", "w"}},
      {"random_pc", {"pieces", "vmin", "vmax", "lo", "hi"}},
      {"mirror", {"w"}},
      {"composite", {}},
  };
  return table;
}

}  // namespace

double InitialCondition::param(const std::string& name, double fallback) const {
  auto it = params.find(name);
  return it == params.end() ? fallback : it->second;
}

std::vector<std::string> initial_condition_catalogue() {
  std::vector<std::string> out;
  for (const auto& [k, v] : allowed_params()) out.push_back(k);
  return out;
}

double unit_uniform(std::uint64_t bits) { return static_cast<double>(bits >> 11) * 0x1.0p-53; }

ScalarField make_initial_condition(const InitialCondition& ic, const Grid& grid) {
  grid.validate();
  auto it = allowed_params().find(ic.key);
  if (it == allowed_params().end()) throw InputError("unknown initial condition '" + ic.key + "'");
  for (const auto& [k, v] : ic.params) {
    if (!it->second.count(k)) throw InputError("initial condition '" + ic.key + "' has no parameter '" + k + "'");
    if (!std::isfinite(v)) throw InputError("parameter '" + k + "' must be finite");
  }
  const std::string& key = ic.key;
  double time = 0.0;

  if (key == "decay_example") {
    const double m = ic.param("m", 1.0);
    if (!(m >= 1.0)) throw InputError("decay_example needs m >= 1");
    return ScalarField::sample(grid, [m](const Point& p) {
      const double x = p[0];
      return (x >= 0.0 && x <= 1.0) ? std::pow(x, 1.0 / m) : 0.0;
    });
  }
  if (key == "riemann") {
    const double uL = ic.param("uL", 1.0), uR = ic.param("uR", 0.0), x0 = ic.param("x0", 0.0);
    return ScalarField::sample(grid, [=](const Point& p) { return p[0] < x0 ? uL : uR; });
  }
  if (key == "rarefaction") {
    const double uL = ic.param("uL", 0.0), uR = ic.param("uR", 1.0), t0 = ic.param("t0", 1.0);
    if (!(t0 > 0.0)) throw InputError("rarefaction needs t0 > 0");
    if (!(uR > uL)) throw InputError("rarefaction needs uR > uL");
    time = t0;
    return ScalarField::sample(grid, [=](const Point& p) { return std::clamp(p[0] / t0, uL, uR); }, time);
  }
  if (key == "box") {
    const double h = ic.param("height", 1.0), lo = ic.param("lo", 0.0), hi = ic.param("hi", 1.0);
    if (!(hi > lo)) throw InputError("box needs hi > lo");
    return ScalarField::sample(grid, [=](const Point& p) {
      for (double x : p)
        if (x < lo || x > hi) return 0.0;
      return h;
    });
  }
  if (key == "bump") {
    const double h = ic.param("height", 1.0), c = ic.param("c", 0.0), w = ic.param("w", 1.0);
    if (!(w > 0.0)) throw InputError("bump needs w > 0");
    return ScalarField::sample(grid, [=](const Point& p) {
      double r2 = 0.0;
      for (double x : p) r2 += (x - c) * (x - c);
      const double r = std::sqrt(r2);
      if (r >= w) return 0.0;
      const double cs = std::cos(0.5 * std::numbers::pi * r / w);
      return h * cs * cs;
    });
  }
  if (key == "random_pc") {
    const double pieces = ic.param("pieces", 8.0);
    const double vmin = ic.param("vmin", 0.0), vmax = ic.param("vmax", 1.0);
    const double lo = ic.param("lo", -1.0), hi = ic.param("hi", 1.0);
    if (!(pieces >= 1.0) || pieces != std::floor(pieces)) throw InputError("random_pc needs a positive integer piece count");
    if (!(vmax >= vmin) || !(hi > lo)) throw InputError("random_pc needs vmax >= vmin and hi > lo");
    const auto n = static_cast<std::size_t>(pieces);
    std::mt19937_64 rng(ic.seed);
    std::vector<double> vals(n);
    for (auto& v : vals) v = vmin + (vmax - vmin) * unit_uniform(rng());
    return ScalarField::sample(grid, [&](const Point& p) {
      const double s = (p[0] - lo) / (hi - lo);
      const auto i = static_cast<std::size_t>(std::clamp(std::floor(s * static_cast<double>(n)), 0.0,
                                                         static_cast<double>(n - 1)));
      return vals[i];
    });
  }
  if (key == "mirror") {
    const double w = ic.param("w", 1.0);
    if (!(w > 0.0)) throw InputError("mirror needs w > 0");
    return ScalarField::sample(grid, [w](const Point& p) { return std::abs(p[0]) <= w ? p[0] : 0.0; });
  }
  // composite
  return ScalarField::sample(grid, [](const Point& p) {
    const double x = p[0];
    if (x < 0.0) return 1.0;
    if (x < 1.0) return 0.0;
    return std::min(x - 1.0, 1.0);
  });
}

}  // namespace conslaw
