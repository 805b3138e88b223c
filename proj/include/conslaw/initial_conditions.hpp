#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "conslaw/grid.hpp"

namespace conslaw {

/// Initial-condition catalogue. Keys and parameters (defaults in brackets):
///   decay_example  u = x^(1/m) on [0, 1], else 0           m [1]
///   riemann        uL for x < x0, uR after                  uL [1], uR [0], x0 [0]
///   rarefaction    clamp(x / t0, uL, uR) at time t0         uL [0], uR [1], t0 [1]
///   box            height on [lo, hi]^d                     height [1], lo [0], hi [1]
///   bump           height cos^2(pi |x - c| / (2 w)) on |x - c| < w   height [1], c [0], w [1]
///   random_pc      `pieces` constant pieces with values in [vmin, vmax] over [lo, hi]
///                  pieces [8], vmin [0], vmax [1], lo [-1], hi [1]
///   mirror         u = x on [-w, w] (N-wave data)           w [1]
///   composite      1 for x < 0, 0 on [0, 1), x - 1 on [1, 2), 1 after
/// Multi-dimensional grids use the first coordinate for one-dimensional
/// profiles, except box and bump, which are radial/product shaped.
struct InitialCondition {
  std::string key;
  std::map<std::string, double> params;
  std::uint64_t seed = 0;

  double param(const std::string& name, double fallback) const;
};

std::vector<std::string> initial_condition_catalogue();

/// Throws InputError for unknown keys or parameters.
ScalarField make_initial_condition(const InitialCondition& ic, const Grid& grid);

/// Deterministic uniform double in [0, 1) from a 64-bit Mersenne twister draw.
double unit_uniform(std::uint64_t bits);

}  // namespace conslaw
