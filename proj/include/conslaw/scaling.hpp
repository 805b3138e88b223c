#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "conslaw/flux.hpp"
#include "conslaw/grid.hpp"

namespace conslaw {

/// Linear map S_lambda with S a^(j_i)(0) = lambda^{j_i} a^(j_i)(0).
struct ScalingMap {
  /// Derivative orders chosen greedily (lexicographically smallest) in the
  /// full component space; for time-augmented fluxes the leading 0 belongs
  /// to the time direction.
  std::vector<int> full_indexes;
  /// Spatial indexes (j_1, ..., j_d).
  std::vector<int> indexes;
  double lambda = 1.0;
  std::size_t dim = 0;
  /// Row-major dim x dim.
  std::vector<double> matrix;
  double det = 1.0;
  int q = 0;
  /// Rank test holds for |v| < v0; infinity when it holds on the whole scan.
  double v0 = 0.0;

  double entry(std::size_t i, std::size_t j) const { return matrix[i * dim + j]; }
  bool diagonal(double tol = 1e-12) const;
};

/// Greedy index selection from {a^(j)(0)}, j = 0..m_max. Throws ConstructionError
/// when they do not span.
std::vector<int> scaling_indexes(const FluxSpec& flux);

/// Dyadic scan lambda_k = 2^-k * max|I|; the largest lambda_k at which
/// {a^(j_i)(v)} stays independent on [-lambda_k, lambda_k]. Infinity when
/// the first scan step already passes.
double scaling_v0(const FluxSpec& flux);

ScalingMap build_scaling(const FluxSpec& flux, double lambda);

/// u_{r,lambda}(x) = lambda^-1 u(r S x), sampled on the pullback grid of the
/// field (requires a diagonal map). A field whose rank is one less than the
/// map's dimension is treated as a spatial snapshot of a time-augmented law
/// and gets time t / r.
ScalarField apply_scaling(const ScalarField& field, double r, const ScalingMap& map);

/// Same, sampled on an explicit target grid.
ScalarField apply_scaling(const ScalarField& field, double r, const ScalingMap& map, const Grid& target);

/// The transformed flux a~(v) = S^-1 a(lambda v) of the map.
FluxSpec scaled_flux(const FluxSpec& flux, const ScalingMap& map);

/// gamma_0 = 1 / (1 + q). Time-augmented fluxes only.
double gamma_zero(const FluxSpec& flux);

}  // namespace conslaw
