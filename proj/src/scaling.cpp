#include "conslaw/scaling.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <limits>

#include "conslaw/errors.hpp"

namespace conslaw {

namespace {

std::size_t matrix_rank(const Eigen::MatrixXd& M) {
  if (M.cols() == 0) return 0;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(M);
  const auto& sv = svd.singularValues();
  if (sv.size() == 0 || sv(0) == 0.0) return 0;
  std::size_t r = 0;
  for (Eigen::Index k = 0; k < sv.size(); ++k)
    if (sv(k) > 1e-10 * sv(0)) ++r;
  return r;
}

Eigen::MatrixXd derivative_matrix(const FluxSpec& f, const std::vector<int>& idx, double v) {
  Eigen::MatrixXd M(f.dim, idx.size());
  for (std::size_t k = 0; k < idx.size(); ++k)
    for (std::size_t c = 0; c < f.dim; ++c) M(static_cast<Eigen::Index>(c), static_cast<Eigen::Index>(k)) = f.a(c, v, idx[k]);
  return M;
}

bool independent_on(const FluxSpec& f, const std::vector<int>& idx, double lam) {
  constexpr int kSamples = 64;
  for (int i = 0; i <= kSamples; ++i) {
    const double v = -lam + 2.0 * lam * i / kSamples;
    if (matrix_rank(derivative_matrix(f, idx, v)) < f.dim) return false;
  }
  return true;
}

}  // namespace

bool ScalingMap::diagonal(double tol) const {
  for (std::size_t i = 0; i < dim; ++i)
    for (std::size_t j = 0; j < dim; ++j)
      if (i != j && std::abs(entry(i, j)) > tol) return false;
  return true;
}

std::vector<int> scaling_indexes(const FluxSpec& flux) {
  std::vector<int> chosen;
  std::size_t rank = 0;
  for (int j = 0; j <= flux.m_max && rank < flux.dim; ++j) {
    auto trial = chosen;
    trial.push_back(j);
    const std::size_t r = matrix_rank(derivative_matrix(flux, trial, 0.0));
    if (r > rank) {
      chosen = std::move(trial);
      rank = r;
    }
  }
  if (rank < flux.dim)
    throw ConstructionError("derivatives of a at 0 do not span R^" + std::to_string(flux.dim) + " up to order " +
                            std::to_string(flux.m_max));
  return chosen;
}

double scaling_v0(const FluxSpec& flux) {
  const auto idx = scaling_indexes(flux);
  const double top = std::max(std::abs(flux.interval.lo), std::abs(flux.interval.hi));
  if (!(top > 0.0)) return 0.0;
  for (int k = 0; k <= 40; ++k) {
    const double lam = std::ldexp(top, -k);
    if (independent_on(flux, idx, lam)) return k == 0 ? std::numeric_limits<double>::infinity() : lam;
  }
  return 0.0;
}

ScalingMap build_scaling(const FluxSpec& flux, double lambda) {
  if (!(lambda > 0.0) || !std::isfinite(lambda)) throw InputError("lambda must be positive");
  ScalingMap m;
  m.dim = flux.dim;
  m.lambda = lambda;
  m.full_indexes = scaling_indexes(flux);
  m.v0 = scaling_v0(flux);
  if (!(lambda < m.v0)) throw RangeError("lambda must lie below v0 = " + std::to_string(m.v0));
  m.indexes = m.full_indexes;
  if (flux.time_augmented && !m.indexes.empty() && m.indexes.front() == 0) m.indexes.erase(m.indexes.begin());
  m.q = 0;
  for (int j : m.full_indexes) m.q += j;

  const Eigen::MatrixXd B = derivative_matrix(flux, m.full_indexes, 0.0);
  Eigen::VectorXd d(static_cast<Eigen::Index>(m.dim));
  for (std::size_t k = 0; k < m.dim; ++k) d(static_cast<Eigen::Index>(k)) = std::pow(lambda, m.full_indexes[k]);
  const Eigen::MatrixXd S = B * d.asDiagonal() * B.inverse();
  m.matrix.resize(m.dim * m.dim);
  for (std::size_t i = 0; i < m.dim; ++i)
    for (std::size_t j = 0; j < m.dim; ++j) {
      double v = S(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
      m.matrix[i * m.dim + j] = std::abs(v) < 1e-14 * std::max(1.0, S.cwiseAbs().maxCoeff()) ? 0.0 : v;
    }
  m.det = std::pow(lambda, m.q);
  return m;
}

namespace {

/// Block of the map acting on a field of the given rank.
std::vector<double> block_for(const ScalingMap& map, std::size_t rank, std::size_t& offset) {
  if (rank == map.dim) {
    offset = 0;
    return map.matrix;
  }
  if (rank + 1 == map.dim && map.full_indexes.front() == 0) {
    offset = 1;
    for (std::size_t j = 1; j < map.dim; ++j)
      if (std::abs(map.entry(0, j)) > 1e-12 || std::abs(map.entry(j, 0)) > 1e-12)
        throw UnsupportedError("scaling mixes time and space; pass a space-time field");
    std::vector<double> b(rank * rank);
    for (std::size_t i = 0; i < rank; ++i)
      for (std::size_t j = 0; j < rank; ++j) b[i * rank + j] = map.entry(i + 1, j + 1);
    return b;
  }
  throw InputError("field rank does not match the scaling map");
}

}  // namespace

ScalarField apply_scaling(const ScalarField& field, double r, const ScalingMap& map, const Grid& target) {
  if (!(r > 0.0)) throw InputError("r must be positive");
  std::size_t offset = 0;
  const std::size_t rank = field.grid().rank();
  const auto S = block_for(map, rank, offset);
  if (target.rank() != rank) throw InputError("target grid rank mismatch");
  std::vector<double> out(target.size());
  Point y(rank);
  for (std::size_t k = 0; k < out.size(); ++k) {
    const Point x = target.center_of(k);
    for (std::size_t i = 0; i < rank; ++i) {
      double s = 0.0;
      for (std::size_t j = 0; j < rank; ++j) s += S[i * rank + j] * x[j];
      y[i] = r * s;
    }
    if (!field.grid().contains(y, 1e-9 * field.grid().min_spacing()))
      throw GeometryError("scaled target grid leaves the field's domain");
    out[k] = field.interpolate(y) / map.lambda;
  }
  const double t = offset == 1 ? field.time() / r : field.time();
  return ScalarField(target, std::move(out), t);
}

ScalarField apply_scaling(const ScalarField& field, double r, const ScalingMap& map) {
  if (!(r > 0.0)) throw InputError("r must be positive");
  std::size_t offset = 0;
  const std::size_t rank = field.grid().rank();
  const auto S = block_for(map, rank, offset);
  for (std::size_t i = 0; i < rank; ++i)
    for (std::size_t j = 0; j < rank; ++j)
      if (i != j && S[i * rank + j] != 0.0)
        throw UnsupportedError("pullback grid needs a diagonal scaling map; pass a target grid");
  Grid target = field.grid();
  for (std::size_t a = 0; a < rank; ++a) {
    const double s = r * S[a * rank + a];
    target.origin[a] = field.grid().origin[a] / s;
    target.spacing[a] = field.grid().spacing[a] / s;
  }
  return apply_scaling(field, r, map, target);
}

FluxSpec scaled_flux(const FluxSpec& flux, const ScalingMap& map) {
  return transformed_flux(flux, map.matrix, map.lambda);
}

double gamma_zero(const FluxSpec& flux) {
  if (!flux.time_augmented) throw UnsupportedError("gamma_0 is defined for time-dependent laws only");
  const double lam = std::min(0.5, 0.5 * scaling_v0(flux));
  const ScalingMap m = build_scaling(flux, lam);
  return 1.0 / (1.0 + m.q);
}

}  // namespace conslaw
