#include "conslaw/degiorgi.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "conslaw/balls.hpp"
#include "conslaw/errors.hpp"

namespace conslaw {

namespace {

void check_nonnegative(const ScalarField& field) {
  const double tol = 1e-12 * std::max(1.0, std::abs(field.max()));
  if (field.min() < -tol) throw InputError("field must be nonnegative");
}

}  // namespace

BallFrame inscribed_frame(const Grid& grid) {
  BallFrame f;
  double half = std::numeric_limits<double>::infinity();
  for (std::size_t a = 0; a < grid.rank(); ++a) {
    f.center.push_back(0.5 * (grid.lower(a) + grid.upper(a)));
    half = std::min(half, 0.5 * (grid.upper(a) - grid.lower(a)));
  }
  f.unit = 0.5 * half;
  return f;
}

TruncationLadder truncation_ladder(const ScalarField& field, double U, int K, const BallFrame& frame) {
  if (!(U > 0.0)) throw InputError("U must be positive");
  if (K < 0 || K > 40) throw InputError("K must lie in 0..40");
  if (!(frame.unit > 0.0)) throw InputError("ball unit must be positive");
  check_nonnegative(field);
  const Grid& g = field.grid();
  if (frame.center.size() != g.rank()) throw InputError("ball center rank mismatch");
  if (!ball_fits(g, frame.center, 2.0 * frame.unit)) throw GeometryError("B_2 does not fit in the domain");

  TruncationLadder out;
  out.U = U;
  out.frame = frame;
  const double vol = g.cell_volume();
  for (int k = 0; k <= K; ++k) {
    const double p = std::ldexp(1.0, -k);
    const double level = (1.0 - p) * U;
    const double r = 1.0 + p;
    double a = 0.0;
    for (auto c : ball_cells(g, frame.center, r * frame.unit)) a += std::max(field[c] - level, 0.0);
    out.levels.push_back(level);
    out.radii.push_back(r);
    out.A.push_back(a * vol);
  }
  return out;
}

TruncationLadder truncation_ladder(const ScalarField& field, double U, int K) {
  return truncation_ladder(field, U, K, inscribed_frame(field.grid()));
}

NormPair degiorgi_norms(const ScalarField& field, const BallFrame& frame) {
  const Grid& g = field.grid();
  if (!ball_fits(g, frame.center, 2.0 * frame.unit)) throw GeometryError("B_2 does not fit in the domain");
  NormPair p;
  for (auto c : ball_cells(g, frame.center, frame.unit)) p.linf = std::max(p.linf, std::abs(field[c]));
  for (auto c : ball_cells(g, frame.center, 2.0 * frame.unit)) p.l1 += std::abs(field[c]);
  p.l1 *= g.cell_volume();
  return p;
}

std::vector<double> default_gamma_grid() {
  std::vector<double> out;
  for (int i = 1; i <= 20; ++i) out.push_back(0.05 * i);
  return out;
}

namespace {

OscillationFit fit_library(const std::vector<ScalarField>& fields, const std::vector<double>& gamma_grid,
                           const std::vector<BallFrame>& frames) {
  if (fields.empty()) throw InputError("empty field library");
  if (gamma_grid.empty()) throw InputError("empty gamma grid");
  for (double gm : gamma_grid)
    if (!(gm > 0.0 && gm <= 1.0)) throw InputError("gamma values must lie in (0, 1]");
  OscillationFit fit;
  fit.gammas = gamma_grid;
  for (std::size_t i = 0; i < fields.size(); ++i) {
    check_nonnegative(fields[i]);
    fit.norms.push_back(degiorgi_norms(fields[i], frames[i]));
    fit.M = std::max(fit.M, fit.norms.back().linf);
    const auto b2 = ball_cells(fields[i].grid(), frames[i].center, 2.0 * frames[i].unit);
    fit.ball_volume = std::max(fit.ball_volume, static_cast<double>(b2.size()) * fields[i].grid().cell_volume());
  }
  const double inf = std::numeric_limits<double>::infinity();
  for (double gm : gamma_grid) {
    double C = 0.0;
    for (const auto& n : fit.norms) {
      if (n.linf == 0.0) continue;
      if (n.l1 == 0.0) {
        C = inf;
        break;
      }
      C = std::max(C, n.linf / std::pow(n.l1, gm));
    }
    fit.C.push_back(C);
    double cn = inf;
    if (std::isfinite(C)) cn = fit.M > 0.0 ? C * std::pow(fit.ball_volume, gm) / std::pow(fit.M, 1.0 - gm) : 0.0;
    fit.C_normalized.push_back(cn);
  }
  for (std::size_t j = 0; j < gamma_grid.size(); ++j) {
    if (fit.C_normalized[j] <= kFiniteConstant && gamma_grid[j] > fit.best_gamma) {
      fit.best_gamma = gamma_grid[j];
      fit.best_C = fit.C[j];
    }
  }
  if (fit.best_gamma > 0.0) {
    for (const auto& n : fit.norms) {
      const double bound = fit.best_C * std::pow(n.l1, fit.best_gamma);
      fit.ratios.push_back(bound > 0.0 ? n.linf / bound : 0.0);
    }
  }
  return fit;
}

}  // namespace

OscillationFit oscillation_bound_check(const std::vector<ScalarField>& fields, const std::vector<double>& gamma_grid,
                                       const BallFrame& frame) {
  return fit_library(fields, gamma_grid, std::vector<BallFrame>(fields.size(), frame));
}

OscillationFit oscillation_bound_check(const std::vector<ScalarField>& fields, const std::vector<double>& gamma_grid) {
  std::vector<BallFrame> frames;
  for (const auto& f : fields) frames.push_back(inscribed_frame(f.grid()));
  return fit_library(fields, gamma_grid, frames);
}

Convolutions sup_inf_convolution(const ScalarField& field, double epsilon) {
  if (!(epsilon >= field.grid().min_spacing() * (1.0 - 1e-9)))
    throw InputError("epsilon is below the grid resolution");
  return {ball_max(field, epsilon), ball_min(field, epsilon)};
}

DeGiorgiExponents degiorgi_exponents(double theta, int d) {
  if (!(theta > 0.0 && theta < 1.0)) throw InputError("theta must lie in (0, 1)");
  if (d < 1) throw InputError("d must be at least 1");
  DeGiorgiExponents e;
  const double dd = static_cast<double>(d);
  e.inv_p_prime = (1.0 - theta) / 2.0 + theta / dd - theta / (4.0 * dd);
  e.p_prime = 1.0 / e.inv_p_prime;
  e.delta = (1.0 + theta) / 2.0 + e.inv_p_prime - 1.0;
  if (!(e.delta > 0.0)) throw NumericalError("degiorgi exponent delta is not positive");
  return e;
}

}  // namespace conslaw
