#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "conslaw/grid.hpp"

namespace conslaw {

/// Balls B_r of a ladder are B_{r * unit}(center) in physical units.
struct BallFrame {
  Point center;
  double unit = 1.0;
};

/// Largest frame whose B_2 is inscribed in the grid's box, centered in it.
BallFrame inscribed_frame(const Grid& grid);

struct TruncationLadder {
  double U = 0.0;
  BallFrame frame;
  /// l_k = (1 - 2^-k) U, r_k = 1 + 2^-k, A_k = int_{B_{r_k}} (u - l_k)_+, k = 0..K.
  std::vector<double> levels;
  std::vector<double> radii;
  std::vector<double> A;
};

/// Throws InputError for U <= 0, K > 40, or values below -1e-12 * scale;
/// GeometryError if B_2 does not fit.
TruncationLadder truncation_ladder(const ScalarField& field, double U, int K, const BallFrame& frame);
TruncationLadder truncation_ladder(const ScalarField& field, double U, int K);

/// ||u||_{L^inf(B_1)} and ||u||_{L^1(B_2)} of one field.
struct NormPair {
  double linf = 0.0;
  double l1 = 0.0;
};

NormPair degiorgi_norms(const ScalarField& field, const BallFrame& frame);

inline constexpr double kFiniteConstant = 10.0;

struct OscillationFit {
  std::vector<double> gammas;
  /// Smallest C with linf <= C l1^gamma over the library, per gamma (inf if none).
  std::vector<double> C;
  /// C |B_2|^gamma / M^(1 - gamma), M the library's largest linf.
  std::vector<double> C_normalized;
  std::vector<NormPair> norms;
  /// Largest gamma with C_normalized <= kFiniteConstant; negative if none.
  double best_gamma = -1.0;
  double best_C = 0.0;
  /// linf / (C l1^gamma) per field at the best gamma.
  std::vector<double> ratios;
  double ball_volume = 0.0;
  double M = 0.0;
};

OscillationFit oscillation_bound_check(const std::vector<ScalarField>& fields, const std::vector<double>& gamma_grid,
                                       const BallFrame& frame);
/// Uses each field's inscribed frame.
OscillationFit oscillation_bound_check(const std::vector<ScalarField>& fields, const std::vector<double>& gamma_grid);

/// 0.05, 0.10, ..., 1.00.
std::vector<double> default_gamma_grid();

struct Convolutions {
  ScalarField upper;
  ScalarField lower;
};

/// Dilation and erosion over the discrete eps-ball; eps at least one cell.
Convolutions sup_inf_convolution(const ScalarField& field, double epsilon);

struct DeGiorgiExponents {
  double inv_p_prime = 0.0;
  double p_prime = 0.0;
  double delta = 0.0;
};

/// 1/p' = (1 - theta)/2 + theta/d - theta/(4d), delta = (1 + theta)/2 + 1/p' - 1.
DeGiorgiExponents degiorgi_exponents(double theta, int d);

}  // namespace conslaw
