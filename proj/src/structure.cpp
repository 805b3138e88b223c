#include "conslaw/structure.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "conslaw/balls.hpp"
#include "conslaw/errors.hpp"
#include "conslaw/flux.hpp"
#include "conslaw/parallel.hpp"

namespace conslaw {

namespace {

void check_radii(const std::vector<double>& radii, bool strictly_decreasing) {
  if (radii.empty()) throw InputError("need at least one radius");
  for (std::size_t i = 0; i < radii.size(); ++i) {
    if (!(radii[i] > 0.0) || !std::isfinite(radii[i])) throw InputError("radii must be positive");
    if (strictly_decreasing && i > 0 && !(radii[i] < radii[i - 1]))
      throw InputError("radii must be strictly decreasing");
  }
}

std::vector<Point> normal_grid(std::size_t rank) {
  std::vector<Point> out;
  if (rank == 1) {
    out.push_back({1.0});
  } else if (rank == 2) {
    for (std::size_t k = 0; k < kShockDirections; ++k) {
      const double th = std::numbers::pi * static_cast<double>(k) / static_cast<double>(kShockDirections);
      out.push_back({std::cos(th), std::sin(th)});
    }
  } else {
    out = sphere_directions(rank, kShockDirections);
  }
  return out;
}

}  // namespace

EnvelopePair semicontinuous_envelopes(const ScalarField& field, const std::vector<double>& radii) {
  check_radii(radii, true);
  if (radii.back() < field.grid().min_spacing() * (1.0 - 1e-9))
    throw InputError("smallest radius is below the grid resolution");
  EnvelopePair out;
  out.radii_used = radii;
  for (double r : radii) {
    out.lower_by_radius.push_back(ball_min(field, r));
    out.upper_by_radius.push_back(ball_max(field, r));
  }
  out.lower = out.lower_by_radius.back();
  out.upper = out.upper_by_radius.back();
  return out;
}

std::size_t JumpMask::count() const {
  return static_cast<std::size_t>(std::count(flagged.begin(), flagged.end(), std::uint8_t{1}));
}

std::vector<std::size_t> JumpMask::flagged_cells() const {
  std::vector<std::size_t> out;
  for (std::size_t k = 0; k < flagged.size(); ++k)
    if (flagged[k]) out.push_back(k);
  return out;
}

double default_jump_threshold(double min, double max) {
  const double range = max - min;
  return 0.01 * range * range * range;
}

JumpMask jump_set(const DissipationMeasure& measure, const std::vector<double>& radii, double threshold) {
  check_radii(radii, false);
  if (!(threshold > 0.0)) throw InputError("threshold must be positive");
  JumpMask mask;
  mask.geometry = measure.geometry;
  mask.threshold = threshold;
  mask.radii = radii;
  const std::size_t n = measure.geometry.size();
  mask.score.assign(n, 0.0);
  mask.flagged.assign(n, 0);
  const auto mass = measure.cell_mass();
  const double codim = static_cast<double>(measure.geometry.rank()) - 1.0;
  for (double r : radii) {
    const auto sums = ball_sum(measure.geometry, mass, r);
    const double scale = std::pow(r, codim);
    for (std::size_t k = 0; k < n; ++k) mask.score[k] = std::max(mask.score[k], sums[k] / scale);
  }
  for (std::size_t k = 0; k < n; ++k) mask.flagged[k] = mask.score[k] >= threshold ? 1 : 0;
  return mask;
}

bool OscillationModulus::decreasing(double slack) const {
  for (std::size_t i = 1; i < osc.size(); ++i) {
    if (radii[i] < radii[i - 1] && osc[i] > osc[i - 1] + slack) return false;
    if (radii[i] > radii[i - 1] && osc[i] < osc[i - 1] - slack) return false;
  }
  return true;
}

OscillationModulus oscillation_modulus(const ScalarField& field, const Point& x, const std::vector<double>& radii) {
  check_radii(radii, false);
  if (x.size() != field.grid().rank()) throw InputError("point rank does not match the field");
  OscillationModulus out;
  out.radii = radii;
  for (double r : radii) {
    if (!ball_fits(field.grid(), x, r)) throw GeometryError("oscillation ball does not fit in the domain");
    const auto s = ball_stats(field, x, r);
    out.osc.push_back(s.max - s.min);
    out.vmo.push_back(s.mean_deviation);
  }
  return out;
}

ShockFit blowup_trace(const ScalarField& frame, const Point& x0, const std::vector<double>& radii) {
  check_radii(radii, true);
  const Grid& g = frame.grid();
  if (x0.size() != g.rank()) throw InputError("point rank does not match the field");
  if (!g.contains(x0)) throw GeometryError("x0 lies outside the domain");
  const auto normals = normal_grid(g.rank());

  ShockFit fit;
  fit.center = x0;
  fit.radii = radii;
  for (double r : radii) {
    const auto cells = ball_cells(g, x0, r);
    if (cells.empty()) throw GeometryError("blowup ball contains no cell");
    // Rescaled offsets (y - x0) / r.
    std::vector<Point> y(cells.size(), Point(g.rank()));
    std::vector<double> norm(cells.size());
    for (std::size_t i = 0; i < cells.size(); ++i) {
      const Point c = g.center_of(cells[i]);
      double n2 = 0.0;
      for (std::size_t a = 0; a < g.rank(); ++a) {
        y[i][a] = (c[a] - x0[a]) / r;
        n2 += y[i][a] * y[i][a];
      }
      norm[i] = std::sqrt(n2);
    }

    std::vector<double> res(normals.size()), up(normals.size()), um(normals.size());
    parallel_for(normals.size(), [&](std::size_t d) {
      const Point& n = normals[d];
      double sp = 0.0, sm = 0.0;
      std::size_t cp = 0, cm = 0;
      std::vector<double> s(cells.size());
      for (std::size_t i = 0; i < cells.size(); ++i) {
        double dot = 0.0;
        for (std::size_t a = 0; a < g.rank(); ++a) dot += y[i][a] * n[a];
        s[i] = dot;
        if (dot > kShockCollar) {
          sp += frame[cells[i]];
          ++cp;
        } else if (dot < -kShockCollar) {
          sm += frame[cells[i]];
          ++cm;
        }
      }
      const double all = [&] {
        double t = 0.0;
        for (auto c : cells) t += frame[c];
        return t / static_cast<double>(cells.size());
      }();
      const double mp = cp ? sp / static_cast<double>(cp) : all;
      const double mm = cm ? sm / static_cast<double>(cm) : all;
      double l1 = 0.0;
      for (std::size_t i = 0; i < cells.size(); ++i) l1 += std::abs(frame[cells[i]] - (s[i] > 0.0 ? mp : mm));
      res[d] = l1 / static_cast<double>(cells.size());
      up[d] = mp;
      um[d] = mm;
    });
    std::size_t best = 0;
    for (std::size_t d = 1; d < normals.size(); ++d)
      if (res[d] < res[best] - 1e-15) best = d;

    Point n = normals[best];
    double uplus = up[best], uminus = um[best];
    if (uplus < uminus) {
      std::swap(uplus, uminus);
      for (auto& c : n) c = -c;
    }
    double dev_p = 0.0, dev_m = 0.0;
    for (std::size_t i = 0; i < cells.size(); ++i) {
      double dot = 0.0;
      for (std::size_t a = 0; a < g.rank(); ++a) dot += y[i][a] * n[a];
      const double v = frame[cells[i]];
      if (dot > kShockCollar * norm[i]) dev_p = std::max(dev_p, std::abs(v - uplus));
      if (dot < -kShockCollar * norm[i]) dev_m = std::max(dev_m, std::abs(v - uminus));
    }
    fit.residual.push_back(res[best]);
    fit.u_plus_by_radius.push_back(uplus);
    fit.u_minus_by_radius.push_back(uminus);
    fit.normal_by_radius.push_back(n);
    fit.cone_plus_deviation.push_back(dev_p);
    fit.cone_minus_deviation.push_back(dev_m);
  }
  fit.u_plus = fit.u_plus_by_radius.back();
  fit.u_minus = fit.u_minus_by_radius.back();
  fit.normal = fit.normal_by_radius.back();
  // A jump survives the blowup; a smooth field's split shrinks with r.
  const double j_small = fit.u_plus - fit.u_minus;
  const double j_large = fit.u_plus_by_radius.front() - fit.u_minus_by_radius.front();
  fit.single_shock = j_small > 0.0 && fit.residual.back() <= 0.25 * j_small && j_small >= 0.75 * j_large;
  return fit;
}

double grid_floor(const ScalarField& u0) {
  const Grid& g = u0.grid();
  double slope = 0.0;
  double extent = 0.0;
  for (std::size_t a = 0; a < g.rank(); ++a) {
    extent = std::max(extent, g.upper(a) - g.lower(a));
    const std::size_t s = g.stride(a);
    const std::size_t n = g.shape[a];
    for (std::size_t k = 0; k < u0.size(); ++k) {
      if ((k / s) % n + 1 >= n) continue;
      slope = std::max(slope, (u0[k + s] - u0[k]) / g.spacing[a]);
    }
  }
  slope = std::max(slope, (u0.max() - u0.min()) / extent);
  return g.max_spacing() * slope;
}

}  // namespace conslaw
