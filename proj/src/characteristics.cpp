#include "conslaw/characteristics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "conslaw/balls.hpp"
#include "conslaw/errors.hpp"
#include "conslaw/structure.hpp"

namespace conslaw {

namespace {

double cross(const Point& o, const Point& a, const Point& b) {
  return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0]);
}

double segment_distance(const Point& p, const Point& a, const Point& b) {
  const double dx = b[0] - a[0], dy = b[1] - a[1];
  const double len2 = dx * dx + dy * dy;
  double s = len2 > 0.0 ? ((p[0] - a[0]) * dx + (p[1] - a[1]) * dy) / len2 : 0.0;
  s = std::clamp(s, 0.0, 1.0);
  return std::hypot(p[0] - a[0] - s * dx, p[1] - a[1] - s * dy);
}

std::vector<Point> convex_hull_2d(std::vector<Point> pts) {
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  if (pts.size() < 3) return pts;
  std::vector<Point> h(2 * pts.size());
  std::size_t k = 0;
  for (const auto& p : pts) {
    while (k >= 2 && cross(h[k - 2], h[k - 1], p) <= 0.0) --k;
    h[k++] = p;
  }
  for (std::size_t i = pts.size() - 1, lo = k + 1; i-- > 0;) {
    while (k >= lo && cross(h[k - 2], h[k - 1], pts[i]) <= 0.0) --k;
    h[k++] = pts[i];
  }
  h.resize(k - 1);
  return h;
}

Point speed_point(const FluxSpec& flux, double v) {
  Point p;
  for (std::size_t c = flux.time_augmented ? 1 : 0; c < flux.dim; ++c) p.push_back(flux.a(c, v));
  return p;
}

double norm(const Point& p) {
  double s = 0.0;
  for (double x : p) s += x * x;
  return std::sqrt(s);
}

struct Envelopes {
  ScalarField lower;
  ScalarField upper;
};

Envelopes one_cell_envelopes(const ScalarField& f) {
  const double r = f.grid().max_spacing();
  return {ball_min(f, r), ball_max(f, r)};
}

double value_at(const ScalarField& f, const Point& p) {
  const auto idx = f.grid().locate(p);
  std::size_t flat = 0;
  for (std::size_t a = 0; a < idx.size(); ++a) flat += idx[a] * f.grid().stride(a);
  return f[flat];
}

double frame_tol(const Trajectory& traj) {
  const double span = std::abs(traj.frames.back().time()) + std::abs(traj.frames.front().time());
  return 1e-9 * std::max(1.0, span);
}

/// Cells of `g` whose centers y satisfy dist((x - y) / tau, K) <= widen / tau.
std::vector<std::size_t> foot_cells(const Grid& g, const VelocityHull& K, const Point& x, double tau, double widen) {
  std::vector<std::size_t> out;
  Point q(g.rank());
  for (std::size_t c = 0; c < g.size(); ++c) {
    const Point y = g.center_of(c);
    for (std::size_t a = 0; a < g.rank(); ++a) q[a] = (x[a] - y[a]) / tau;
    if (K.distance(q) <= widen / tau) out.push_back(c);
  }
  return out;
}

}  // namespace

double VelocityHull::distance(const Point& p) const {
  if (p.size() != dim) throw InputError("point dimension does not match the hull");
  if (vertices.empty()) return std::numeric_limits<double>::infinity();
  if (dim == 1) {
    const double lo = vertices.front()[0], hi = vertices.back()[0];
    if (p[0] < lo) return lo - p[0];
    if (p[0] > hi) return p[0] - hi;
    return 0.0;
  }
  if (vertices.size() == 1) return std::hypot(p[0] - vertices[0][0], p[1] - vertices[0][1]);
  if (vertices.size() == 2) return segment_distance(p, vertices[0], vertices[1]);
  bool inside = true;
  for (std::size_t i = 0; i < vertices.size(); ++i) {
    if (cross(vertices[i], vertices[(i + 1) % vertices.size()], p) < 0.0) {
      inside = false;
      break;
    }
  }
  if (inside) return 0.0;
  double d = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < vertices.size(); ++i)
    d = std::min(d, segment_distance(p, vertices[i], vertices[(i + 1) % vertices.size()]));
  return d;
}

double VelocityHull::max_norm() const {
  double m = 0.0;
  for (const auto& v : vertices) m = std::max(m, norm(v));
  return m;
}

VelocityHull velocity_hull(const FluxSpec& flux, Interval I, std::size_t samples) {
  if (I.hi < I.lo) throw InputError("interval is reversed");
  const double slack = 1e-12 * std::max(1.0, flux.interval.length());
  if (!flux.interval.contains(I.lo, slack) || !flux.interval.contains(I.hi, slack))
    throw InputError("interval leaves the flux's domain");
  VelocityHull K;
  K.time_augmented = flux.time_augmented;
  K.dim = flux.time_augmented ? flux.dim - 1 : flux.dim;
  if (K.dim == 0 || K.dim > 2) throw UnsupportedError("velocity hulls need a one- or two-dimensional speed space");
  const std::size_t n = I.hi > I.lo ? std::max<std::size_t>(samples, 2) : 1;
  std::vector<Point> pts;
  for (std::size_t i = 0; i < n; ++i) {
    const double v = n == 1 ? I.lo : I.lo + (I.hi - I.lo) * static_cast<double>(i) / static_cast<double>(n - 1);
    pts.push_back(speed_point(flux, v));
  }
  for (double v : flux.sign_changes(K.time_augmented ? 1 : 0, I.lo, I.hi)) pts.push_back(speed_point(flux, v));
  if (K.dim == 1) {
    double lo = pts[0][0], hi = pts[0][0];
    for (const auto& p : pts) {
      lo = std::min(lo, p[0]);
      hi = std::max(hi, p[0]);
    }
    K.vertices = {{lo}, {hi}};
  } else {
    K.vertices = convex_hull_2d(pts);
  }
  return K;
}

ConeReport cone_max_principle_check(const Trajectory& traj, const FluxSpec& flux, const Point& x, double t,
                                    double tau, double tol) {
  if (!(tau > 0.0)) throw InputError("tau must be positive");
  if (traj.frames.empty()) throw InputError("empty trajectory");
  const double ftol = frame_tol(traj);
  const ScalarField& now = traj.at(t, ftol);
  const ScalarField& past = traj.at(t - tau, ftol);
  const Grid& g = now.grid();
  if (x.size() != g.rank()) throw InputError("point rank does not match the trajectory");
  if (!g.contains(x)) throw GeometryError("x lies outside the domain");

  const Interval I{std::max(flux.interval.lo, std::min(past.min(), now.min())),
                   std::min(flux.interval.hi, std::max(past.max(), now.max()))};
  const auto K = velocity_hull(flux, I);
  if (K.dim != g.rank()) throw InputError("flux speed space does not match the trajectory");
  const double h = g.max_spacing();
  for (const auto& v : K.vertices) {
    Point y(g.rank());
    for (std::size_t a = 0; a < g.rank(); ++a) y[a] = x[a] - tau * v[a];
    if (!g.contains(y, -0.5 * h)) throw GeometryError("backward cone leaves the domain");
  }

  ConeReport rep;
  rep.tol = tol >= 0.0 ? tol : 2.0 * grid_floor(traj.frames.front()) + 1e-12;
  const auto e_now = one_cell_envelopes(now);
  const auto e_past = one_cell_envelopes(past);
  rep.upper_at = value_at(e_now.upper, x);
  rep.lower_at = value_at(e_now.lower, x);
  const auto cells = foot_cells(g, K, x, tau, h);
  if (cells.empty()) throw GeometryError("backward cone foot contains no cell");
  rep.foot_cells = cells.size();
  rep.upper_foot = -std::numeric_limits<double>::infinity();
  rep.lower_foot = std::numeric_limits<double>::infinity();
  for (auto c : cells) {
    rep.upper_foot = std::max(rep.upper_foot, e_past.upper[c]);
    rep.lower_foot = std::min(rep.lower_foot, e_past.lower[c]);
  }
  rep.upper_diff = rep.upper_at - rep.upper_foot;
  rep.lower_diff = rep.lower_foot - rep.lower_at;
  rep.passed = rep.upper_diff <= rep.tol && rep.lower_diff <= rep.tol;
  return rep;
}

double CharPolygon::chord_deviation() const {
  if (points.size() < 2) return 0.0;
  const Point& a = points.front();
  const Point& b = points.back();
  const double t0 = times.front(), t1 = times.back();
  double worst = 0.0;
  for (std::size_t j = 0; j < points.size(); ++j) {
    const double s = (times[j] - t0) / (t1 - t0);
    double d2 = 0.0;
    for (std::size_t c = 0; c < a.size(); ++c) {
      const double on = a[c] + s * (b[c] - a[c]);
      d2 += (points[j][c] - on) * (points[j][c] - on);
    }
    worst = std::max(worst, std::sqrt(d2));
  }
  return worst;
}

double CharPolygon::max_speed() const {
  double m = 0.0;
  for (std::size_t j = 1; j < points.size(); ++j) {
    double d2 = 0.0;
    for (std::size_t c = 0; c < points[j].size(); ++c)
      d2 += (points[j][c] - points[j - 1][c]) * (points[j][c] - points[j - 1][c]);
    m = std::max(m, std::sqrt(d2) / (times[j] - times[j - 1]));
  }
  return m;
}

CharPolygon backward_characteristic(const Trajectory& traj, const FluxSpec& flux, const Point& x0, double v0, int k,
                                    double tol) {
  if (k < 2) throw InputError("k must be at least 2");
  if (traj.frames.size() < 2) throw InputError("trajectory needs at least two frames");
  if (!flux.time_augmented) throw UnsupportedError("backward characteristics need a time-augmented flux");
  const double t_start = traj.frames.front().time();
  const double T = traj.frames.back().time();
  const Grid& g = traj.frames.back().grid();
  if (x0.size() != g.rank()) throw InputError("point rank does not match the trajectory");
  if (!g.contains(x0)) throw GeometryError("x0 lies outside the domain");

  CharPolygon poly;
  poly.level = v0;
  poly.tol = tol >= 0.0 ? tol : 2.0 * grid_floor(traj.frames.front());
  const double ftol = frame_tol(traj);
  const double dt = (T - t_start) / k;
  for (int j = 0; j <= k; ++j) poly.times.push_back(j == k ? T : t_start + j * dt);
  std::vector<const ScalarField*> frames;
  for (double t : poly.times) frames.push_back(&traj.at(t, ftol));

  Interval I{flux.interval.lo, flux.interval.hi};
  {
    double lo = traj.frames.front().min(), hi = traj.frames.front().max();
    for (const auto& f : traj.frames) {
      lo = std::min(lo, f.min());
      hi = std::max(hi, f.max());
    }
    I = {std::max(I.lo, std::min(lo, v0)), std::min(I.hi, std::max(hi, v0))};
  }
  const auto K = velocity_hull(flux, I);
  const Point pred_speed = speed_point(flux, v0);
  const double h = g.max_spacing();

  auto env = one_cell_envelopes(*frames.back());
  const double lo_T = value_at(env.lower, x0), hi_T = value_at(env.upper, x0);
  if (v0 < lo_T - poly.tol || v0 > hi_T + poly.tol)
    throw PreconditionError("v0 = " + std::to_string(v0) + " lies outside [" + std::to_string(lo_T) + ", " +
                            std::to_string(hi_T) + "] at x0");

  std::vector<Point> pts(static_cast<std::size_t>(k) + 1);
  std::vector<double> plo(pts.size()), phi(pts.size());
  pts[k] = x0;
  plo[k] = lo_T;
  phi[k] = hi_T;
  for (int j = k; j >= 1; --j) {
    const double step = poly.times[j] - poly.times[j - 1];
    env = one_cell_envelopes(*frames[j - 1]);
    const Point& xj = pts[j];
    Point pred(g.rank());
    for (std::size_t a = 0; a < g.rank(); ++a) pred[a] = xj[a] - step * pred_speed[a];

    // Candidates: the prediction, the foot's vertices and the cell centers inside the foot.
    std::vector<Point> cand{pred};
    for (const auto& v : K.vertices) {
      Point y(g.rank());
      for (std::size_t a = 0; a < g.rank(); ++a) y[a] = xj[a] - step * v[a];
      cand.push_back(y);
    }
    for (auto c : foot_cells(g, K, xj, step, 0.0)) cand.push_back(g.center_of(c));

    double best_d = std::numeric_limits<double>::infinity();
    double miss = std::numeric_limits<double>::infinity();
    Point best;
    double blo = 0.0, bhi = 0.0;
    Point q(g.rank());
    for (const auto& y : cand) {
      if (!g.contains(y)) continue;
      for (std::size_t a = 0; a < g.rank(); ++a) q[a] = (xj[a] - y[a]) / step;
      if (!K.contains(q, 1e-12 * std::max(1.0, K.max_norm()))) continue;
      const double lo = value_at(env.lower, y), hi = value_at(env.upper, y);
      const double gap = std::max({lo - v0, v0 - hi, 0.0});
      miss = std::min(miss, gap);
      if (gap > poly.tol) continue;
      double d2 = 0.0;
      for (std::size_t a = 0; a < g.rank(); ++a) d2 += (y[a] - pred[a]) * (y[a] - pred[a]);
      if (d2 < best_d) {
        best_d = d2;
        best = y;
        blo = lo;
        bhi = hi;
      }
    }
    if (best.empty())
      throw LevelLostError("level " + std::to_string(v0) + " lost at t = " + std::to_string(poly.times[j - 1]) +
                           "; best near miss " + std::to_string(miss) + " above tol " + std::to_string(poly.tol) +
                           " (cell size " + std::to_string(h) + ")");
    pts[j - 1] = best;
    plo[j - 1] = blo;
    phi[j - 1] = bhi;
  }
  poly.points = pts;
  for (int j = 1; j <= k; ++j) {
    poly.segment_lo.push_back(std::min(plo[j - 1], plo[j]));
    poly.segment_hi.push_back(std::max(phi[j - 1], phi[j]));
  }
  return poly;
}

LineConstancy line_constancy_check(const ScalarField& field, const Point& x0, const FluxSpec& flux,
                                   double continuity_tol) {
  const Grid& g = field.grid();
  if (g.rank() != flux.dim) throw InputError("field rank must equal the flux dimension");
  if (x0.size() != g.rank()) throw InputError("point rank does not match the field");
  if (!g.contains(x0)) throw GeometryError("x0 lies outside the domain");
  const double h = g.max_spacing();
  if (continuity_tol < 0.0) continuity_tol = 0.25 * (field.max() - field.min());
  const auto s = ball_stats(field, x0, 2.0 * h);
  if (s.max - s.min > continuity_tol)
    throw PreconditionError("field is not continuous at x0 (two-cell oscillation " + std::to_string(s.max - s.min) +
                            ")");

  LineConstancy out;
  out.x0 = x0;
  out.value = field.interpolate(x0);
  out.direction = flux.velocity(out.value);
  const double speed = norm(out.direction);
  if (speed == 0.0) return out;
  // Maximal parameter range keeping the segment between the outermost cell centers.
  double smin = -std::numeric_limits<double>::infinity(), smax = std::numeric_limits<double>::infinity();
  for (std::size_t a = 0; a < g.rank(); ++a) {
    const double d = out.direction[a];
    if (d == 0.0) continue;
    const double lo = g.center(a, 0), hi = g.center(a, g.shape[a] - 1);
    const double s1 = (lo - x0[a]) / d, s2 = (hi - x0[a]) / d;
    smin = std::max(smin, std::min(s1, s2));
    smax = std::min(smax, std::max(s1, s2));
  }
  out.s_min = smin;
  out.s_max = smax;
  const double ds = 0.5 * g.min_spacing() / speed;
  const auto n = static_cast<std::size_t>(std::ceil((smax - smin) / ds));
  Point p(g.rank());
  for (std::size_t i = 0; i <= n; ++i) {
    const double t = smin + (smax - smin) * static_cast<double>(i) / static_cast<double>(std::max<std::size_t>(n, 1));
    for (std::size_t a = 0; a < g.rank(); ++a) p[a] = x0[a] + t * out.direction[a];
    if (!g.contains(p)) continue;
    out.deviation = std::max(out.deviation, std::abs(field.interpolate(p) - out.value));
    ++out.samples;
  }
  return out;
}

Point forward_characteristic_point(const Trajectory& traj, const FluxSpec& flux, const Point& x0, double t0, double s,
                                   int max_iter) {
  if (!flux.time_augmented) throw UnsupportedError("forward characteristics need a time-augmented flux");
  const double ftol = frame_tol(traj);
  const ScalarField& start = traj.at(t0, ftol);
  const ScalarField& later = traj.at(t0 + s, ftol);
  const Grid& g = later.grid();
  auto speed = [&](double v) {
    Point p(g.rank());
    for (std::size_t a = 0; a < g.rank(); ++a) p[a] = flux.a(flux.spatial_component(a), v);
    return p;
  };
  Point y = x0;
  const Point a0 = speed(start.interpolate(x0));
  for (std::size_t a = 0; a < g.rank(); ++a) y[a] += s * a0[a];
  const double tol = 1e-10 * std::max(1.0, g.max_spacing());
  for (int it = 0; it < max_iter; ++it) {
    if (!g.contains(y)) throw GeometryError("forward characteristic leaves the domain");
    const Point ay = speed(later.interpolate(y));
    double diff = 0.0;
    Point next(g.rank());
    for (std::size_t a = 0; a < g.rank(); ++a) {
      next[a] = x0[a] + s * ay[a];
      diff = std::max(diff, std::abs(next[a] - y[a]));
    }
    y = next;
    if (diff <= tol) return y;
  }
  throw NumericalError("forward characteristic iteration did not converge");
}

}  // namespace conslaw
