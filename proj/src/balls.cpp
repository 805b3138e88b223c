#include "conslaw/balls.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "conslaw/errors.hpp"

namespace conslaw {

namespace {

constexpr double kSlack = 1e-10;

/// Row offsets over the leading r-1 axes and the half-width of the ball
/// along the last axis for each of them.
struct RowOffset {
  long d[2] = {0, 0};
  long width = 0;
};

std::vector<RowOffset> row_offsets(const Grid& g, double radius) {
  const std::size_t r = g.rank();
  const double r2 = radius * radius * (1.0 + kSlack);
  const double hl = g.spacing[r - 1];
  auto width_for = [&](double rem) -> long {
    if (rem < 0.0) return -1;
    return static_cast<long>(std::floor(std::sqrt(rem) / hl * (1.0 + kSlack) + kSlack));
  };
  std::vector<RowOffset> out;
  if (r == 1) {
    out.push_back({{0, 0}, width_for(r2)});
    return out;
  }
  const long m0 = static_cast<long>(std::floor(radius / g.spacing[0] * (1.0 + kSlack) + kSlack));
  if (r == 2) {
    for (long a = -m0; a <= m0; ++a) {
      double rem = r2 - (a * g.spacing[0]) * (a * g.spacing[0]);
      long w = width_for(rem);
      if (w >= 0) out.push_back({{a, 0}, w});
    }
    return out;
  }
  const long m1 = static_cast<long>(std::floor(radius / g.spacing[1] * (1.0 + kSlack) + kSlack));
  for (long a = -m0; a <= m0; ++a) {
    for (long b = -m1; b <= m1; ++b) {
      double rem = r2 - (a * g.spacing[0]) * (a * g.spacing[0]) - (b * g.spacing[1]) * (b * g.spacing[1]);
      long w = width_for(rem);
      if (w >= 0) out.push_back({{a, b}, w});
    }
  }
  return out;
}

template <class Better>
void sliding_extremum(const double* in, double* out, std::size_t n, std::size_t w, std::vector<std::size_t>& dq,
                      Better better) {
  dq.resize(n);
  std::size_t head = 0, tail = 0, next = 0;
  for (std::size_t j = 0; j < n; ++j) {
    const std::size_t hi = std::min(n - 1, j + w);
    while (next <= hi) {
      while (tail > head && !better(in[dq[tail - 1]], in[next])) --tail;
      dq[tail++] = next++;
    }
    const std::size_t lo = j >= w ? j - w : 0;
    while (dq[head] < lo) ++head;
    out[j] = in[dq[head]];
  }
}

void sliding_sum(const double* in, double* out, std::size_t n, std::size_t w, std::vector<double>& prefix) {
  prefix.assign(n + 1, 0.0);
  for (std::size_t j = 0; j < n; ++j) prefix[j + 1] = prefix[j] + in[j];
  for (std::size_t j = 0; j < n; ++j) {
    const std::size_t lo = j >= w ? j - w : 0;
    const std::size_t hi = std::min(n, j + w + 1);
    out[j] = prefix[hi] - prefix[lo];
  }
}

/// Row-decomposed ball filter. `row_op` fills the per-width row transform,
/// `accumulate` folds a shifted transformed row into the output.
template <class RowOp, class Acc>
std::vector<double> ball_filter(const Grid& g, std::span<const double> values, double radius, double init,
                                RowOp row_op, Acc accumulate) {
  const std::size_t r = g.rank();
  const std::size_t n_last = g.shape[r - 1];
  const std::size_t rows = g.size() / n_last;
  std::map<long, std::vector<RowOffset>> by_width;
  for (const auto& ro : row_offsets(g, radius)) by_width[ro.width].push_back(ro);

  std::vector<double> out(g.size(), init);
  std::vector<double> transformed(g.size());
  const std::size_t s0 = r >= 2 ? g.shape[0] : 1;
  const std::size_t s1 = r == 3 ? g.shape[1] : 1;
  for (const auto& [width, offs] : by_width) {
    const auto w = static_cast<std::size_t>(width);
    for (std::size_t row = 0; row < rows; ++row) {
      row_op(values.data() + row * n_last, transformed.data() + row * n_last, n_last, w);
    }
    for (const auto& ro : offs) {
      for (std::size_t row = 0; row < rows; ++row) {
        long i0 = 0, i1 = 0;
        if (r == 2) {
          i0 = static_cast<long>(row);
        } else if (r == 3) {
          i0 = static_cast<long>(row / s1);
          i1 = static_cast<long>(row % s1);
        }
        long j0 = i0 + ro.d[0];
        long j1 = i1 + ro.d[1];
        if (r >= 2 && (j0 < 0 || j0 >= static_cast<long>(s0))) continue;
        if (r == 3 && (j1 < 0 || j1 >= static_cast<long>(s1))) continue;
        std::size_t src_row = r == 1 ? 0 : (r == 2 ? static_cast<std::size_t>(j0) : static_cast<std::size_t>(j0) * s1 + static_cast<std::size_t>(j1));
        const double* src = transformed.data() + src_row * n_last;
        double* dst = out.data() + row * n_last;
        for (std::size_t j = 0; j < n_last; ++j) dst[j] = accumulate(dst[j], src[j]);
      }
    }
  }
  return out;
}

void check_radius(const Grid& g, double radius) {
  if (!(radius >= 0.0) || !std::isfinite(radius)) throw InputError("ball radius must be nonnegative");
  (void)g;
}

}  // namespace

std::vector<std::size_t> ball_cells(const Grid& g, std::span<const double> center, double radius) {
  check_radius(g, radius);
  const std::size_t r = g.rank();
  if (center.size() != r) throw InputError("ball center rank mismatch");
  const double r2 = radius * radius * (1.0 + kSlack);
  long lo[3] = {0, 0, 0}, hi[3] = {0, 0, 0};
  for (std::size_t a = 0; a < r; ++a) {
    const double h = g.spacing[a];
    lo[a] = std::max<long>(0, static_cast<long>(std::floor((center[a] - radius - g.origin[a]) / h - 0.5)));
    hi[a] = std::min<long>(static_cast<long>(g.shape[a]) - 1,
                           static_cast<long>(std::ceil((center[a] + radius - g.origin[a]) / h - 0.5)));
    if (hi[a] < lo[a]) return {};
  }
  std::vector<std::size_t> out;
  auto emit = [&](long i, long j, long k) {
    long idx[3] = {i, j, k};
    double d2 = 0.0;
    std::size_t flat = 0;
    for (std::size_t a = 0; a < r; ++a) {
      double c = g.center(a, static_cast<std::size_t>(idx[a])) - center[a];
      d2 += c * c;
      flat = flat * g.shape[a] + static_cast<std::size_t>(idx[a]);
    }
    if (d2 <= r2) out.push_back(flat);
  };
  for (long i = lo[0]; i <= hi[0]; ++i) {
    if (r == 1) {
      emit(i, 0, 0);
      continue;
    }
    for (long j = lo[1]; j <= hi[1]; ++j) {
      if (r == 2) {
        emit(i, j, 0);
        continue;
      }
      for (long k = lo[2]; k <= hi[2]; ++k) emit(i, j, k);
    }
  }
  return out;
}

bool ball_fits(const Grid& g, std::span<const double> center, double radius) {
  for (std::size_t a = 0; a < g.rank(); ++a) {
    const double slack = 1e-9 * g.spacing[a];
    if (center[a] - radius < g.lower(a) - slack || center[a] + radius > g.upper(a) + slack) return false;
  }
  return true;
}

ScalarField ball_max(const ScalarField& f, double radius) {
  check_radius(f.grid(), radius);
  std::vector<std::size_t> dq;
  auto v = ball_filter(
      f.grid(), f.values(), radius, -INFINITY,
      [&](const double* in, double* out, std::size_t n, std::size_t w) {
        sliding_extremum(in, out, n, w, dq, [](double a, double b) { return a > b; });
      },
      [](double a, double b) { return std::max(a, b); });
  return f.with_values(std::move(v));
}

ScalarField ball_min(const ScalarField& f, double radius) {
  check_radius(f.grid(), radius);
  std::vector<std::size_t> dq;
  auto v = ball_filter(
      f.grid(), f.values(), radius, INFINITY,
      [&](const double* in, double* out, std::size_t n, std::size_t w) {
        sliding_extremum(in, out, n, w, dq, [](double a, double b) { return a < b; });
      },
      [](double a, double b) { return std::min(a, b); });
  return f.with_values(std::move(v));
}

std::vector<double> ball_sum(const Grid& g, std::span<const double> values, double radius) {
  check_radius(g, radius);
  if (values.size() != g.size()) throw InputError("ball_sum: value count does not match grid");
  std::vector<double> prefix;
  return ball_filter(
      g, values, radius, 0.0,
      [&](const double* in, double* out, std::size_t n, std::size_t w) { sliding_sum(in, out, n, w, prefix); },
      [](double a, double b) { return a + b; });
}

BallStats ball_stats(const ScalarField& f, std::span<const double> center, double radius) {
  auto cells = ball_cells(f.grid(), center, radius);
  if (cells.empty()) throw GeometryError("ball contains no cell centers");
  BallStats s;
  s.cells = cells.size();
  s.min = INFINITY;
  s.max = -INFINITY;
  double sum = 0.0;
  for (auto c : cells) {
    s.min = std::min(s.min, f[c]);
    s.max = std::max(s.max, f[c]);
    sum += f[c];
  }
  s.mean = sum / static_cast<double>(cells.size());
  double dev = 0.0;
  for (auto c : cells) dev += std::abs(f[c] - s.mean);
  s.mean_deviation = dev / static_cast<double>(cells.size());
  s.integral = sum * f.grid().cell_volume();
  return s;
}

}  // namespace conslaw
