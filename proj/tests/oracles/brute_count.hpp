#pragma once

// Literal triple loop over (i, n, m). Bin membership and degrees are found by
// stepping integers rather than by ceil/floor; values within 1e-9 (relative)
// of an integer count as that integer.

#include <cmath>
#include <cstdint>
#include <numbers>

namespace oracle {

inline bool at_most(double a, double b) { return a <= b + 1e-9 * std::max(std::abs(a), std::abs(b)); }

// Smallest integer N >= x.
inline std::int64_t step_ceil(double x) {
  std::int64_t n = static_cast<std::int64_t>(x) - 2;
  while (!at_most(x, static_cast<double>(n))) ++n;
  return n;
}

struct BruteConfig {
  double R, W, T, F0, c;
};

// Total count; 3D counts (n, m) with |m| <= n <= N, 2D counts m = 0..N.
inline std::int64_t brute_mode_count(bool three_d, const BruteConfig& cfg) {
  const double lo = cfg.F0 - cfg.W, hi = cfg.F0 + cfg.W;
  const double a = std::numbers::e * std::numbers::pi * cfg.R / cfg.c;
  std::int64_t total = 0;
  bool any = false;
  const auto i_start = static_cast<std::int64_t>(lo * cfg.T) - 2;
  const auto i_end = static_cast<std::int64_t>(hi * cfg.T) + 2;
  for (std::int64_t i = std::max<std::int64_t>(0, i_start); i <= i_end; ++i) {
    const double f_num = static_cast<double>(i);
    if (!at_most(lo * cfg.T, f_num) || !at_most(f_num, hi * cfg.T)) continue;
    any = true;
    const std::int64_t N = step_ceil(a * f_num / cfg.T);
    if (three_d) {
      for (std::int64_t n = 0; n <= N; ++n)
        for (std::int64_t m = -n; m <= n; ++m) ++total;
    } else {
      for (std::int64_t m = 0; m <= N; ++m) ++total;
    }
  }
  if (!any) {
    const std::int64_t N = step_ceil(a * cfg.F0);
    total = three_d ? (N + 1) * (N + 1) : N + 1;
  }
  return total;
}

}  // namespace oracle
