#pragma once

#include <cmath>
#include <optional>

namespace maryland {

struct BisectionResult {
  double x;
  double fx;
  int iterations;
};

/// Bisection for a sign change of f on [lo, hi]. Returns nullopt if f(lo) and
/// f(hi) have the same strict sign. Stops when |f(mid)| <= f_tol, when the
/// bracket is narrower than x_tol, or when it cannot be split further in double
/// precision.
template <typename F>
std::optional<BisectionResult> bisect(F&& f, double lo, double hi, double x_tol,
                                      double f_tol = 0.0, int max_iter = 200) {
  double f_lo = f(lo);
  double f_hi = f(hi);
  if (f_lo == 0.0) return BisectionResult{lo, f_lo, 0};
  if (f_hi == 0.0) return BisectionResult{hi, f_hi, 0};
  if (std::signbit(f_lo) == std::signbit(f_hi)) return std::nullopt;

  BisectionResult best{lo, f_lo, 0};
  if (std::abs(f_hi) < std::abs(f_lo)) best = {hi, f_hi, 0};
  for (int it = 1; it <= max_iter; ++it) {
    const double mid = lo + 0.5 * (hi - lo);
    if (mid <= lo || mid >= hi) break;
    const double f_mid = f(mid);
    if (std::abs(f_mid) <= std::abs(best.fx)) best = {mid, f_mid, it};
    best.iterations = it;
    if (f_mid == 0.0 || std::abs(f_mid) <= f_tol) return BisectionResult{mid, f_mid, it};
    if (std::signbit(f_mid) == std::signbit(f_lo)) {
      lo = mid;
      f_lo = f_mid;
    } else {
      hi = mid;
    }
    if (hi - lo <= x_tol) {
      const double x = lo + 0.5 * (hi - lo);
      const double fx = f(x);
      return std::abs(fx) <= std::abs(best.fx) ? BisectionResult{x, fx, it} : best;
    }
  }
  return best;
}

}  // namespace maryland
