#pragma once

#include <cmath>
#include <optional>
#include <string>
#include <utility>

#include "partial_search/errors.hpp"

namespace partial_search::roots {

inline constexpr int kMaxBisectionSteps = 200;

/// Bracketed bisection. Requires f(lo) and f(hi) of opposite sign (or zero).
/// Stops once the bracket is below `tol` relative to the midpoint magnitude.
template <typename F>
double bisect(F&& f, double lo, double hi, double tol = 1e-14) {
  double f_lo = f(lo);
  const double f_hi = f(hi);
  if (f_lo == 0.0) return lo;
  if (f_hi == 0.0) return hi;
  if ((f_lo < 0.0) == (f_hi < 0.0)) {
    throw NumericalError("root not bracketed on [" + std::to_string(lo) + ", " +
                         std::to_string(hi) + "]");
  }
  for (int step = 0; step < kMaxBisectionSteps; ++step) {
    const double mid = 0.5 * (lo + hi);
    if (hi - lo <= tol * std::max(1.0, std::abs(mid)) || mid == lo || mid == hi) return mid;
    const double f_mid = f(mid);
    if (f_mid == 0.0) return mid;
    if ((f_mid < 0.0) == (f_lo < 0.0)) {
      lo = mid;
      f_lo = f_mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

/// First sub-interval of a uniform grid on [lo, hi] where f goes from negative
/// to non-negative.
template <typename F>
std::optional<std::pair<double, double>> first_upward_crossing(F&& f, double lo, double hi,
                                                              int samples) {
  double prev_x = lo;
  double prev_f = f(lo);
  for (int i = 1; i <= samples; ++i) {
    const double x = lo + (hi - lo) * i / samples;
    const double fx = f(x);
    if (prev_f < 0.0 && fx >= 0.0) return std::pair{prev_x, x};
    prev_x = x;
    prev_f = fx;
  }
  return std::nullopt;
}

}  // namespace partial_search::roots
