#pragma once

#include <cmath>
#include <cstdlib>
#include <utility>

namespace wtc {

/// Outcome of a bracketed root search.
struct RootResult {
  double root = 0.0;
  double lo = 0.0;
  double hi = 0.0;
  int iterations = 0;
  bool converged = false;
};

/// Finds a root of `f` inside `[lo, hi]`, given `f(lo) <= 0 <= f(hi)` or
/// `f(lo) >= 0 >= f(hi)`.
///
/// Illinois-modified false position; a bisection step is forced whenever the
/// previous step failed to halve the bracket, so the bracket width at least
/// halves every two evaluations. Stops when the bracket is narrower than
/// `x_tol` (or cannot be split further in floating point) or when `f` hits
/// exactly zero. The returned root is the bracket end with the smaller |f|.
template <class F>
RootResult solve_bracketed(F&& f, double lo, double hi, double f_lo, double f_hi, double x_tol,
                           int max_iter = 400) {
  RootResult out;
  if (f_lo == 0.0) return {lo, lo, lo, 0, true};
  if (f_hi == 0.0) return {hi, hi, hi, 0, true};

  // Work with an increasing function internally.
  const double sign = f_lo < 0.0 ? 1.0 : -1.0;
  double g_lo = sign * f_lo;
  double g_hi = sign * f_hi;
  double w_lo = g_lo;  // Illinois-weighted copies
  double w_hi = g_hi;
  int stuck_side = 0;
  bool force_bisect = false;

  int it = 0;
  for (; it < max_iter; ++it) {
    const double width = hi - lo;
    const double mid = lo + 0.5 * width;
    if (width <= x_tol || mid <= lo || mid >= hi) break;

    double x = mid;
    if (!force_bisect && std::isfinite(w_lo) && std::isfinite(w_hi)) {
      const double s = lo - w_lo * width / (w_hi - w_lo);
      if (std::isfinite(s) && s > lo && s < hi) x = s;
    }
    const double gx = sign * f(x);
    if (gx == 0.0) {
      lo = hi = x;
      g_lo = g_hi = 0.0;
      ++it;
      break;
    }
    if (gx < 0.0) {
      lo = x;
      g_lo = w_lo = gx;
      if (stuck_side == 1) w_hi *= 0.5;
      stuck_side = 1;
    } else {
      hi = x;
      g_hi = w_hi = gx;
      if (stuck_side == -1) w_lo *= 0.5;
      stuck_side = -1;
    }
    force_bisect = (hi - lo) > 0.5 * width;
  }
  out.lo = lo;
  out.hi = hi;
  out.iterations = it;
  out.root = std::abs(g_lo) <= std::abs(g_hi) ? lo : hi;
  out.converged = (hi - lo) <= x_tol || lo + 0.5 * (hi - lo) <= lo || lo + 0.5 * (hi - lo) >= hi;
  return out;
}

template <class F>
RootResult solve_bracketed(F&& f, double lo, double hi, double x_tol, int max_iter = 400) {
  const double f_lo = f(lo);
  const double f_hi = f(hi);
  return solve_bracketed(std::forward<F>(f), lo, hi, f_lo, f_hi, x_tol, max_iter);
}

}  // namespace wtc
