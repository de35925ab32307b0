#include "wtc/base_function.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "wtc/errors.hpp"
#include "wtc/roots.hpp"

namespace wtc {

namespace {

void require_positive_c0(double c0) {
  if (!(c0 > 0.0) || !std::isfinite(c0)) throw DomainError("c0 must be finite and > 0, got " + std::to_string(c0));
}

void require_positive_t(double t) {
  if (!(t > 0.0)) throw DomainError("h is defined for t > 0, got " + std::to_string(t));
}

// Bisection/secant on h - y over [lo, hi], expanding hi by doubling.
double invert_increasing(double y, double c0, double lo) {
  auto f = [&](double t) { return (c0 * t - 1.0) * std::log(t) - 1.0 - y; };
  const double f_lo = f(lo);
  if (f_lo >= 0.0) return lo;
  double hi = std::max(lo, 2.0);
  double f_hi = f(hi);
  for (int i = 0; f_hi < 0.0; ++i) {
    if (i > 1100) throw ConvergenceError("cannot bracket h^{-1}(" + std::to_string(y) + ")");
    hi *= 2.0;
    f_hi = f(hi);
  }
  // Solved to full floating-point resolution (well inside 1e-12).
  return solve_bracketed(f, lo, hi, f_lo, f_hi, 0.0).root;
}

}  // namespace

BaseFunction::BaseFunction(double c0) : c0_(c0) { require_positive_c0(c0); }

double BaseFunction::value(double t) const {
  require_positive_t(t);
  return (c0_ * t - 1.0) * std::log(t) - 1.0;
}

double BaseFunction::derivative(double t) const {
  require_positive_t(t);
  return c0_ * (std::log(t) + 1.0) - 1.0 / t;
}

double BaseFunction::second_derivative(double t) const {
  require_positive_t(t);
  return c0_ / t + 1.0 / (t * t);
}

double BaseFunction::value_from_log(double log_t) const noexcept {
  return (c0_ * std::exp(log_t) - 1.0) * log_t - 1.0;
}

double h_eval(double t, double c0) { return BaseFunction(c0).value(t); }
double h_prime(double t, double c0) { return BaseFunction(c0).derivative(t); }
double h_second(double t, double c0) { return BaseFunction(c0).second_derivative(t); }

double find_t0(double c0) {
  require_positive_c0(c0);
  // h'(1) = c0 - 1; h is convex, so the minimum over [1, inf) sits at 1 when c0 >= 1.
  if (c0 >= 1.0) return 1.0;
  auto dh = [c0](double t) { return c0 * (std::log(t) + 1.0) - 1.0 / t; };
  double hi = 2.0;
  while (dh(hi) <= 0.0) hi *= 2.0;
  return solve_bracketed(dh, 1.0, hi, 0.0).root;
}

double increasing_branch_inverse(double y, double c0) {
  const double t0 = find_t0(c0);
  const double floor = (c0 * t0 - 1.0) * std::log(t0) - 1.0;
  if (!(y >= floor)) throw DomainError("y = " + std::to_string(y) + " is below min h = " + std::to_string(floor));
  if (std::isinf(y)) return y;
  return invert_increasing(y, c0, t0);
}

double h_tilde_inverse(double y, double c0) {
  require_positive_c0(c0);
  if (!(y >= -1.0)) throw DomainError("h_tilde_inverse needs y >= -1, got " + std::to_string(y));
  if (y == -1.0) return 1.0;
  return increasing_branch_inverse(y, c0);
}

HuberizedModel::HuberizedModel(double c0, double d0, double d1) : c0_(c0), d0_(d0), d1_(d1) {
  require_positive_c0(c0);
  if (!(d0 > 0.0) || !(d1 >= d0) || !std::isfinite(d1))
    throw DomainError("need 0 < d0 <= d1, got d0 = " + std::to_string(d0) + ", d1 = " + std::to_string(d1));
  t0_ = find_t0(c0);
  x0_ = std::pow(t0_, 1.0 / d0);
  v0_ = (c0 * std::pow(x0_, d1) - 1.0) * std::log(std::pow(x0_, d1)) - 1.0;
}

double HuberizedModel::h_star_inverse(double y) const {
  const double floor = (c0_ * t0_ - 1.0) * std::log(t0_) - 1.0;
  if (!(y >= floor)) throw DomainError("h_star_inverse needs y >= h(t0) = " + std::to_string(floor));
  if (std::isinf(y)) return y;
  return invert_increasing(y, c0_, t0_);
}

}  // namespace wtc
