#pragma once

namespace wtc {

/// h(t) = (c0 t - 1) ln t - 1, t > 0.
///
/// For X ~ 1 - exp(-c0 x^a), -h(x^a)/a is the score of the shape a, so h is
/// the building block of every psi-function in the library.
class BaseFunction {
 public:
  explicit BaseFunction(double c0);

  double c0() const noexcept { return c0_; }

  double value(double t) const;
  double derivative(double t) const;
  double second_derivative(double t) const;

  /// h(exp(log_t)) without domain checks; the estimators' inner loop.
  double value_from_log(double log_t) const noexcept;

 private:
  double c0_;
};

double h_eval(double t, double c0);
double h_prime(double t, double c0);
double h_second(double t, double c0);

/// argmin of h over [1, inf): 1 when c0 >= 1, otherwise the stationary point.
double find_t0(double c0);

/// Unique s >= t0 with h(s) = y, for y >= h(t0). h is strictly increasing there.
double increasing_branch_inverse(double y, double c0);

/// Generalized inverse inf{t >= 1 : h(t) >= y} for y >= -1.
///
/// When c0 < 1, h dips below -1 on (1, t1) and the infimum jumps from 1 (at
/// y = -1) to t1 for y just above -1.
double h_tilde_inverse(double y, double c0);

/// Cached quantities of h for the censored estimator with shape range [d0, d1].
class HuberizedModel {
 public:
  HuberizedModel(double c0, double d0, double d1);

  double c0() const noexcept { return c0_; }
  double d0() const noexcept { return d0_; }
  double d1() const noexcept { return d1_; }
  /// argmin of h over [1, inf)
  double t0() const noexcept { return t0_; }
  /// t0^(1/d0), the censoring point
  double x0() const noexcept { return x0_; }
  /// h(x0^d1), the smallest admissible lower clip
  double v0() const noexcept { return v0_; }

  /// Inverse of h restricted to [t0, inf).
  double h_star_inverse(double y) const;

 private:
  double c0_, d0_, d1_, t0_, x0_, v0_;
};

}  // namespace wtc
