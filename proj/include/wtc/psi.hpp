#pragma once

#include <cmath>
#include <limits>
#include <string>

#include "wtc/base_function.hpp"

namespace wtc {

enum class EstimatorKind { tilde, star };

std::string to_string(EstimatorKind kind);
EstimatorKind parse_estimator_kind(const std::string& name);

/// [y]_v^u = min(max(y, v), u).
struct ClipBounds {
  double lower;
  double upper;

  double clip(double y) const noexcept { return y < lower ? lower : (y > upper ? upper : y); }
};

/// Tuning constants of one huberized estimator.
///
/// `tilde` works on the sample truncated at 1 and needs -1 <= v < u.
/// `star` works on the sample censored at x0 = t0^(1/d0) and needs
/// h(x0^d1) <= v < u and 0 < d0 <= d1. `u` may be +infinity.
struct EstimatorConfig {
  EstimatorKind kind = EstimatorKind::tilde;
  double c0 = 1.0;
  double v = 0.0;
  double u = std::numeric_limits<double>::infinity();
  double d0 = 1.0;
  double d1 = 2.0;

  static EstimatorConfig tilde(double c0, double v, double u = std::numeric_limits<double>::infinity());
  static EstimatorConfig star(double c0, double v, double u, double d0, double d1);

  /// Throws ConfigError when the bounds are inadmissible.
  void validate() const;
  ClipBounds bounds() const noexcept { return {v, u}; }
  HuberizedModel model() const { return HuberizedModel(c0, d0, d1); }
};

/// mu~ = v + int_v^u exp{-c0 [h~^{-1}(z) - 1]} dz, evaluated in the s = h^{-1}(z) domain.
double mu_tilde(const EstimatorConfig& cfg);
/// mu* = v + int_v^u exp{-c0 (h*)^{-1}(z)} dz.
double mu_star(const EstimatorConfig& cfg);
/// mu~ or mu* depending on cfg.kind; memoized per configuration.
double centering_constant(const EstimatorConfig& cfg);

/// Lower end of the s-domain integrals: the point on the increasing branch of h where h = v.
double lower_breakpoint(const EstimatorConfig& cfg);
/// Upper end: where h = u (infinity when u is).
double upper_breakpoint(const EstimatorConfig& cfg);

/// A huberized psi-function with its centering constant resolved.
class HuberizedPsi {
 public:
  explicit HuberizedPsi(EstimatorConfig cfg);

  const EstimatorConfig& config() const noexcept { return cfg_; }
  const HuberizedModel& model() const noexcept { return model_; }
  double mu() const noexcept { return mu_; }
  /// 1 for tilde, x0 for star.
  double support_floor() const noexcept;

  /// psi(y; alpha) with the domain checks of the estimator kind.
  double operator()(double y, double alpha) const;
  /// [h(y^alpha)]_v^u without centering or checks, from log y.
  double clipped_from_log(double log_y, double alpha) const noexcept {
    const double lt = alpha * log_y;
    return cfg_.bounds().clip((cfg_.c0 * std::exp(lt) - 1.0) * lt - 1.0);
  }

 private:
  EstimatorConfig cfg_;
  HuberizedModel model_;
  double mu_;
};

double psi_tilde(double y, double alpha, const EstimatorConfig& cfg);
double psi_star(double y, double alpha, const EstimatorConfig& cfg);

/// Model-side lambda(alpha) = E[psi(X; alpha)] under the reference law with
/// shape alpha0, together with its closed-form derivative in alpha.
struct LambdaValue {
  double value;
  double derivative;
};

LambdaValue lambda_model_tilde(double alpha, double alpha0, const EstimatorConfig& cfg);
LambdaValue lambda_model_star(double alpha, double alpha0, const EstimatorConfig& cfg);
LambdaValue lambda_model(double alpha, double alpha0, const EstimatorConfig& cfg);

namespace detail {

/// int_{s_v}^{s_u} g(s) w(s) h'(s) ds with w(s) = exp{-c0 (s^r - shift)}, the
/// upper end cut where w < 1e-16. shift is 1 for tilde, 0 for star.
template <class G>
double weighted_s_integral(const EstimatorConfig& cfg, double r, G&& g);

}  // namespace detail

}  // namespace wtc

#include "wtc/psi_impl.hpp"
