#pragma once

#include "wtc/distributions.hpp"
#include "wtc/psi.hpp"

namespace wtc {

/// Closed-form asymptotic variance of sqrt(n)(T_n - alpha0) under the reference Weibull model.
///
/// sigma_sq = prefactor * (alpha0/c0)^2 * numerator / denominator^2, where
///   numerator   = (v - mu)^2 + 2 int [h(s) - mu] w(s) dh(s)   (the variance of the clipped score)
///   denominator = int s ln s w(s) dh(s)
/// and w(s) = exp{-c0 (s - 1)}, prefactor = e^c0 for tilde; w(s) = exp{-c0 s},
/// prefactor = 1 for star.
struct VarianceReport {
  double sigma_sq;
  double numerator;
  double denominator;
  double mu;
  double prefactor;
};

VarianceReport sigma_tilde_sq(double alpha0, const EstimatorConfig& cfg);
VarianceReport sigma_star_sq(double alpha0, const EstimatorConfig& cfg);
VarianceReport asymptotic_variance(double alpha0, const EstimatorConfig& cfg);

/// Asymptotic efficiency relative to the truncated-sample MLE, tilde(c0, -1, inf).
/// Free of alpha0; the argument only exists to let callers check that.
double aeff(const EstimatorConfig& cfg, double alpha0 = 1.0);

/// E[g(Y)] for Y distributed as the truncated (Y | Y >= 1) or censored
/// (max(Y, x0)) transform of `dist`, matching the estimator kind of `psi`.
/// Kinks of psi(.; t) are used as quadrature breakpoints.
template <class G>
double transformed_expectation(const DistModel& dist, const HuberizedPsi& psi, double t, G&& g);

/// lambda_F(t) = E[psi(Y; t)] under the transformed law of F.
double lambda_general(const DistModel& dist, const EstimatorConfig& cfg, double t);

/// IF(T; F_W(alpha0), G) = -E_G~[psi(Y; alpha0)] / lambda'(alpha0).
///
/// The truncated transform conditions G on [1, inf); the censored transform
/// moves G's mass below x0 into an atom at x0.
double influence(const DistModel& contaminant, const EstimatorConfig& cfg, double alpha0);

/// Root and sandwich variance of the M-functional under a general F.
struct GeneralFReport {
  double t0;
  double sigma_sq;
  double lambda_prime;
  /// lambda_F at the returned root
  double residual;
  /// 1/P_F(X >= 1) for tilde (the n-versus-m rescaling), 1 for star
  double prefactor;
};

GeneralFReport general_root_and_variance(const DistModel& dist, const EstimatorConfig& cfg);

}  // namespace wtc

#include "wtc/asymptotics_impl.hpp"
