#include "wtc/asymptotics.hpp"

#include <algorithm>
#include <string>

#include "wtc/estimators.hpp"
#include "wtc/roots.hpp"

namespace wtc {

VarianceReport sigma_tilde_sq(double alpha0, const EstimatorConfig& cfg) {
  if (cfg.kind != EstimatorKind::tilde) throw ConfigError("sigma_tilde_sq needs a tilde configuration");
  return asymptotic_variance(alpha0, cfg);
}

VarianceReport sigma_star_sq(double alpha0, const EstimatorConfig& cfg) {
  if (cfg.kind != EstimatorKind::star) throw ConfigError("sigma_star_sq needs a star configuration");
  return asymptotic_variance(alpha0, cfg);
}

VarianceReport asymptotic_variance(double alpha0, const EstimatorConfig& cfg) {
  if (!(alpha0 > 0.0)) throw DomainError("alpha0 must be > 0");
  cfg.validate();
  const double mu = centering_constant(cfg);
  const BaseFunction h(cfg.c0);
  const double spread = detail::weighted_s_integral(cfg, 1.0, [&](double s) { return h.value(s) - mu; });
  const double numerator = (cfg.v - mu) * (cfg.v - mu) + 2.0 * spread;
  const double denominator = detail::weighted_s_integral(cfg, 1.0, [](double s) { return s * std::log(s); });
  const double prefactor = cfg.kind == EstimatorKind::tilde ? std::exp(cfg.c0) : 1.0;
  const double scale = alpha0 / cfg.c0;
  const double sigma_sq = prefactor * scale * scale * numerator / (denominator * denominator);
  if (!(sigma_sq > 0.0) || !std::isfinite(sigma_sq)) throw Error("asymptotic variance is not positive and finite");
  return {sigma_sq, numerator, denominator, mu, prefactor};
}

double aeff(const EstimatorConfig& cfg, double alpha0) {
  const VarianceReport reference = asymptotic_variance(alpha0, EstimatorConfig::tilde(cfg.c0, -1.0));
  return reference.sigma_sq / asymptotic_variance(alpha0, cfg).sigma_sq;
}

double lambda_general(const DistModel& dist, const EstimatorConfig& cfg, double t) {
  const HuberizedPsi psi(cfg);
  return transformed_expectation(dist, psi, t, [&](double y) { return psi.clipped_from_log(std::log(y), t); }) - psi.mu();
}

double influence(const DistModel& contaminant, const EstimatorConfig& cfg, double alpha0) {
  const HuberizedPsi psi(cfg);
  const double num =
      transformed_expectation(contaminant, psi, alpha0, [&](double y) { return psi.clipped_from_log(std::log(y), alpha0); }) -
      psi.mu();
  const double den = lambda_model(alpha0, alpha0, cfg).derivative;
  return -num / den;
}

GeneralFReport general_root_and_variance(const DistModel& dist, const EstimatorConfig& cfg) {
  const HuberizedPsi psi(cfg);
  auto lambda = [&](double t) {
    return transformed_expectation(dist, psi, t, [&](double y) { return psi.clipped_from_log(std::log(y), t); }) -
           psi.mu();
  };

  double lo, hi;
  if (cfg.kind == EstimatorKind::tilde) {
    lo = kInitialLo;
    hi = kInitialHi;
    while (lambda(lo) > 0.0 && lo > kBracketFloor) lo = std::max(lo * 0.5, kBracketFloor);
    while (lambda(hi) < 0.0 && hi < kBracketCeiling) hi = std::min(hi * 2.0, kBracketCeiling);
  } else {
    lo = cfg.d0;
    hi = cfg.d1;
  }
  const double f_lo = lambda(lo), f_hi = lambda(hi);
  if (f_lo > 0.0 || f_hi < 0.0)
    throw NoRootError("lambda_F has no sign change on [" + std::to_string(lo) + ", " + std::to_string(hi) + "]",
                      f_lo > 0.0 ? NoRootError::Side::lower : NoRootError::Side::upper);
  const RootResult root = solve_bracketed(lambda, lo, hi, f_lo, f_hi, 1e-13);
  const double t0 = root.root;

  const double step = 1e-5 * t0;
  const double slope = (lambda(t0 + step) - lambda(t0 - step)) / (2.0 * step);
  if (!(std::abs(slope) >= 1e-10)) throw DegenerateError("lambda_F'(t0) vanishes");

  const double second_moment = transformed_expectation(dist, psi, t0, [&](double y) {
    const double p = psi.clipped_from_log(std::log(y), t0) - psi.mu();
    return p * p;
  });
  double prefactor = 1.0;
  if (cfg.kind == EstimatorKind::tilde) {
    double atom_at_one = 0.0;
    for (const Atom& a : dist.atoms())
      if (a.location == 1.0) atom_at_one += a.mass;
    prefactor = 1.0 / (1.0 - dist.cdf(1.0) + atom_at_one);
  }
  return {t0, prefactor * second_moment / (slope * slope), slope, lambda(t0), prefactor};
}

}  // namespace wtc
