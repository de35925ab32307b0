#pragma once

#include <algorithm>
#include <cmath>

#include "wtc/quadrature.hpp"

namespace wtc::detail {

/// Weight below which the s-domain integrands are treated as zero.
inline constexpr double kWeightCutoff = 1e-16;

template <class G>
double weighted_s_integral(const EstimatorConfig& cfg, double r, G&& g) {
  const double shift = cfg.kind == EstimatorKind::tilde ? 1.0 : 0.0;
  const double c0 = cfg.c0;
  const double s_lo = lower_breakpoint(cfg);
  // exp{-c0 (s^r - shift)} < cutoff  <=>  s > (shift - ln(cutoff)/c0)^(1/r)
  const double s_cut = std::pow(shift - std::log(kWeightCutoff) / c0, 1.0 / r);
  const double s_hi = std::min(upper_breakpoint(cfg), s_cut);
  if (!(s_hi > s_lo)) return 0.0;
  auto integrand = [&](double s) {
    const double dh = c0 * (std::log(s) + 1.0) - 1.0 / s;
    return g(s) * std::exp(-c0 * (std::pow(s, r) - shift)) * dh;
  };
  return integrate(integrand, s_lo, s_hi);
}

}  // namespace wtc::detail
