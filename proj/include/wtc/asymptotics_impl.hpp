#pragma once

#include <cmath>

#include "wtc/errors.hpp"
#include "wtc/quadrature.hpp"

namespace wtc {

template <class G>
double transformed_expectation(const DistModel& dist, const HuberizedPsi& psi, double t, G&& g) {
  const EstimatorConfig& cfg = psi.config();
  const double floor = psi.support_floor();
  const double y_v = std::pow(lower_breakpoint(cfg), 1.0 / t);
  const double y_u = std::isinf(cfg.u) ? kInfinity : std::pow(upper_breakpoint(cfg), 1.0 / t);

  double atom_at_floor = 0.0;
  double atoms_above = 0.0;
  for (const Atom& a : dist.atoms()) {
    if (a.location == floor)
      atom_at_floor += a.mass;
    else if (a.location > floor)
      atoms_above += a.mass * g(a.location);
  }
  auto integrand = [&](double y) {
    const double p = dist.pdf(y);
    return p == 0.0 ? 0.0 : g(y) * p;
  };
  const double continuous = integrate(integrand, floor, kInfinity, {y_v, y_u});
  if (!std::isfinite(continuous)) throw Error("expectation under " + dist.describe() + " is not finite");

  if (cfg.kind == EstimatorKind::tilde) {
    const double mass = 1.0 - dist.cdf(floor) + atom_at_floor;
    if (!(mass > 0.0)) throw DegenerateError(dist.describe() + " puts no mass on [1, inf)");
    return (continuous + atoms_above + atom_at_floor * g(floor)) / mass;
  }
  // Censoring: everything at or below x0 lands on x0.
  return continuous + atoms_above + dist.cdf(floor) * g(floor);
}

}  // namespace wtc
