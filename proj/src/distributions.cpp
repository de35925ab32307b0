#include "wtc/distributions.hpp"

#include <cmath>
#include <sstream>

#include <boost/math/special_functions/gamma.hpp>

#include "wtc/errors.hpp"
#include "wtc/roots.hpp"

namespace wtc {

namespace {

void require_positive(double x, const char* name) {
  if (!(x > 0.0) || !std::isfinite(x))
    throw DomainError(std::string(name) + " must be finite and > 0, got " + std::to_string(x));
}

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

double weibull_quantile(double c0, double alpha, double p) { return std::pow(-std::log1p(-p) / c0, 1.0 / alpha); }

}  // namespace

DistModel DistModel::weibull(double c0, double alpha) {
  require_positive(c0, "c0");
  require_positive(alpha, "alpha");
  return DistModel(Weibull{c0, alpha});
}

DistModel DistModel::truncated_weibull(double c0, double alpha) {
  require_positive(c0, "c0");
  require_positive(alpha, "alpha");
  return DistModel(TruncatedWeibull{c0, alpha});
}

DistModel DistModel::censored_weibull(double c0, double alpha, double x0) {
  require_positive(c0, "c0");
  require_positive(alpha, "alpha");
  require_positive(x0, "x0");
  return DistModel(CensoredWeibull{c0, alpha, x0});
}

DistModel DistModel::gamma(double rate, double shape) {
  require_positive(rate, "gamma rate");
  require_positive(shape, "gamma shape");
  return DistModel(Gamma{rate, shape});
}

DistModel DistModel::mixture(double weight, DistModel base, DistModel contaminant) {
  if (!(weight >= 0.0 && weight <= 1.0)) throw DomainError("mixture weight must lie in [0, 1], got " + std::to_string(weight));
  return DistModel(Mixture{weight, std::make_shared<const DistModel>(std::move(base)),
                           std::make_shared<const DistModel>(std::move(contaminant))});
}

std::string DistModel::describe() const {
  std::ostringstream os;
  os.precision(17);
  std::visit(Overloaded{
                 [&](const Weibull& d) { os << "weibull(c0=" << d.c0 << ", alpha=" << d.alpha << ")"; },
                 [&](const TruncatedWeibull& d) { os << "truncated-weibull(c0=" << d.c0 << ", alpha=" << d.alpha << ")"; },
                 [&](const CensoredWeibull& d) {
                   os << "censored-weibull(c0=" << d.c0 << ", alpha=" << d.alpha << ", x0=" << d.x0 << ")";
                 },
                 [&](const Gamma& d) { os << "gamma(rate=" << d.rate << ", shape=" << d.shape << ")"; },
                 [&](const Mixture& d) {
                   os << "mixture(eps=" << d.weight << ", " << d.base->describe() << ", " << d.contaminant->describe() << ")";
                 },
             },
             kind_);
  return os.str();
}

double DistModel::cdf(double x) const {
  return std::visit(Overloaded{
                        [&](const Weibull& d) { return x <= 0.0 ? 0.0 : -std::expm1(-d.c0 * std::pow(x, d.alpha)); },
                        [&](const TruncatedWeibull& d) {
                          return x <= 1.0 ? 0.0 : -std::expm1(-d.c0 * (std::pow(x, d.alpha) - 1.0));
                        },
                        [&](const CensoredWeibull& d) {
                          return x < d.x0 ? 0.0 : -std::expm1(-d.c0 * std::pow(x, d.alpha));
                        },
                        [&](const Gamma& d) { return x <= 0.0 ? 0.0 : boost::math::gamma_p(d.shape, d.rate * x); },
                        [&](const Mixture& d) {
                          return (1.0 - d.weight) * d.base->cdf(x) + d.weight * d.contaminant->cdf(x);
                        },
                    },
                    kind_);
}

double DistModel::pdf(double x) const {
  return std::visit(Overloaded{
                        [&](const Weibull& d) {
                          if (x <= 0.0) return 0.0;
                          const double xa = std::pow(x, d.alpha);
                          return d.c0 * d.alpha * xa / x * std::exp(-d.c0 * xa);
                        },
                        [&](const TruncatedWeibull& d) {
                          if (x < 1.0) return 0.0;
                          const double xa = std::pow(x, d.alpha);
                          return d.c0 * d.alpha * xa / x * std::exp(-d.c0 * (xa - 1.0));
                        },
                        [&](const CensoredWeibull& d) {
                          if (x <= d.x0) return 0.0;
                          const double xa = std::pow(x, d.alpha);
                          return d.c0 * d.alpha * xa / x * std::exp(-d.c0 * xa);
                        },
                        [&](const Gamma& d) {
                          if (x <= 0.0) return 0.0;
                          return d.rate * boost::math::gamma_p_derivative(d.shape, d.rate * x);
                        },
                        [&](const Mixture& d) {
                          return (1.0 - d.weight) * d.base->pdf(x) + d.weight * d.contaminant->pdf(x);
                        },
                    },
                    kind_);
}

std::vector<Atom> DistModel::atoms() const {
  if (const auto* c = std::get_if<CensoredWeibull>(&kind_))
    return {Atom{c->x0, -std::expm1(-c->c0 * std::pow(c->x0, c->alpha))}};
  if (const auto* m = std::get_if<Mixture>(&kind_)) {
    std::vector<Atom> out;
    for (Atom a : m->base->atoms()) out.push_back({a.location, (1.0 - m->weight) * a.mass});
    for (Atom a : m->contaminant->atoms()) out.push_back({a.location, m->weight * a.mass});
    return out;
  }
  return {};
}

double DistModel::quantile(double p) const {
  if (!(p > 0.0 && p < 1.0)) throw DomainError("quantile needs p in (0, 1), got " + std::to_string(p));
  return std::visit(Overloaded{
                        [&](const Weibull& d) { return weibull_quantile(d.c0, d.alpha, p); },
                        [&](const TruncatedWeibull& d) {
                          return std::pow(1.0 - std::log1p(-p) / d.c0, 1.0 / d.alpha);
                        },
                        [&](const CensoredWeibull& d) {
                          const double q = weibull_quantile(d.c0, d.alpha, p);
                          return q < d.x0 ? d.x0 : q;
                        },
                        [&](const Gamma& d) { return boost::math::gamma_p_inv(d.shape, p) / d.rate; },
                        [&](const Mixture& d) {
                          if (d.weight == 0.0) return d.base->quantile(p);
                          if (d.weight == 1.0) return d.contaminant->quantile(p);
                          // F is bracketed by its components' quantiles at p.
                          const double a = d.base->quantile(p);
                          const double b = d.contaminant->quantile(p);
                          double lo = std::min(a, b);
                          double hi = std::max(a, b);
                          if (lo == hi) return lo;
                          auto f = [&](double x) { return cdf(x) - p; };
                          return solve_bracketed(f, lo, hi, 0.0).hi;
                        },
                    },
                    kind_);
}

double DistModel::sample(Rng& rng) const {
  return std::visit(Overloaded{
                        [&](const Weibull& d) { return weibull_quantile(d.c0, d.alpha, rng.uniform_open()); },
                        [&](const TruncatedWeibull& d) {
                          return std::pow(1.0 - std::log1p(-rng.uniform_open()) / d.c0, 1.0 / d.alpha);
                        },
                        [&](const CensoredWeibull& d) {
                          const double x = weibull_quantile(d.c0, d.alpha, rng.uniform_open());
                          return x < d.x0 ? d.x0 : x;
                        },
                        [&](const Gamma& d) { return rng.gamma(d.shape, d.rate); },
                        [&](const Mixture& d) {
                          const bool contaminated = rng.uniform() < d.weight;
                          return contaminated ? d.contaminant->sample(rng) : d.base->sample(rng);
                        },
                    },
                    kind_);
}

std::vector<double> DistModel::sample(Rng& rng, std::size_t n) const {
  std::vector<double> out(n);
  for (auto& x : out) x = sample(rng);
  return out;
}

}  // namespace wtc
