#pragma once

#include <cstddef>
#include <memory>
#include <string>
#include <variant>
#include <vector>

#include "wtc/rng.hpp"

namespace wtc {

class DistModel;

/// F(x) = 1 - exp(-c0 x^alpha), x > 0.
struct Weibull {
  double c0;
  double alpha;
};

/// Weibull conditioned on X >= 1: F(x) = 1 - exp(-c0 (x^alpha - 1)), x >= 1.
struct TruncatedWeibull {
  double c0;
  double alpha;
};

/// max(X, x0) for X ~ Weibull; an atom of mass F_W(x0) sits at x0.
struct CensoredWeibull {
  double c0;
  double alpha;
  double x0;
};

/// Density rate^shape / Gamma(shape) x^(shape-1) exp(-rate x).
struct Gamma {
  double rate;
  double shape;
};

/// (1 - weight) base + weight contaminant.
struct Mixture {
  double weight;
  std::shared_ptr<const DistModel> base;
  std::shared_ptr<const DistModel> contaminant;
};

struct Atom {
  double location;
  double mass;
};

/// A distribution on (0, inf) that can be evaluated, inverted and sampled.
class DistModel {
 public:
  using Kind = std::variant<Weibull, TruncatedWeibull, CensoredWeibull, Gamma, Mixture>;

  static DistModel weibull(double c0, double alpha);
  static DistModel truncated_weibull(double c0, double alpha);
  static DistModel censored_weibull(double c0, double alpha, double x0);
  static DistModel gamma(double rate, double shape);
  static DistModel mixture(double weight, DistModel base, DistModel contaminant);

  const Kind& kind() const noexcept { return kind_; }
  std::string describe() const;

  double cdf(double x) const;
  /// Density of the absolutely continuous part.
  double pdf(double x) const;
  /// Point masses (only the censored variant and mixtures containing it have any).
  std::vector<Atom> atoms() const;
  /// Generalized inverse inf{x : F(x) >= p}, p in (0, 1).
  double quantile(double p) const;

  double sample(Rng& rng) const;
  std::vector<double> sample(Rng& rng, std::size_t n) const;

 private:
  explicit DistModel(Kind kind) : kind_(std::move(kind)) {}

  Kind kind_;
};

}  // namespace wtc
