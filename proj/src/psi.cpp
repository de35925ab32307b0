#include "wtc/psi.hpp"

#include <map>
#include <mutex>
#include <shared_mutex>
#include <tuple>

#include "wtc/errors.hpp"

namespace wtc {

std::string to_string(EstimatorKind kind) { return kind == EstimatorKind::tilde ? "tilde" : "star"; }

EstimatorKind parse_estimator_kind(const std::string& name) {
  if (name == "tilde") return EstimatorKind::tilde;
  if (name == "star") return EstimatorKind::star;
  throw ConfigError("unknown estimator kind '" + name + "' (expected tilde or star)");
}

EstimatorConfig EstimatorConfig::tilde(double c0, double v, double u) {
  EstimatorConfig cfg;
  cfg.kind = EstimatorKind::tilde;
  cfg.c0 = c0;
  cfg.v = v;
  cfg.u = u;
  cfg.validate();
  return cfg;
}

EstimatorConfig EstimatorConfig::star(double c0, double v, double u, double d0, double d1) {
  EstimatorConfig cfg;
  cfg.kind = EstimatorKind::star;
  cfg.c0 = c0;
  cfg.v = v;
  cfg.u = u;
  cfg.d0 = d0;
  cfg.d1 = d1;
  cfg.validate();
  return cfg;
}

void EstimatorConfig::validate() const {
  if (!(c0 > 0.0) || !std::isfinite(c0)) throw ConfigError("c0 must be finite and > 0");
  if (std::isnan(v) || std::isnan(u) || !std::isfinite(v)) throw ConfigError("v must be finite and u must not be NaN");
  if (!(v < u)) throw ConfigError("need v < u, got v = " + std::to_string(v) + ", u = " + std::to_string(u));
  if (kind == EstimatorKind::tilde) {
    if (v < -1.0) throw ConfigError("tilde estimator needs v >= -1, got " + std::to_string(v));
    return;
  }
  if (!(d0 > 0.0) || !(d1 >= d0) || !std::isfinite(d1))
    throw ConfigError("star estimator needs 0 < d0 <= d1, got d0 = " + std::to_string(d0) + ", d1 = " + std::to_string(d1));
  const double v0 = model().v0();
  if (v < v0) throw ConfigError("star estimator needs v >= v0 = h(x0^d1) = " + std::to_string(v0) + ", got " + std::to_string(v));
}

double lower_breakpoint(const EstimatorConfig& cfg) {
  // For star, v >= v0 = h(x0^d1) >= h(t0), so the branch inverse lands at or beyond x0^d1.
  return increasing_branch_inverse(cfg.v, cfg.c0);
}

double upper_breakpoint(const EstimatorConfig& cfg) {
  if (std::isinf(cfg.u)) return kInfinity;
  return increasing_branch_inverse(cfg.u, cfg.c0);
}

double mu_tilde(const EstimatorConfig& cfg) {
  if (cfg.kind != EstimatorKind::tilde) throw ConfigError("mu_tilde called with a star configuration");
  cfg.validate();
  return cfg.v + detail::weighted_s_integral(cfg, 1.0, [](double) { return 1.0; });
}

double mu_star(const EstimatorConfig& cfg) {
  if (cfg.kind != EstimatorKind::star) throw ConfigError("mu_star called with a tilde configuration");
  cfg.validate();
  return cfg.v + detail::weighted_s_integral(cfg, 1.0, [](double) { return 1.0; });
}

namespace {

using CacheKey = std::tuple<int, double, double, double, double, double>;

class MuCache {
 public:
  double get(const EstimatorConfig& cfg) {
    const bool star = cfg.kind == EstimatorKind::star;
    const CacheKey key{static_cast<int>(cfg.kind), cfg.c0, cfg.v, cfg.u, star ? cfg.d0 : 0.0, star ? cfg.d1 : 0.0};
    {
      std::shared_lock lock(mutex_);
      if (auto it = values_.find(key); it != values_.end()) return it->second;
    }
    const double mu = star ? mu_star(cfg) : mu_tilde(cfg);
    std::unique_lock lock(mutex_);
    return values_.emplace(key, mu).first->second;
  }

 private:
  std::shared_mutex mutex_;
  std::map<CacheKey, double> values_;
};

MuCache& mu_cache() {
  static MuCache cache;
  return cache;
}

}  // namespace

double centering_constant(const EstimatorConfig& cfg) { return mu_cache().get(cfg); }

HuberizedPsi::HuberizedPsi(EstimatorConfig cfg)
    : cfg_((cfg.validate(), cfg)), model_(cfg.model()), mu_(centering_constant(cfg)) {}

double HuberizedPsi::support_floor() const noexcept { return cfg_.kind == EstimatorKind::tilde ? 1.0 : model_.x0(); }

double HuberizedPsi::operator()(double y, double alpha) const {
  if (!(alpha > 0.0)) throw DomainError("alpha must be > 0, got " + std::to_string(alpha));
  if (cfg_.kind == EstimatorKind::tilde) {
    if (!(y >= 1.0)) throw DomainError("psi_tilde needs y >= 1 (truncate the sample first), got " + std::to_string(y));
  } else {
    if (!(y >= model_.x0()))
      throw DomainError("psi_star needs y >= x0 = " + std::to_string(model_.x0()) + ", got " + std::to_string(y));
    if (alpha < cfg_.d0 || alpha > cfg_.d1)
      throw DomainError("psi_star needs alpha in [d0, d1], got " + std::to_string(alpha));
  }
  return clipped_from_log(std::log(y), alpha) - mu_;
}

double psi_tilde(double y, double alpha, const EstimatorConfig& cfg) {
  if (cfg.kind != EstimatorKind::tilde) throw ConfigError("psi_tilde called with a star configuration");
  return HuberizedPsi(cfg)(y, alpha);
}

double psi_star(double y, double alpha, const EstimatorConfig& cfg) {
  if (cfg.kind != EstimatorKind::star) throw ConfigError("psi_star called with a tilde configuration");
  return HuberizedPsi(cfg)(y, alpha);
}

namespace {

LambdaValue lambda_model_impl(double alpha, double alpha0, const EstimatorConfig& cfg) {
  if (!(alpha > 0.0) || !(alpha0 > 0.0)) throw DomainError("alpha and alpha0 must be > 0");
  cfg.validate();
  const double r = alpha0 / alpha;
  const double mean = cfg.v + detail::weighted_s_integral(cfg, r, [](double) { return 1.0; });
  const double slope = detail::weighted_s_integral(cfg, r, [r](double s) { return std::pow(s, r) * std::log(s); });
  return {mean - centering_constant(cfg), cfg.c0 * alpha0 / (alpha * alpha) * slope};
}

}  // namespace

LambdaValue lambda_model_tilde(double alpha, double alpha0, const EstimatorConfig& cfg) {
  if (cfg.kind != EstimatorKind::tilde) throw ConfigError("lambda_model_tilde called with a star configuration");
  return lambda_model_impl(alpha, alpha0, cfg);
}

LambdaValue lambda_model_star(double alpha, double alpha0, const EstimatorConfig& cfg) {
  if (cfg.kind != EstimatorKind::star) throw ConfigError("lambda_model_star called with a tilde configuration");
  return lambda_model_impl(alpha, alpha0, cfg);
}

LambdaValue lambda_model(double alpha, double alpha0, const EstimatorConfig& cfg) {
  return lambda_model_impl(alpha, alpha0, cfg);
}

}  // namespace wtc
