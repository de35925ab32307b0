#include "wtc/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "wtc/errors.hpp"
#include "wtc/rng.hpp"
#include "wtc/roots.hpp"

namespace wtc {

EmpiricalLambda::EmpiricalLambda(const SampleSummary& sample, const EstimatorConfig& cfg) : psi_(cfg) {
  const auto sorted = sample.sorted();
  if (cfg.kind == EstimatorKind::tilde) {
    const auto first = std::lower_bound(sorted.begin(), sorted.end(), 1.0);
    logs_.reserve(static_cast<std::size_t>(sorted.end() - first));
    for (auto it = first; it != sorted.end(); ++it) logs_.push_back(std::log(*it));
  } else {
    const double log_x0 = std::log(psi_.model().x0());
    logs_.reserve(sorted.size());
    for (double x : sorted) logs_.push_back(std::max(std::log(x), log_x0));
  }
}

double EmpiricalLambda::operator()(double t) const noexcept {
  double sum = 0.0;
  for (double l : logs_) sum += psi_.clipped_from_log(l, t);
  return sum - static_cast<double>(logs_.size()) * psi_.mu();
}

EstimateResult estimate_tilde(const SampleSummary& sample, const EstimatorConfig& cfg) {
  if (cfg.kind != EstimatorKind::tilde) throw ConfigError("estimate_tilde needs a tilde configuration");
  const EmpiricalLambda lambda(sample, cfg);
  if (lambda.count() < 2)
    throw InsufficientDataError("truncated estimator needs at least 2 observations >= 1, got " +
                                std::to_string(lambda.count()));

  double lo = kInitialLo, hi = kInitialHi;
  double f_lo = lambda(lo), f_hi = lambda(hi);
  while (f_lo > 0.0 && lo > kBracketFloor) {
    lo = std::max(lo * 0.5, kBracketFloor);
    f_lo = lambda(lo);
  }
  while (f_hi < 0.0 && hi < kBracketCeiling) {
    hi = std::min(hi * 2.0, kBracketCeiling);
    f_hi = lambda(hi);
  }
  if (f_lo > 0.0)
    throw NoRootError("empirical lambda is positive down to t = 1e-4: observations saturate the upper clip",
                      NoRootError::Side::lower);
  if (f_hi < 0.0)
    throw NoRootError("empirical lambda is negative up to t = 1e4: observations saturate the lower clip",
                      NoRootError::Side::upper);

  const RootResult r = solve_bracketed(lambda, lo, hi, f_lo, f_hi, kRootTol);
  return {r.root, r.iterations, r.lo, r.hi, lambda.count(), r.converged, false};
}

EstimateResult estimate_star(const SampleSummary& sample, const EstimatorConfig& cfg) {
  if (cfg.kind != EstimatorKind::star) throw ConfigError("estimate_star needs a star configuration");
  if (sample.size() < 2) throw InsufficientDataError("censored estimator needs at least 2 observations");
  const EmpiricalLambda lambda(sample, cfg);
  const double lo = cfg.d0, hi = cfg.d1;
  const double f_lo = lambda(lo), f_hi = lambda(hi);
  if (f_lo == f_hi && f_lo != 0.0)
    throw NoRootError("empirical lambda is constant on [d0, d1]: every censored observation saturates the clip",
                      NoRootError::Side::flat);
  if (f_lo > 0.0) return {lo, 0, lo, lo, lambda.count(), true, true};
  if (f_hi < 0.0) return {hi, 0, hi, hi, lambda.count(), true, true};
  const RootResult r = solve_bracketed(lambda, lo, hi, f_lo, f_hi, kRootTol);
  return {r.root, r.iterations, r.lo, r.hi, lambda.count(), r.converged, false};
}

EstimateResult estimate(const SampleSummary& sample, const EstimatorConfig& cfg) {
  return cfg.kind == EstimatorKind::tilde ? estimate_tilde(sample, cfg) : estimate_star(sample, cfg);
}

EstimateResult mle_truncated(const SampleSummary& sample, double c0) {
  return estimate_tilde(sample, EstimatorConfig::tilde(c0, -1.0));
}

namespace {

// Profile score of the two-parameter Weibull shape and its derivative, with
// the log-sample shifted by its maximum so x^a never overflows.
struct Profile {
  std::vector<double> logs;
  double max_log = 0.0;
  double mean_log = 0.0;

  std::pair<double, double> operator()(double a) const {
    double s0 = 0.0, s1 = 0.0, s2 = 0.0;
    for (double l : logs) {
      const double w = std::exp(a * (l - max_log));
      s0 += w;
      s1 += w * l;
      s2 += w * l * l;
    }
    const double m1 = s1 / s0;
    const double var = std::max(s2 / s0 - m1 * m1, 0.0);
    return {m1 - 1.0 / a - mean_log, var + 1.0 / (a * a)};
  }
};

}  // namespace

WeibullFit fit_weibull(const SampleSummary& sample) {
  const auto sorted = sample.sorted();
  const std::size_t n = sorted.size();
  if (n < 2) throw InsufficientDataError("Weibull MLE needs at least 2 observations");
  if (sorted.front() == sorted.back()) throw DegenerateError("Weibull MLE is undefined when all observations are equal");

  Profile g;
  g.logs.reserve(n);
  for (double x : sorted) g.logs.push_back(std::log(x));
  g.max_log = g.logs.back();
  g.mean_log = std::accumulate(g.logs.begin(), g.logs.end(), 0.0) / static_cast<double>(n);

  double lo = kInitialLo, hi = kInitialHi;
  while (g(lo).first > 0.0) {
    lo *= 0.5;
    if (lo < 1e-8) throw ConvergenceError("Weibull MLE shape is below 1e-8");
  }
  while (g(hi).first < 0.0) {
    hi *= 2.0;
    if (hi > kBracketCeiling) throw ConvergenceError("Weibull MLE shape diverges (> 1e4): sample is nearly degenerate");
  }

  // Safeguarded Newton: fall back to bisection when the step leaves the bracket.
  double a = 0.5 * (lo + hi);
  int it = 0;
  for (; it < 200; ++it) {
    const auto [val, slope] = g(a);
    if (val == 0.0) break;
    if (val < 0.0) lo = a; else hi = a;
    double next = a - val / slope;
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    const double step = std::abs(next - a);
    a = next;
    if (step <= 1e-15 * a || hi - lo <= 1e-15 * a) break;
  }

  double s0 = 0.0;
  for (double l : g.logs) s0 += std::exp(a * (l - g.max_log));
  const double log_scale = g.max_log + std::log(s0 / static_cast<double>(n)) / a;
  const double scale = std::exp(log_scale);

  // Observed information at (shape, scale).
  double z0 = 0.0, z1 = 0.0, z2 = 0.0;
  for (double l : g.logs) {
    const double lz = l - log_scale;
    const double zk = std::exp(a * lz);
    z0 += zk;
    z1 += zk * lz;
    z2 += zk * lz * lz;
  }
  const double nn = static_cast<double>(n);
  const double i_kk = nn / (a * a) + z2;
  const double i_ll = -(nn * a - a * z0 - a * a * z0) / (scale * scale);
  const double i_kl = (nn - z0 - a * z1) / scale;
  const double det = i_kk * i_ll - i_kl * i_kl;
  const double se = det > 0.0 ? std::sqrt(i_ll / det) : std::numeric_limits<double>::quiet_NaN();
  return {a, scale, se, it};
}

double mle_weibull_shape(const SampleSummary& sample) { return fit_weibull(sample).shape; }

std::vector<std::optional<double>> hill_curve(std::span<const double> sorted) {
  const std::size_t n = sorted.size();
  std::vector<std::optional<double>> out;
  if (n < 2) return out;
  out.reserve(n - 1);
  const double np1 = static_cast<double>(n + 1);
  double top_logs = 0.0;
  double top_loglog = 0.0;
  for (std::size_t k = 1; k <= n - 1; ++k) {
    top_logs += std::log(sorted[n - k]);
    top_loglog += std::log(std::log(np1 / static_cast<double>(k)));
    const double kk = static_cast<double>(k);
    const double num = top_loglog / kk - std::log(std::log(np1 / static_cast<double>(k + 1)));
    const double den = top_logs / kk - std::log(sorted[n - k - 1]);
    if (den == 0.0)
      out.emplace_back(std::nullopt);
    else
      out.emplace_back(num / den);
  }
  return out;
}

double hill_estimate(const SampleSummary& sample, std::size_t k) {
  const std::size_t n = sample.size();
  if (k < 1 || k + 1 > n)
    throw DomainError("Hill estimator needs 1 <= k <= n-1, got k = " + std::to_string(k) + ", n = " + std::to_string(n));
  const auto sorted = sample.sorted();
  const double np1 = static_cast<double>(n + 1);
  const double kk = static_cast<double>(k);
  double num = 0.0, den = 0.0;
  for (std::size_t j = 1; j <= k; ++j) {
    num += std::log(std::log(np1 / static_cast<double>(j)));
    den += std::log(sorted[n - j]);
  }
  num = num / kk - std::log(std::log(np1 / (kk + 1.0)));
  den = den / kk - std::log(sorted[n - k - 1]);
  if (den == 0.0) throw DegenerateError("Hill estimator: the top " + std::to_string(k + 1) + " order statistics are equal");
  return num / den;
}

std::size_t argmin_k(std::span<const std::optional<double>> objective) {
  double best = std::numeric_limits<double>::infinity();
  for (const auto& v : objective)
    if (v && *v < best) best = *v;
  if (!std::isfinite(best)) throw DegenerateError("no admissible k: the objective is undefined for every k");
  const double tol = 1e-12 * std::max(1.0, std::abs(best));
  for (std::size_t i = 0; i < objective.size(); ++i)
    if (objective[i] && *objective[i] <= best + tol) return i + 1;
  return 0;  // unreachable
}

std::vector<std::optional<double>> bootstrap_objective(const SampleSummary& sample, std::size_t resamples,
                                                       std::uint64_t seed) {
  const std::size_t n = sample.size();
  if (n < 10) throw InsufficientDataError("bootstrap k selection needs n >= 10");
  if (resamples == 0) throw ConfigError("bootstrap needs at least one resample");
  // Resample from the order statistics so the result ignores the input order.
  const auto pool = sample.sorted();
  std::vector<double> sum(n - 1, 0.0);
  std::vector<std::size_t> count(n - 1, 0);
  std::vector<double> resample(n);
  for (std::size_t b = 0; b < resamples; ++b) {
    Rng rng = Rng::stream(seed, {b});
    for (auto& x : resample) x = pool[rng.index(n)];
    std::sort(resample.begin(), resample.end());
    const auto curve = hill_curve(resample);
    for (std::size_t i = 0; i < curve.size(); ++i)
      if (curve[i]) {
        sum[i] += *curve[i];
        ++count[i];
      }
  }
  const auto base = hill_curve(sample.sorted());
  std::vector<std::optional<double>> out(n - 1);
  for (std::size_t i = 0; i < n - 1; ++i)
    if (base[i] && count[i] > 0) out[i] = std::abs(*base[i] - sum[i] / static_cast<double>(count[i]));
  return out;
}

std::size_t select_k_bootstrap(const SampleSummary& sample, std::size_t resamples, std::uint64_t seed) {
  return argmin_k(bootstrap_objective(sample, resamples, seed));
}

std::vector<std::optional<double>> mle_objective(const SampleSummary& sample) {
  const double mle = mle_weibull_shape(sample);
  auto curve = hill_curve(sample.sorted());
  for (auto& v : curve)
    if (v) v = std::abs(*v - mle);
  return curve;
}

std::size_t select_k_mle(const SampleSummary& sample) { return argmin_k(mle_objective(sample)); }

}  // namespace wtc
