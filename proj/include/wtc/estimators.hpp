#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "wtc/psi.hpp"
#include "wtc/sample.hpp"

namespace wtc {

/// Point estimate of a huberized M-estimator with root-finder diagnostics.
struct EstimateResult {
  double estimate = 0.0;
  int iterations = 0;
  double bracket_lo = 0.0;
  double bracket_hi = 0.0;
  /// m for tilde, n for star
  std::size_t m_used = 0;
  bool converged = false;
  /// star only: no sign change in [d0, d1], boundary returned
  bool clamped = false;
};

/// t -> sum_j psi(Y_j; t) over the truncated (tilde) or censored (star) sample.
///
/// Evaluated over the order statistics, so the value is independent of the
/// input order bit for bit. Nondecreasing in t.
class EmpiricalLambda {
 public:
  EmpiricalLambda(const SampleSummary& sample, const EstimatorConfig& cfg);

  double operator()(double t) const noexcept;
  std::size_t count() const noexcept { return logs_.size(); }
  const HuberizedPsi& psi() const noexcept { return psi_; }

 private:
  HuberizedPsi psi_;
  std::vector<double> logs_;
};

/// Bracket search limits for the truncated-sample estimator.
inline constexpr double kInitialLo = 0.05;
inline constexpr double kInitialHi = 20.0;
inline constexpr double kBracketFloor = 1e-4;
inline constexpr double kBracketCeiling = 1e4;
inline constexpr double kRootTol = 1e-10;

EstimateResult estimate_tilde(const SampleSummary& sample, const EstimatorConfig& cfg);
EstimateResult estimate_star(const SampleSummary& sample, const EstimatorConfig& cfg);
EstimateResult estimate(const SampleSummary& sample, const EstimatorConfig& cfg);

/// Known-c0 maximum likelihood estimate from the truncated sample; the
/// tilde estimator with (v, u) = (-1, inf).
EstimateResult mle_truncated(const SampleSummary& sample, double c0);

/// Two-parameter Weibull fit, F(x) = 1 - exp(-(x/scale)^shape).
struct WeibullFit {
  double shape = 0.0;
  double scale = 0.0;
  /// from the observed information matrix
  double shape_se = 0.0;
  int iterations = 0;
};

WeibullFit fit_weibull(const SampleSummary& sample);
double mle_weibull_shape(const SampleSummary& sample);

/// Hill-type estimator of the Weibull tail coefficient from the top k order statistics.
double hill_estimate(const SampleSummary& sample, std::size_t k);
/// hill_estimate for k = 1..n-1 (index k-1); nullopt where the denominator vanishes.
std::vector<std::optional<double>> hill_curve(std::span<const double> sorted);

/// Smallest k (1-based) minimizing `objective[k-1]`, skipping nullopt entries.
/// Values within 1e-12 relative of the minimum count as ties.
std::size_t argmin_k(std::span<const std::optional<double>> objective);

/// |hill(k) - mean of hill(k) over B bootstrap resamples|, per k.
std::vector<std::optional<double>> bootstrap_objective(const SampleSummary& sample, std::size_t resamples,
                                                       std::uint64_t seed);
std::size_t select_k_bootstrap(const SampleSummary& sample, std::size_t resamples, std::uint64_t seed);

/// |hill(k) - two-parameter MLE shape|, per k.
std::vector<std::optional<double>> mle_objective(const SampleSummary& sample);
std::size_t select_k_mle(const SampleSummary& sample);

}  // namespace wtc
