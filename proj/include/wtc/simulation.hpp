#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "wtc/distributions.hpp"

namespace wtc {

/// One Monte Carlo configuration: F_eps = (1 - eps) Weibull(c0, alpha) + eps Gamma(rate, shape).
struct StudyConfig {
  double epsilon = 0.3;
  double c0 = 1.0;
  double alpha = 1.0;
  double gamma_rate = 2.0;  // scale 0.5
  double gamma_shape = 0.5;
  double d0 = 1.0;
  double d1 = 2.0;
  double v = 0.0;
  double u = std::numeric_limits<double>::infinity();
  std::vector<std::size_t> n_grid{30, 50, 80, 100};
  std::size_t replicates = 1000;
  std::uint64_t master_seed = 20190101;
  /// 0 = hardware concurrency; results do not depend on it
  unsigned threads = 0;

  void validate() const;
  DistModel model() const;
};

/// Mean, sample variance (n - 1 divisor) and MSE against the true shape.
struct EstimatorSummary {
  double mean = 0.0;
  double variance = 0.0;
  double mse = 0.0;
};

struct MseRatios {
  /// MSE(hill @ k_opt) / MSE(tilde)
  double r_hat;
  /// MSE(mle) / MSE(tilde)
  double r_tilde;
  /// MSE(mle) / MSE(star)
  double r_star;
};

struct StudyRow {
  double epsilon = 0.0;
  double c0 = 0.0;
  double alpha = 0.0;
  std::size_t n = 0;
  EstimatorSummary mle;
  EstimatorSummary hill;
  EstimatorSummary tilde;
  EstimatorSummary star;
  std::size_t k_opt = 0;
  MseRatios ratios{};
  double p_hill = 0.0;
  std::size_t replicates_used = 0;
  std::size_t failures = 0;
  /// star estimates that hit a boundary of [d0, d1]
  std::size_t star_clamped = 0;
  /// MSE of the Hill estimator for k = 1..n-1
  std::vector<double> hill_mse;
};

/// MSE = mean of (estimate - alpha)^2.
double mean_squared_error(std::span<const double> estimates, double alpha);
EstimatorSummary summarize(std::span<const double> estimates, double alpha);

/// Ratios of mean squared errors; a zero denominator yields +infinity.
MseRatios mse_ratios(std::span<const double> mle, std::span<const double> hill, std::span<const double> tilde,
                     std::span<const double> star, double alpha);

/// 100 * #{k : MSE_hill(k) <= MSE_tilde} / (n - 1).
double p_hill(std::span<const double> hill_mse, double mse_tilde);

/// Runs every n in the grid. Deterministic in master_seed for any thread count.
/// Replicates where an estimator fails are excluded and counted; more than
/// 5% failures for any n raises an Error.
std::vector<StudyRow> run_study(const StudyConfig& config);

void write_study_csv(std::span<const StudyRow> rows, std::ostream& out);
/// JSON sidecar with failure counts, k_opt and per-k Hill MSE.
std::string study_json(std::span<const StudyRow> rows, const StudyConfig& config);

/// Runs `body(i)` for i in [0, count) on up to `threads` workers (0 = hardware).
void parallel_for(std::size_t count, unsigned threads, const std::function<void(std::size_t)>& body);

}  // namespace wtc
