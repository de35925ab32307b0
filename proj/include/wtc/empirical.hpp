#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "wtc/distributions.hpp"
#include "wtc/rng.hpp"
#include "wtc/sample.hpp"

namespace wtc {

/// Raw input column plus optional pass-through labels (dates).
struct ReturnsSeries {
  std::vector<std::string> labels;
  std::vector<double> values;
};

struct TransformSpec {
  /// replace levels x_i by ln(x_i / x_{i-1})
  bool log_returns = false;
  /// drop values <= 0
  bool positive_only = true;
  double scale = 1.0;
};

/// Reads a CSV with one value column, optionally preceded by a label column.
/// A non-numeric first line is treated as a header. Unparsable rows raise a
/// ParseError listing their line numbers.
ReturnsSeries parse_series_csv(std::istream& in, const std::string& source = "<stream>");
ReturnsSeries read_series_csv(const std::string& path);

struct LoadedSample {
  SampleSummary sample;
  std::vector<std::string> labels;
  /// #{X_i >= 1}, reported so the scale can be tuned by the user
  std::size_t m;
};

LoadedSample transform_series(const ReturnsSeries& series, const TransformSpec& spec);
LoadedSample load_and_transform(const std::string& path, const TransformSpec& spec);
/// Writes `label,value` (or `value`) rows with 17 significant digits.
void write_sample_csv(const LoadedSample& loaded, std::ostream& out);

struct MeanExcessPoint {
  double threshold;
  double mean_excess;
  double log_mean_excess;
};

struct MeanExcessCurve {
  std::vector<MeanExcessPoint> points;
  /// thresholds at or above the sample maximum, left out
  std::vector<double> excluded;
};

/// Sample quantiles at p = 0.50, 0.51, ..., 0.99, deduplicated.
std::vector<double> default_thresholds(const SampleSummary& sample);
/// m(t) = sum (X_i - t) 1{X_i > t} / sum 1{X_i > t}.
MeanExcessCurve mean_excess_curve(const SampleSummary& sample, std::span<const double> thresholds);
void write_mean_excess_csv(const MeanExcessCurve& curve, std::ostream& out);

struct Contaminated {
  SampleSummary sample;
  std::size_t replaced;
};

/// Replaces each observation independently, with probability epsilon, by a contaminant draw.
Contaminated contaminate(const SampleSummary& sample, double epsilon, const DistModel& contaminant, Rng& rng);

struct DeviationConfig {
  double c0 = 1.0;
  double v = 0.0;
  double u = std::numeric_limits<double>::infinity();
  /// default: 95% MLE confidence interval of the Weibull shape
  std::optional<double> d0;
  std::optional<double> d1;
  std::size_t bootstrap_resamples = 100;
  DistModel contaminant = DistModel::gamma(2.0, 0.5);  // scale 0.5, shape 0.5
  unsigned threads = 0;
};

struct DeviationRow {
  double epsilon = 0.0;
  std::size_t replaced = 0;
  std::optional<double> tilde, star, hill_bootstrap, hill_mle;
  std::optional<std::size_t> k_bootstrap, k_mle;
  bool star_clamped = false;
  /// |estimate(next epsilon) - estimate(epsilon)|; empty on the last row
  std::optional<double> d_tilde, d_star, d_hill_bootstrap, d_hill_mle;
};

struct DeviationTable {
  double d0 = 0.0;
  double d1 = 0.0;
  std::vector<DeviationRow> rows;
};

/// {0, step, 2 step, ...} up to eps_max.
std::vector<double> make_eps_grid(double eps_max, double step);

/// Estimates on independently contaminated copies of `sample`, one per grid
/// point. Estimator failures leave empty cells. Deterministic in `seed`.
DeviationTable deviation_table(const SampleSummary& sample, std::span<const double> eps_grid,
                               const DeviationConfig& config, std::uint64_t seed);
void write_deviation_csv(const DeviationTable& table, std::ostream& out);

}  // namespace wtc
