#include "wtc/empirical.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "wtc/errors.hpp"
#include "wtc/estimators.hpp"
#include "wtc/format.hpp"
#include "wtc/simulation.hpp"

namespace wtc {

namespace {

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\"");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\"");
  return std::string(s.substr(first, last - first + 1));
}

std::optional<double> parse_double(const std::string& s) {
  if (s.empty()) return std::nullopt;
  double x = 0.0;
  const char* begin = s.data();
  if (*begin == '+') ++begin;
  const auto [ptr, ec] = std::from_chars(begin, s.data() + s.size(), x);
  if (ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
  return x;
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> fields;
  std::stringstream ss(line);
  std::string f;
  while (std::getline(ss, f, ',')) fields.push_back(trim(f));
  if (!line.empty() && line.back() == ',') fields.emplace_back();
  return fields;
}

}  // namespace

ReturnsSeries parse_series_csv(std::istream& in, const std::string& source) {
  ReturnsSeries out;
  std::vector<std::size_t> bad_lines;
  std::string line;
  std::size_t line_no = 0;
  bool first_content = true;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto fields = split(line);
    const bool was_first = first_content;
    first_content = false;
    const auto value = fields.size() <= 2 ? parse_double(fields.back()) : std::nullopt;
    if (!value) {
      if (was_first) continue;  // header
      bad_lines.push_back(line_no);
      continue;
    }
    out.values.push_back(*value);
    if (fields.size() == 2) out.labels.push_back(fields.front());
  }
  if (!bad_lines.empty()) {
    std::ostringstream msg;
    msg << source << ": " << bad_lines.size() << " unparsable row(s) at line(s)";
    for (std::size_t i = 0; i < std::min<std::size_t>(bad_lines.size(), 20); ++i) msg << ' ' << bad_lines[i];
    if (bad_lines.size() > 20) msg << " ...";
    throw ParseError(msg.str());
  }
  if (!out.labels.empty() && out.labels.size() != out.values.size())
    throw ParseError(source + ": rows mix one- and two-column layouts");
  return out;
}

ReturnsSeries read_series_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open input file '" + path + "'");
  return parse_series_csv(in, path);
}

LoadedSample transform_series(const ReturnsSeries& series, const TransformSpec& spec) {
  if (!(spec.scale > 0.0) || !std::isfinite(spec.scale)) throw ConfigError("scale must be finite and > 0");
  const bool labelled = !series.labels.empty();
  std::vector<double> values;
  std::vector<std::string> labels;
  auto keep = [&](double x, std::size_t i) {
    if (spec.positive_only && !(x > 0.0)) return;
    values.push_back(x * spec.scale);
    if (labelled) labels.push_back(series.labels[i]);
  };
  if (spec.log_returns) {
    for (std::size_t i = 0; i < series.values.size(); ++i)
      if (!(series.values[i] > 0.0))
        throw DomainError("log returns need positive levels; row " + std::to_string(i + 1) + " is " +
                          std::to_string(series.values[i]));
    for (std::size_t i = 1; i < series.values.size(); ++i) keep(std::log(series.values[i] / series.values[i - 1]), i);
  } else {
    for (std::size_t i = 0; i < series.values.size(); ++i) keep(series.values[i], i);
  }
  if (values.empty()) throw InsufficientDataError("no observations left after the transform");
  SampleSummary sample(std::move(values));
  const std::size_t m = sample.truncated_count();
  return {std::move(sample), std::move(labels), m};
}

LoadedSample load_and_transform(const std::string& path, const TransformSpec& spec) {
  return transform_series(read_series_csv(path), spec);
}

void write_sample_csv(const LoadedSample& loaded, std::ostream& out) {
  const auto raw = loaded.sample.raw();
  const bool labelled = loaded.labels.size() == raw.size();
  out << (labelled ? "date,value\n" : "value\n");
  for (std::size_t i = 0; i < raw.size(); ++i) {
    if (labelled) out << loaded.labels[i] << ',';
    out << full_precision(raw[i]) << '\n';
  }
}

std::vector<double> default_thresholds(const SampleSummary& sample) {
  const auto sorted = sample.sorted();
  const std::size_t n = sorted.size();
  std::vector<double> out;
  for (int pct = 50; pct <= 99; ++pct) {
    const double pos = (pct / 100.0) * static_cast<double>(n - 1);
    const auto i = static_cast<std::size_t>(std::floor(pos));
    const double frac = pos - static_cast<double>(i);
    const double q = i + 1 < n ? sorted[i] + frac * (sorted[i + 1] - sorted[i]) : sorted[i];
    if (out.empty() || q > out.back()) out.push_back(q);
  }
  return out;
}

MeanExcessCurve mean_excess_curve(const SampleSummary& sample, std::span<const double> thresholds) {
  MeanExcessCurve curve;
  const auto sorted = sample.sorted();
  const double max = sorted.back();
  for (double t : thresholds) {
    if (!(t < max)) {
      curve.excluded.push_back(t);
      continue;
    }
    double excess = 0.0;
    std::size_t count = 0;
    for (auto it = std::upper_bound(sorted.begin(), sorted.end(), t); it != sorted.end(); ++it) {
      excess += *it - t;
      ++count;
    }
    const double m = excess / static_cast<double>(count);
    curve.points.push_back({t, m, std::log(m)});
  }
  return curve;
}

void write_mean_excess_csv(const MeanExcessCurve& curve, std::ostream& out) {
  out << "t,mean_excess,log_mean_excess\n";
  for (const auto& p : curve.points)
    out << csv_number(p.threshold) << ',' << csv_number(p.mean_excess) << ',' << csv_number(p.log_mean_excess) << '\n';
}

Contaminated contaminate(const SampleSummary& sample, double epsilon, const DistModel& contaminant, Rng& rng) {
  if (!(epsilon >= 0.0 && epsilon <= 1.0)) throw DomainError("epsilon must lie in [0, 1]");
  std::vector<double> values(sample.raw().begin(), sample.raw().end());
  std::size_t replaced = 0;
  for (double& x : values) {
    if (rng.uniform() < epsilon) {
      x = contaminant.sample(rng);
      ++replaced;
    }
  }
  return {SampleSummary(std::move(values)), replaced};
}

std::vector<double> make_eps_grid(double eps_max, double step) {
  if (!(step > 0.0) || !(eps_max >= 0.0) || eps_max > 1.0) throw ConfigError("need step > 0 and 0 <= eps_max <= 1");
  const auto count = static_cast<std::size_t>(std::floor(eps_max / step + 1e-9)) + 1;
  std::vector<double> grid(count);
  for (std::size_t i = 0; i < count; ++i) grid[i] = static_cast<double>(i) * step;
  return grid;
}

namespace {

void validate_grid(std::span<const double> grid) {
  if (grid.empty()) throw ConfigError("epsilon grid is empty");
  for (double e : grid)
    if (!(e >= 0.0 && e <= 1.0)) throw ConfigError("epsilon grid values must lie in [0, 1]");
  if (grid.size() < 2) return;
  const double step = grid[1] - grid[0];
  if (!(step > 0.0)) throw ConfigError("epsilon grid must be strictly increasing");
  for (std::size_t i = 1; i < grid.size(); ++i)
    if (std::abs((grid[i] - grid[i - 1]) - step) > 1e-9) throw ConfigError("epsilon grid must have a uniform step");
}

template <class F>
auto attempt(F&& f) -> std::optional<decltype(f())> {
  try {
    return f();
  } catch (const std::exception&) {
    return std::nullopt;
  }
}

std::optional<double> abs_diff(const std::optional<double>& a, const std::optional<double>& b) {
  if (!a || !b) return std::nullopt;
  return std::abs(*b - *a);
}

}  // namespace

DeviationTable deviation_table(const SampleSummary& sample, std::span<const double> eps_grid,
                               const DeviationConfig& config, std::uint64_t seed) {
  validate_grid(eps_grid);
  DeviationTable table;
  if (config.d0 && config.d1) {
    table.d0 = *config.d0;
    table.d1 = *config.d1;
  } else {
    const WeibullFit fit = fit_weibull(sample);
    table.d0 = config.d0.value_or(fit.shape - 1.959963984540054 * fit.shape_se);
    table.d1 = config.d1.value_or(fit.shape + 1.959963984540054 * fit.shape_se);
  }
  const EstimatorConfig tilde_cfg = EstimatorConfig::tilde(config.c0, config.v, config.u);
  const EstimatorConfig star_cfg = EstimatorConfig::star(config.c0, config.v, config.u, table.d0, table.d1);
  centering_constant(tilde_cfg);
  centering_constant(star_cfg);

  table.rows.resize(eps_grid.size());
  parallel_for(eps_grid.size(), config.threads, [&](std::size_t i) {
    DeviationRow& row = table.rows[i];
    row.epsilon = eps_grid[i];
    Rng rng = Rng::stream(seed, {static_cast<std::uint64_t>(i), 0});
    const Contaminated c = contaminate(sample, row.epsilon, config.contaminant, rng);
    row.replaced = c.replaced;
    row.tilde = attempt([&] { return estimate_tilde(c.sample, tilde_cfg).estimate; });
    if (auto star = attempt([&] { return estimate_star(c.sample, star_cfg); })) {
      row.star = star->estimate;
      row.star_clamped = star->clamped;
    }
    const std::uint64_t boot_seed = Rng::stream(seed, {static_cast<std::uint64_t>(i), 1}).next();
    row.k_bootstrap = attempt([&] { return select_k_bootstrap(c.sample, config.bootstrap_resamples, boot_seed); });
    if (row.k_bootstrap) row.hill_bootstrap = attempt([&] { return hill_estimate(c.sample, *row.k_bootstrap); });
    row.k_mle = attempt([&] { return select_k_mle(c.sample); });
    if (row.k_mle) row.hill_mle = attempt([&] { return hill_estimate(c.sample, *row.k_mle); });
  });

  for (std::size_t i = 0; i + 1 < table.rows.size(); ++i) {
    DeviationRow& row = table.rows[i];
    const DeviationRow& next = table.rows[i + 1];
    row.d_tilde = abs_diff(row.tilde, next.tilde);
    row.d_star = abs_diff(row.star, next.star);
    row.d_hill_bootstrap = abs_diff(row.hill_bootstrap, next.hill_bootstrap);
    row.d_hill_mle = abs_diff(row.hill_mle, next.hill_mle);
  }
  return table;
}

void write_deviation_csv(const DeviationTable& table, std::ostream& out) {
  auto cell = [](const std::optional<double>& x) { return x ? csv_number(*x) : std::string(); };
  auto kcell = [](const std::optional<std::size_t>& k) { return k ? std::to_string(*k) : std::string(); };
  out << "epsilon,tilde,star,hill_bootstrap,hill_mle,d_tilde,d_star,d_hill_bootstrap,d_hill_mle,k_bootstrap,k_mle\n";
  for (const DeviationRow& r : table.rows) {
    out << csv_number(r.epsilon) << ',' << cell(r.tilde) << ',' << cell(r.star) << ',' << cell(r.hill_bootstrap) << ','
        << cell(r.hill_mle) << ',' << cell(r.d_tilde) << ',' << cell(r.d_star) << ',' << cell(r.d_hill_bootstrap) << ','
        << cell(r.d_hill_mle) << ',' << kcell(r.k_bootstrap) << ',' << kcell(r.k_mle) << '\n';
  }
}

}  // namespace wtc
