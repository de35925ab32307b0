#include "wtc/simulation.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <optional>
#include <ostream>
#include <thread>

#include "json.hpp"

#include "wtc/errors.hpp"
#include "wtc/estimators.hpp"
#include "wtc/format.hpp"

namespace wtc {

void StudyConfig::validate() const {
  if (!(epsilon >= 0.0 && epsilon <= 1.0)) throw ConfigError("epsilon must lie in [0, 1]");
  if (!(c0 > 0.0) || !(alpha > 0.0)) throw ConfigError("c0 and alpha must be > 0");
  if (!(gamma_rate > 0.0) || !(gamma_shape > 0.0)) throw ConfigError("gamma parameters must be > 0");
  if (replicates < 1) throw ConfigError("replicates must be >= 1");
  if (n_grid.empty()) throw ConfigError("n_grid must not be empty");
  for (std::size_t n : n_grid)
    if (n < 3) throw ConfigError("every sample size must be >= 3");
  EstimatorConfig::tilde(c0, v, u);
  EstimatorConfig::star(c0, v, u, d0, d1);
}

DistModel StudyConfig::model() const {
  return DistModel::mixture(epsilon, DistModel::weibull(c0, alpha), DistModel::gamma(gamma_rate, gamma_shape));
}

void parallel_for(std::size_t count, unsigned threads, const std::function<void(std::size_t)>& body) {
  unsigned workers = threads == 0 ? std::max(1u, std::thread::hardware_concurrency()) : threads;
  workers = static_cast<unsigned>(std::min<std::size_t>(workers, std::max<std::size_t>(count, 1)));
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::atomic<bool> failed{false};
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < count && !failed; i = next++) {
        try {
          body(i);
        } catch (...) {
          if (!failed.exchange(true)) failure = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

double mean_squared_error(std::span<const double> estimates, double alpha) {
  if (estimates.empty()) throw InsufficientDataError("MSE of an empty estimate vector");
  double sum = 0.0;
  for (double e : estimates) sum += (e - alpha) * (e - alpha);
  return sum / static_cast<double>(estimates.size());
}

EstimatorSummary summarize(std::span<const double> estimates, double alpha) {
  EstimatorSummary s;
  const double n = static_cast<double>(estimates.size());
  for (double e : estimates) s.mean += e;
  s.mean /= n;
  for (double e : estimates) s.variance += (e - s.mean) * (e - s.mean);
  s.variance = estimates.size() > 1 ? s.variance / (n - 1.0) : 0.0;
  s.mse = mean_squared_error(estimates, alpha);
  return s;
}

namespace {

double ratio(double num, double den) {
  if (den == 0.0) return std::numeric_limits<double>::infinity();
  return num / den;
}

}  // namespace

MseRatios mse_ratios(std::span<const double> mle, std::span<const double> hill, std::span<const double> tilde,
                     std::span<const double> star, double alpha) {
  const double m_mle = mean_squared_error(mle, alpha);
  const double m_tilde = mean_squared_error(tilde, alpha);
  return {ratio(mean_squared_error(hill, alpha), m_tilde), ratio(m_mle, m_tilde),
          ratio(m_mle, mean_squared_error(star, alpha))};
}

double p_hill(std::span<const double> hill_mse, double mse_tilde) {
  if (hill_mse.empty()) throw InsufficientDataError("p_hill needs at least one k");
  const auto wins = std::count_if(hill_mse.begin(), hill_mse.end(), [&](double m) { return m <= mse_tilde; });
  return 100.0 * static_cast<double>(wins) / static_cast<double>(hill_mse.size());
}

namespace {

struct Replicate {
  bool ok = false;
  double mle = 0.0, tilde = 0.0, star = 0.0;
  bool star_clamped = false;
  std::vector<double> hill;
};

Replicate run_replicate(const StudyConfig& config, const DistModel& model, const EstimatorConfig& tilde_cfg,
                        const EstimatorConfig& star_cfg, std::size_t n, std::size_t index) {
  Replicate rep;
  Rng rng = Rng::stream(config.master_seed, {static_cast<std::uint64_t>(n), static_cast<std::uint64_t>(index)});
  try {
    const SampleSummary sample(model.sample(rng, n));
    rep.mle = mle_weibull_shape(sample);
    rep.tilde = estimate_tilde(sample, tilde_cfg).estimate;
    const EstimateResult star = estimate_star(sample, star_cfg);
    rep.star = star.estimate;
    rep.star_clamped = star.clamped;
    const auto curve = hill_curve(sample.sorted());
    rep.hill.reserve(curve.size());
    for (const auto& h : curve) {
      if (!h) return rep;
      rep.hill.push_back(*h);
    }
    rep.ok = true;
  } catch (const std::exception&) {
    rep.ok = false;
  }
  return rep;
}

StudyRow aggregate(const StudyConfig& config, std::size_t n, const std::vector<Replicate>& reps) {
  StudyRow row;
  row.epsilon = config.epsilon;
  row.c0 = config.c0;
  row.alpha = config.alpha;
  row.n = n;
  std::vector<double> mle, tilde, star;
  std::vector<double> hill_sq(n - 1, 0.0);
  for (const Replicate& r : reps) {
    if (!r.ok) {
      ++row.failures;
      continue;
    }
    mle.push_back(r.mle);
    tilde.push_back(r.tilde);
    star.push_back(r.star);
    row.star_clamped += r.star_clamped ? 1 : 0;
    for (std::size_t k = 0; k + 1 < n; ++k) hill_sq[k] += (r.hill[k] - config.alpha) * (r.hill[k] - config.alpha);
  }
  row.replicates_used = mle.size();
  if (static_cast<double>(row.failures) > 0.05 * static_cast<double>(reps.size()))
    throw Error("study failed: " + std::to_string(row.failures) + " of " + std::to_string(reps.size()) +
                " replicates could not be estimated at n = " + std::to_string(n));

  row.hill_mse.resize(n - 1);
  for (std::size_t k = 0; k + 1 < n; ++k) row.hill_mse[k] = hill_sq[k] / static_cast<double>(row.replicates_used);
  std::vector<std::optional<double>> objective(row.hill_mse.begin(), row.hill_mse.end());
  row.k_opt = argmin_k(objective);

  std::vector<double> hill;
  hill.reserve(row.replicates_used);
  for (const Replicate& r : reps)
    if (r.ok) hill.push_back(r.hill[row.k_opt - 1]);

  row.mle = summarize(mle, config.alpha);
  row.hill = summarize(hill, config.alpha);
  row.tilde = summarize(tilde, config.alpha);
  row.star = summarize(star, config.alpha);
  row.ratios = mse_ratios(mle, hill, tilde, star, config.alpha);
  row.p_hill = p_hill(row.hill_mse, row.tilde.mse);
  return row;
}

}  // namespace

std::vector<StudyRow> run_study(const StudyConfig& config) {
  config.validate();
  const DistModel model = config.model();
  const EstimatorConfig tilde_cfg = EstimatorConfig::tilde(config.c0, config.v, config.u);
  const EstimatorConfig star_cfg = EstimatorConfig::star(config.c0, config.v, config.u, config.d0, config.d1);
  // Fill the centering cache before workers start.
  centering_constant(tilde_cfg);
  centering_constant(star_cfg);

  std::vector<StudyRow> rows;
  for (std::size_t n : config.n_grid) {
    std::vector<Replicate> reps(config.replicates);
    parallel_for(config.replicates, config.threads,
                 [&](std::size_t i) { reps[i] = run_replicate(config, model, tilde_cfg, star_cfg, n, i); });
    rows.push_back(aggregate(config, n, reps));
  }
  return rows;
}

void write_study_csv(std::span<const StudyRow> rows, std::ostream& out) {
  out << "epsilon,c0,alpha,n,mean_mle,mean_hill,mean_tilde,mean_star,s2_mle,s2_hill,s2_tilde,s2_star,"
         "r_hat,r_tilde,r_star,p_hill,k_opt\n";
  for (const StudyRow& r : rows) {
    out << csv_number(r.epsilon) << ',' << csv_number(r.c0) << ',' << csv_number(r.alpha) << ',' << r.n << ','
        << csv_number(r.mle.mean) << ',' << csv_number(r.hill.mean) << ',' << csv_number(r.tilde.mean) << ','
        << csv_number(r.star.mean) << ',' << csv_number(r.mle.variance) << ',' << csv_number(r.hill.variance) << ','
        << csv_number(r.tilde.variance) << ',' << csv_number(r.star.variance) << ',' << csv_number(r.ratios.r_hat)
        << ',' << csv_number(r.ratios.r_tilde) << ',' << csv_number(r.ratios.r_star) << ',' << csv_number(r.p_hill)
        << ',' << r.k_opt << '\n';
  }
}

std::string study_json(std::span<const StudyRow> rows, const StudyConfig& config) {
  using nlohmann::json;
  json out;
  out["master_seed"] = config.master_seed;
  out["replicates"] = config.replicates;
  json list = json::array();
  for (const StudyRow& r : rows) {
    json row;
    row["epsilon"] = r.epsilon;
    row["c0"] = r.c0;
    row["alpha"] = r.alpha;
    row["n"] = r.n;
    row["k_opt"] = r.k_opt;
    row["replicates_used"] = r.replicates_used;
    row["failures"] = r.failures;
    row["star_clamped"] = r.star_clamped;
    row["r_hat"] = json_number(r.ratios.r_hat);
    row["r_tilde"] = json_number(r.ratios.r_tilde);
    row["r_star"] = json_number(r.ratios.r_star);
    row["p_hill"] = r.p_hill;
    row["hill_mse"] = r.hill_mse;
    list.push_back(std::move(row));
  }
  out["rows"] = std::move(list);
  return out.dump(2);
}

}  // namespace wtc
