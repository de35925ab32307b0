#include "wtc/cli.hpp"

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "wtc/asymptotics.hpp"
#include "wtc/empirical.hpp"
#include "wtc/errors.hpp"
#include "wtc/estimators.hpp"
#include "wtc/format.hpp"
#include "wtc/simulation.hpp"

namespace wtc::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

double parse_real(const std::string& text, const std::string& what) {
  if (text == "inf" || text == "+inf" || text == "infinity") return std::numeric_limits<double>::infinity();
  if (text == "-inf" || text == "-infinity") return -std::numeric_limits<double>::infinity();
  std::size_t used = 0;
  double x = 0.0;
  try {
    x = std::stod(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != text.size()) throw ConfigError(what + ": not a number: '" + text + "'");
  return x;
}

// Gamma contaminants are given by scale on the command line.
double rate_from_scale(double scale) {
  if (!(scale > 0.0) || !std::isfinite(scale)) throw ConfigError("--gamma-scale must be a positive number");
  return 1.0 / scale;
}

double real_from_json(const json& j) {
  if (j.is_string()) return parse_real(j.get<std::string>(), "manifest");
  return j.get<double>();
}

std::optional<double> optional_from_json(const json& j, const char* key) {
  if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
  return real_from_json(j.at(key));
}

json optional_to_json(const std::optional<double>& x) { return x ? json_number(*x) : json(nullptr); }

std::uint64_t default_seed() {
  if (const char* env = std::getenv("WTC_SEED")) {
    try {
      return std::stoull(env);
    } catch (const std::exception&) {
      throw ConfigError(std::string("WTC_SEED is not an unsigned integer: '") + env + "'");
    }
  }
  return kDefaultSeed;
}

std::string utc_now() {
  const std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::ofstream open_output(const fs::path& path) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw ParseError("cannot write output file '" + path.string() + "'");
  return out;
}

void write_manifest(const fs::path& path, const std::string& subcommand, const json& config,
                    std::optional<std::uint64_t> seed, const std::vector<std::string>& outputs, double elapsed) {
  json m;
  m["subcommand"] = subcommand;
  m["config"] = config;
  m["seed"] = seed ? json(*seed) : json(nullptr);
  m["version"] = kVersion;
  m["started_at"] = utc_now();
  m["elapsed_seconds"] = elapsed;
  m["outputs"] = outputs;
  open_output(path) << m.dump(2) << '\n';
}

fs::path sibling(const fs::path& path, const std::string& suffix) {
  fs::path out = path;
  out.replace_extension();
  out += suffix;
  return out;
}

// ---------------------------------------------------------------- estimate

struct EstimateOptions {
  std::string input;
  std::string estimator = "tilde";
  double c0 = 1.0;
  double v = 0.0;
  double u = std::numeric_limits<double>::infinity();
  std::optional<double> d0, d1;
  bool log_returns = false;
  double scale = 1.0;
  std::string model = "none";
  std::string output;

  json to_json() const {
    return {{"input", input}, {"estimator", estimator}, {"c0", c0}, {"v", v}, {"u", json_number(u)},
            {"d0", optional_to_json(d0)}, {"d1", optional_to_json(d1)}, {"log_returns", log_returns},
            {"scale", scale}, {"model", model}, {"output", output}};
  }
  static EstimateOptions from_json(const json& j) {
    EstimateOptions o;
    o.input = j.at("input");
    o.estimator = j.at("estimator");
    o.c0 = j.at("c0");
    o.v = real_from_json(j.at("v"));
    o.u = real_from_json(j.at("u"));
    o.d0 = optional_from_json(j, "d0");
    o.d1 = optional_from_json(j, "d1");
    o.log_returns = j.at("log_returns");
    o.scale = j.at("scale");
    o.model = j.at("model");
    o.output = j.at("output");
    return o;
  }
};

json estimate_json(const EstimatorConfig& cfg, const EstimateResult& r, const SampleSummary& sample, bool pure_weibull) {
  json j;
  j["estimator"] = to_string(cfg.kind);
  j["estimate"] = r.estimate;
  j["iterations"] = r.iterations;
  j["bracket"] = {r.bracket_lo, r.bracket_hi};
  j["m_used"] = r.m_used;
  j["converged"] = r.converged;
  j["clamped"] = r.clamped;
  j["mu"] = centering_constant(cfg);
  if (pure_weibull) {
    const double sigma_sq = asymptotic_variance(r.estimate, cfg).sigma_sq;
    j["asymptotic_variance"] = sigma_sq;
    j["std_error"] = std::sqrt(sigma_sq / static_cast<double>(sample.size()));
  }
  return j;
}

int run_estimate(const EstimateOptions& o) {
  const auto start = std::chrono::steady_clock::now();
  if (o.estimator != "tilde" && o.estimator != "star" && o.estimator != "both")
    throw ConfigError("--estimator must be tilde, star or both");
  if (o.model != "none" && o.model != "pure-weibull") throw ConfigError("--model must be none or pure-weibull");
  const bool want_star = o.estimator != "tilde";
  if (want_star && !(o.d0 && o.d1)) throw ConfigError("the star estimator needs both --d0 and --d1");

  const LoadedSample loaded = load_and_transform(o.input, TransformSpec{o.log_returns, true, o.scale});
  const bool pure = o.model == "pure-weibull";
  json out;
  out["input"] = o.input;
  out["n"] = loaded.sample.size();
  out["m"] = loaded.m;
  out["results"] = json::array();
  if (o.estimator != "star") {
    const auto cfg = EstimatorConfig::tilde(o.c0, o.v, o.u);
    out["results"].push_back(estimate_json(cfg, estimate_tilde(loaded.sample, cfg), loaded.sample, pure));
  }
  if (want_star) {
    const auto cfg = EstimatorConfig::star(o.c0, o.v, o.u, *o.d0, *o.d1);
    out["results"].push_back(estimate_json(cfg, estimate_star(loaded.sample, cfg), loaded.sample, pure));
  }
  const std::string text = out.dump(2);
  std::cout << text << '\n';
  if (!o.output.empty()) {
    open_output(o.output) << text << '\n';
    const double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    write_manifest(sibling(o.output, ".manifest.json"), "estimate", o.to_json(), std::nullopt, {o.output}, elapsed);
  }
  return 0;
}

// ---------------------------------------------------------------- simulate

struct SimulateOptions {
  std::vector<double> eps{0.3};
  std::vector<double> c0{1.0};
  std::vector<double> alpha{1.0};
  std::vector<std::size_t> n{30, 50, 80, 100};
  std::size_t replicates = 1000;
  double gamma_scale = 0.5;
  double gamma_shape = 0.5;
  double d0 = 1.0;
  double d1 = 2.0;
  double v = 0.0;
  double u = std::numeric_limits<double>::infinity();
  std::uint64_t seed = kDefaultSeed;
  unsigned threads = 0;
  std::string output = "study.csv";

  // thread count is not part of the result, so it is left out of the manifest
  json to_json() const {
    return {{"eps", eps}, {"c0", c0}, {"alpha", alpha}, {"n", n}, {"replicates", replicates},
            {"gamma_scale", gamma_scale}, {"gamma_shape", gamma_shape}, {"d0", d0}, {"d1", d1},
            {"v", v}, {"u", json_number(u)}, {"seed", seed}, {"output", output}};
  }
  static SimulateOptions from_json(const json& j) {
    SimulateOptions o;
    o.eps = j.at("eps").get<std::vector<double>>();
    o.c0 = j.at("c0").get<std::vector<double>>();
    o.alpha = j.at("alpha").get<std::vector<double>>();
    o.n = j.at("n").get<std::vector<std::size_t>>();
    o.replicates = j.at("replicates");
    o.gamma_scale = j.at("gamma_scale");
    o.gamma_shape = j.at("gamma_shape");
    o.d0 = j.at("d0");
    o.d1 = j.at("d1");
    o.v = real_from_json(j.at("v"));
    o.u = real_from_json(j.at("u"));
    o.seed = j.at("seed");
    o.output = j.at("output");
    return o;
  }
};

int run_simulate(const SimulateOptions& o) {
  const auto start = std::chrono::steady_clock::now();
  if (o.eps.empty() || o.c0.empty() || o.alpha.empty()) throw ConfigError("--eps, --c0 and --alpha need values");
  std::vector<StudyRow> rows;
  json sidecar = json::array();
  for (double eps : o.eps)
    for (double c0 : o.c0)
      for (double alpha : o.alpha) {
        StudyConfig cfg;
        cfg.epsilon = eps;
        cfg.c0 = c0;
        cfg.alpha = alpha;
        cfg.gamma_rate = rate_from_scale(o.gamma_scale);
        cfg.gamma_shape = o.gamma_shape;
        cfg.d0 = o.d0;
        cfg.d1 = o.d1;
        cfg.v = o.v;
        cfg.u = o.u;
        cfg.n_grid = o.n;
        cfg.replicates = o.replicates;
        cfg.master_seed = o.seed;
        cfg.threads = o.threads;
        auto part = run_study(cfg);
        sidecar.push_back(json::parse(study_json(part, cfg)));
        std::cerr << "eps=" << eps << " c0=" << c0 << " alpha=" << alpha << " done\n";
        rows.insert(rows.end(), part.begin(), part.end());
      }
  const fs::path csv = o.output;
  const fs::path side = sibling(csv, ".json");
  {
    auto out = open_output(csv);
    write_study_csv(rows, out);
  }
  open_output(side) << sidecar.dump(2) << '\n';
  const double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  write_manifest(sibling(csv, ".manifest.json"), "simulate", o.to_json(), o.seed, {csv.string(), side.string()},
                 elapsed);
  std::cout << "wrote " << csv.string() << " and " << side.string() << '\n';
  return 0;
}

// ------------------------------------------------------------- asymptotics

std::vector<double> linear_grid(double lo, double hi, std::size_t points, const std::string& name) {
  if (points < 2 || !(lo < hi) || !std::isfinite(lo) || !std::isfinite(hi))
    throw ConfigError(name + " grid needs finite min < max and at least 2 points");
  std::vector<double> grid(points);
  for (std::size_t i = 0; i < points; ++i)
    grid[i] = i + 1 == points ? hi : lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(points - 1);
  return grid;
}

struct AsymptoticsOptions {
  double c0 = 1.0;
  double alpha0 = 1.0;
  double d0 = 1.0;
  double d1 = 2.0;
  double u = std::numeric_limits<double>::infinity();
  double v_min = -1.0;
  double v_max = 1.0;
  std::size_t v_points = 50;
  double beta_min = 0.1;
  double beta_max = 5.0;
  std::size_t beta_points = 50;
  std::vector<double> if_v{-1.0, -0.5, 0.0, 0.5, 1.0};
  double gamma_scale = 0.5;
  std::string out_dir = ".";

  json to_json() const {
    return {{"c0", c0}, {"alpha0", alpha0}, {"d0", d0}, {"d1", d1}, {"u", json_number(u)},
            {"v_min", v_min}, {"v_max", v_max}, {"v_points", v_points}, {"beta_min", beta_min},
            {"beta_max", beta_max}, {"beta_points", beta_points}, {"if_v", if_v},
            {"gamma_scale", gamma_scale}, {"out_dir", out_dir}};
  }
  static AsymptoticsOptions from_json(const json& j) {
    AsymptoticsOptions o;
    o.c0 = j.at("c0");
    o.alpha0 = j.at("alpha0");
    o.d0 = j.at("d0");
    o.d1 = j.at("d1");
    o.u = real_from_json(j.at("u"));
    o.v_min = j.at("v_min");
    o.v_max = j.at("v_max");
    o.v_points = j.at("v_points");
    o.beta_min = j.at("beta_min");
    o.beta_max = j.at("beta_max");
    o.beta_points = j.at("beta_points");
    o.if_v = j.at("if_v").get<std::vector<double>>();
    o.gamma_scale = j.at("gamma_scale");
    o.out_dir = j.at("out_dir");
    return o;
  }
};

std::string try_cell(const std::function<double()>& f) {
  try {
    return csv_number(f());
  } catch (const DomainError&) {
    return {};
  } catch (const ConfigError&) {
    return {};
  }
}

int run_asymptotics(const AsymptoticsOptions& o) {
  const auto start = std::chrono::steady_clock::now();
  const auto v_grid = linear_grid(o.v_min, o.v_max, o.v_points, "v");
  const auto beta_grid = linear_grid(o.beta_min, o.beta_max, o.beta_points, "beta");
  if (!(o.beta_min > 0.0)) throw ConfigError("beta grid must be positive");
  if (o.if_v.empty()) throw ConfigError("--if-v needs at least one value");
  const double gamma_rate = rate_from_scale(o.gamma_scale);

  const fs::path dir = o.out_dir;
  const fs::path aeff_path = dir / "aeff.csv";
  const fs::path if_path = dir / "influence.csv";
  {
    auto out = open_output(aeff_path);
    out << "v,aeff_tilde,aeff_star\n";
    for (double v : v_grid) {
      out << csv_number(v) << ',' << try_cell([&] { return aeff(EstimatorConfig::tilde(o.c0, v, o.u), o.alpha0); })
          << ',' << try_cell([&] { return aeff(EstimatorConfig::star(o.c0, v, o.u, o.d0, o.d1), o.alpha0); }) << '\n';
    }
  }
  {
    auto out = open_output(if_path);
    out << "beta,v,if_tilde,if_star\n";
    for (double v : o.if_v) {
      for (double beta : beta_grid) {
        const DistModel g = DistModel::gamma(gamma_rate, beta);
        out << csv_number(beta) << ',' << csv_number(v) << ','
            << try_cell([&] { return influence(g, EstimatorConfig::tilde(o.c0, v, o.u), o.alpha0); }) << ','
            << try_cell([&] { return influence(g, EstimatorConfig::star(o.c0, v, o.u, o.d0, o.d1), o.alpha0); })
            << '\n';
      }
    }
  }
  const double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  write_manifest(dir / "manifest.json", "asymptotics", o.to_json(), std::nullopt,
                 {aeff_path.string(), if_path.string()}, elapsed);
  std::cout << "wrote " << aeff_path.string() << " and " << if_path.string() << '\n';
  return 0;
}

// --------------------------------------------------------------- empirical

struct EmpiricalOptions {
  std::string input;
  bool log_returns = false;
  double scale = 1.0;
  double c0 = 1.0;
  double v = 0.0;
  double u = std::numeric_limits<double>::infinity();
  std::optional<double> d0, d1;
  double eps_max = 0.3;
  double eps_step = 0.05;
  std::size_t bootstrap = 100;
  double gamma_scale = 0.5;
  double gamma_shape = 0.5;
  std::uint64_t seed = kDefaultSeed;
  unsigned threads = 0;
  std::string out_dir = ".";

  json to_json() const {
    return {{"input", input}, {"log_returns", log_returns}, {"scale", scale}, {"c0", c0}, {"v", v},
            {"u", json_number(u)}, {"d0", optional_to_json(d0)}, {"d1", optional_to_json(d1)},
            {"eps_max", eps_max}, {"eps_step", eps_step}, {"bootstrap", bootstrap},
            {"gamma_scale", gamma_scale}, {"gamma_shape", gamma_shape}, {"seed", seed}, {"out_dir", out_dir}};
  }
  static EmpiricalOptions from_json(const json& j) {
    EmpiricalOptions o;
    o.input = j.at("input");
    o.log_returns = j.at("log_returns");
    o.scale = j.at("scale");
    o.c0 = j.at("c0");
    o.v = real_from_json(j.at("v"));
    o.u = real_from_json(j.at("u"));
    o.d0 = optional_from_json(j, "d0");
    o.d1 = optional_from_json(j, "d1");
    o.eps_max = j.at("eps_max");
    o.eps_step = j.at("eps_step");
    o.bootstrap = j.at("bootstrap");
    o.gamma_scale = j.at("gamma_scale");
    o.gamma_shape = j.at("gamma_shape");
    o.seed = j.at("seed");
    o.out_dir = j.at("out_dir");
    return o;
  }
};

int run_empirical(const EmpiricalOptions& o) {
  const auto start = std::chrono::steady_clock::now();
  const LoadedSample loaded = load_and_transform(o.input, TransformSpec{o.log_returns, true, o.scale});
  std::cout << "n = " << loaded.sample.size() << ", m = #{X >= 1} = " << loaded.m << '\n';

  DeviationConfig cfg;
  cfg.c0 = o.c0;
  cfg.v = o.v;
  cfg.u = o.u;
  cfg.d0 = o.d0;
  cfg.d1 = o.d1;
  cfg.bootstrap_resamples = o.bootstrap;
  cfg.contaminant = DistModel::gamma(rate_from_scale(o.gamma_scale), o.gamma_shape);
  cfg.threads = o.threads;
  const auto grid = make_eps_grid(o.eps_max, o.eps_step);
  const DeviationTable table = deviation_table(loaded.sample, grid, cfg, o.seed);
  std::cout << "(d0, d1) = (" << table.d0 << ", " << table.d1 << ")\n";

  const MeanExcessCurve curve = mean_excess_curve(loaded.sample, default_thresholds(loaded.sample));
  for (double t : curve.excluded) std::cerr << "note: threshold " << t << " is not below the sample maximum; skipped\n";

  const fs::path dir = o.out_dir;
  const fs::path sample_path = dir / "transformed.csv";
  const fs::path me_path = dir / "mean_excess.csv";
  const fs::path dev_path = dir / "deviation.csv";
  {
    auto out = open_output(sample_path);
    write_sample_csv(loaded, out);
  }
  {
    auto out = open_output(me_path);
    write_mean_excess_csv(curve, out);
  }
  {
    auto out = open_output(dev_path);
    write_deviation_csv(table, out);
  }
  const double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  json config = o.to_json();
  config["resolved_d0"] = table.d0;
  config["resolved_d1"] = table.d1;
  write_manifest(dir / "manifest.json", "empirical", config, o.seed,
                 {sample_path.string(), me_path.string(), dev_path.string()}, elapsed);
  std::cout << "wrote " << sample_path.string() << ", " << me_path.string() << " and " << dev_path.string() << '\n';
  return 0;
}

// ------------------------------------------------------------------ replay

int run_replay(const std::string& manifest_path, const std::string& out_dir, unsigned threads) {
  std::ifstream in(manifest_path);
  if (!in) throw ParseError("cannot open manifest '" + manifest_path + "'");
  json m;
  try {
    m = json::parse(in);
  } catch (const json::exception& e) {
    throw ParseError(manifest_path + ": " + e.what());
  }
  try {
    const std::string sub = m.at("subcommand");
    const json& cfg = m.at("config");
    auto reroot = [&](const std::string& path) {
      return out_dir.empty() ? path : (fs::path(out_dir) / fs::path(path).filename()).string();
    };
    if (sub == "estimate") {
      auto o = EstimateOptions::from_json(cfg);
      o.output = reroot(o.output);
      return run_estimate(o);
    }
    if (sub == "simulate") {
      auto o = SimulateOptions::from_json(cfg);
      o.output = reroot(o.output);
      o.threads = threads;
      return run_simulate(o);
    }
    if (sub == "asymptotics") {
      auto o = AsymptoticsOptions::from_json(cfg);
      if (!out_dir.empty()) o.out_dir = out_dir;
      return run_asymptotics(o);
    }
    if (sub == "empirical") {
      auto o = EmpiricalOptions::from_json(cfg);
      if (!out_dir.empty()) o.out_dir = out_dir;
      o.threads = threads;
      return run_empirical(o);
    }
    throw ParseError(manifest_path + ": unknown subcommand '" + sub + "'");
  } catch (const json::exception& e) {
    throw ParseError(manifest_path + ": malformed manifest: " + e.what());
  }
}

}  // namespace

int run(int argc, char** argv) {
  CLI::App app{"Robust M-estimation of the Weibull tail coefficient", "wtc"};
  app.set_version_flag("--version", kVersion);
  app.set_config("--config", "", "TOML/INI config file; command-line flags take precedence");
  app.require_subcommand(1);

  unsigned threads = 0;
  app.add_option("--threads", threads, "worker threads (0 = all cores; results do not depend on it)")
      ->capture_default_str();
  const std::uint64_t env_seed = default_seed();

  std::string u_text = "inf";
  std::string d0_text, d1_text;

  // estimate
  EstimateOptions est;
  auto* est_cmd = app.add_subcommand(
      "estimate",
      "Estimate the tail coefficient from a CSV sample. Prints JSON: n, m, and per estimator the estimate, "
      "root-finder diagnostics and, with --model pure-weibull, the plug-in standard error.");
  est_cmd->add_option("--input", est.input, "CSV with one value column (optional leading date column)")->required();
  est_cmd->add_option("--estimator", est.estimator, "tilde, star or both")->capture_default_str();
  est_cmd->add_option("--c0", est.c0, "base function constant")->capture_default_str();
  est_cmd->add_option("--v", est.v, "lower clip bound")->capture_default_str();
  est_cmd->add_option("--u", u_text, "upper clip bound (\"inf\" allowed)")->capture_default_str();
  est_cmd->add_option("--d0", d0_text, "lower shape bound (star)");
  est_cmd->add_option("--d1", d1_text, "upper shape bound (star)");
  est_cmd->add_flag("--log-returns", est.log_returns, "input holds levels; use log returns");
  est_cmd->add_option("--scale", est.scale, "multiply the positive sample by this")->capture_default_str();
  est_cmd->add_option("--model", est.model, "none or pure-weibull (adds sigma/sqrt(n))")->capture_default_str();
  est_cmd->add_option("--output", est.output, "also write the JSON here, with a manifest");

  // simulate
  SimulateOptions sim;
  sim.seed = env_seed;
  auto* sim_cmd = app.add_subcommand(
      "simulate",
      "Monte Carlo study over the product of the eps, c0 and alpha lists. CSV columns: epsilon,c0,alpha,n, "
      "mean_{mle,hill,tilde,star}, s2_{mle,hill,tilde,star}, r_hat,r_tilde,r_star,p_hill,k_opt. "
      "A JSON sidecar holds failure counts and the per-k Hill MSE.");
  sim_cmd->add_option("--eps", sim.eps, "contamination levels")->delimiter(',')->capture_default_str();
  sim_cmd->add_option("--c0", sim.c0, "c0 values")->delimiter(',')->capture_default_str();
  sim_cmd->add_option("--alpha", sim.alpha, "true shape values")->delimiter(',')->capture_default_str();
  sim_cmd->add_option("--n", sim.n, "sample sizes")->delimiter(',')->capture_default_str();
  sim_cmd->add_option("--replicates", sim.replicates)->capture_default_str();
  sim_cmd->add_option("--gamma-scale", sim.gamma_scale, "contaminant scale (rate = 1/scale)")->capture_default_str();
  sim_cmd->add_option("--gamma-shape", sim.gamma_shape, "contaminant shape")->capture_default_str();
  sim_cmd->add_option("--d0", sim.d0)->capture_default_str();
  sim_cmd->add_option("--d1", sim.d1)->capture_default_str();
  sim_cmd->add_option("--v", sim.v)->capture_default_str();
  sim_cmd->add_option("--u", u_text, "upper clip bound (\"inf\" allowed)")->capture_default_str();
  sim_cmd->add_option("--seed", sim.seed, "master seed (default: $WTC_SEED or 20190101)")->capture_default_str();
  sim_cmd->add_option("--output", sim.output, "CSV path; sidecar and manifest go next to it")->capture_default_str();

  // asymptotics
  AsymptoticsOptions asy;
  auto* asy_cmd = app.add_subcommand(
      "asymptotics",
      "Relative efficiency and influence curves. aeff.csv: v,aeff_tilde,aeff_star. "
      "influence.csv: beta,v,if_tilde,if_star for Gamma(scale gamma-scale, shape beta) contamination.");
  asy_cmd->add_option("--c0", asy.c0)->capture_default_str();
  asy_cmd->add_option("--alpha0", asy.alpha0)->capture_default_str();
  asy_cmd->add_option("--d0", asy.d0)->capture_default_str();
  asy_cmd->add_option("--d1", asy.d1)->capture_default_str();
  asy_cmd->add_option("--u", u_text, "upper clip bound (\"inf\" allowed)")->capture_default_str();
  asy_cmd->add_option("--v-min", asy.v_min)->capture_default_str();
  asy_cmd->add_option("--v-max", asy.v_max)->capture_default_str();
  asy_cmd->add_option("--v-points", asy.v_points)->capture_default_str();
  asy_cmd->add_option("--beta-min", asy.beta_min)->capture_default_str();
  asy_cmd->add_option("--beta-max", asy.beta_max)->capture_default_str();
  asy_cmd->add_option("--beta-points", asy.beta_points)->capture_default_str();
  asy_cmd->add_option("--if-v", asy.if_v, "v values for the influence curves")->delimiter(',')->capture_default_str();
  asy_cmd->add_option("--gamma-scale", asy.gamma_scale, "contaminant scale (rate = 1/scale)")->capture_default_str();
  asy_cmd->add_option("--out-dir", asy.out_dir)->capture_default_str();

  // empirical
  EmpiricalOptions emp;
  emp.seed = env_seed;
  auto* emp_cmd = app.add_subcommand(
      "empirical",
      "Data pipeline: transformed.csv (date,value), mean_excess.csv (t,mean_excess,log_mean_excess) and "
      "deviation.csv (epsilon,tilde,star,hill_bootstrap,hill_mle,d_*,k_bootstrap,k_mle). "
      "c0 defaults to 1; (d0, d1) default to the 95% MLE interval of the shape.");
  emp_cmd->add_option("--input", emp.input)->required();
  emp_cmd->add_flag("--log-returns", emp.log_returns);
  emp_cmd->add_option("--scale", emp.scale)->capture_default_str();
  emp_cmd->add_option("--c0", emp.c0)->capture_default_str();
  emp_cmd->add_option("--v", emp.v)->capture_default_str();
  emp_cmd->add_option("--u", u_text, "upper clip bound (\"inf\" allowed)")->capture_default_str();
  emp_cmd->add_option("--d0", d0_text);
  emp_cmd->add_option("--d1", d1_text);
  emp_cmd->add_option("--eps-max", emp.eps_max)->capture_default_str();
  emp_cmd->add_option("--eps-step", emp.eps_step)->capture_default_str();
  emp_cmd->add_option("--bootstrap", emp.bootstrap, "bootstrap resamples for k selection")->capture_default_str();
  emp_cmd->add_option("--gamma-scale", emp.gamma_scale, "contaminant scale (rate = 1/scale)")->capture_default_str();
  emp_cmd->add_option("--gamma-shape", emp.gamma_shape, "contaminant shape")->capture_default_str();
  emp_cmd->add_option("--seed", emp.seed, "contamination seed (default: $WTC_SEED or 20190101)")->capture_default_str();
  emp_cmd->add_option("--out-dir", emp.out_dir)->capture_default_str();

  // replay
  std::string manifest_path, replay_dir;
  auto* replay_cmd = app.add_subcommand("replay", "Re-run a command from its manifest");
  replay_cmd->add_option("manifest", manifest_path, "manifest JSON")->required();
  replay_cmd->add_option("--out-dir", replay_dir, "write outputs here instead of the recorded paths");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    const double u = parse_real(u_text, "--u");
    std::optional<double> d0, d1;
    if (!d0_text.empty()) d0 = parse_real(d0_text, "--d0");
    if (!d1_text.empty()) d1 = parse_real(d1_text, "--d1");
    if (*est_cmd) {
      est.u = u;
      est.d0 = d0;
      est.d1 = d1;
      return run_estimate(est);
    }
    if (*sim_cmd) {
      sim.u = u;
      sim.threads = threads;
      return run_simulate(sim);
    }
    if (*asy_cmd) {
      asy.u = u;
      return run_asymptotics(asy);
    }
    if (*emp_cmd) {
      emp.u = u;
      emp.d0 = d0;
      emp.d1 = d1;
      emp.threads = threads;
      return run_empirical(emp);
    }
    if (*replay_cmd) return run_replay(manifest_path, replay_dir, threads);
  } catch (const NoRootError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  } catch (const ConvergenceError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const DomainError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const InsufficientDataError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const DegenerateError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}

}  // namespace wtc::cli
