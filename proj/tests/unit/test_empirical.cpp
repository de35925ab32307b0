#include <cmath>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "wtc/empirical.hpp"
#include "wtc/errors.hpp"

using namespace wtc;

namespace {

SampleSummary weibull_sample(double c0, double alpha, std::size_t n, std::uint64_t seed) {
  Rng rng(seed);
  return SampleSummary(DistModel::weibull(c0, alpha).sample(rng, n));
}

}  // namespace

TEST_CASE("csv parsing") {
  SUBCASE("single column with header") {
    std::istringstream in("value\n1.5\n\n2.5\n");
    const auto s = parse_series_csv(in);
    CHECK(s.values == std::vector<double>{1.5, 2.5});
    CHECK(s.labels.empty());
  }
  SUBCASE("date column, no header") {
    std::istringstream in("2018-01-01,100\n2018-01-02,110.5\r\n");
    const auto s = parse_series_csv(in);
    CHECK(s.values == std::vector<double>{100.0, 110.5});
    CHECK(s.labels == std::vector<std::string>{"2018-01-01", "2018-01-02"});
  }
  SUBCASE("bad rows are reported with line numbers") {
    std::istringstream in("value\n1.0\nabc\n2.0\n3.0x\n");
    try {
      parse_series_csv(in, "prices.csv");
      FAIL("expected ParseError");
    } catch (const ParseError& e) {
      const std::string msg = e.what();
      CHECK(msg.find("prices.csv") != std::string::npos);
      CHECK(msg.find(" 3 5") != std::string::npos);
    }
  }
  SUBCASE("missing file names the path") {
    try {
      read_series_csv("/nonexistent/returns.csv");
      FAIL("expected ParseError");
    } catch (const ParseError& e) {
      CHECK(std::string(e.what()).find("/nonexistent/returns.csv") != std::string::npos);
    }
  }
}

TEST_CASE("transform") {
  ReturnsSeries levels;
  levels.values = {100.0, 110.0, 100.0};
  const auto t = transform_series(levels, TransformSpec{true, true, 15.0});
  REQUIRE(t.sample.size() == 1);
  CHECK(t.sample.raw()[0] == doctest::Approx(15.0 * std::log(1.1)).epsilon(1e-15));
  CHECK(t.m == 1);

  ReturnsSeries returns;
  returns.values = {0.1, -0.2, 0.0, 0.3};
  const auto r = transform_series(returns, TransformSpec{false, true, 2.0});
  CHECK(std::vector<double>(r.sample.raw().begin(), r.sample.raw().end()) == std::vector<double>{0.2, 0.6});
  CHECK(r.m == 0);

  returns.values = {-0.1, -0.2};
  CHECK_THROWS_AS(transform_series(returns, TransformSpec{}), InsufficientDataError);
  levels.values = {100.0, -1.0};
  CHECK_THROWS_AS(transform_series(levels, TransformSpec{true, true, 1.0}), DomainError);
  CHECK_THROWS_AS(transform_series(returns, TransformSpec{false, true, 0.0}), ConfigError);
}

TEST_CASE("transformed sample round-trips bit for bit") {
  ReturnsSeries series;
  Rng rng(8);
  for (int i = 0; i < 300; ++i) {
    series.labels.push_back("d" + std::to_string(i));
    series.values.push_back(100.0 * std::exp(0.05 * rng.normal()));
  }
  const auto first = transform_series(series, TransformSpec{true, true, 15.0});
  std::stringstream csv;
  write_sample_csv(first, csv);
  const auto again = transform_series(parse_series_csv(csv), TransformSpec{false, true, 1.0});
  REQUIRE(again.sample.size() == first.sample.size());
  for (std::size_t i = 0; i < first.sample.size(); ++i) CHECK(again.sample.raw()[i] == first.sample.raw()[i]);
  CHECK(again.labels == first.labels);
}

TEST_CASE("mean excess function") {
  const SampleSummary two({2.0, 4.0});
  const std::vector<double> t1{1.0};
  CHECK(mean_excess_curve(two, t1).points[0].mean_excess == 2.0);

  const SampleSummary s({0.5, 1.5, 2.0, 7.0, 3.0});
  const std::vector<double> below{0.4};
  CHECK(mean_excess_curve(s, below).points[0].mean_excess == doctest::Approx(14.0 / 5 - 0.4).epsilon(1e-14));

  const std::vector<double> grid{1.0, 7.0, 9.0};
  const auto c = mean_excess_curve(s, grid);
  CHECK(c.points.size() == 1);
  CHECK(c.excluded == std::vector<double>{7.0, 9.0});

  SUBCASE("exponential tail is flat") {
    Rng rng(12);
    const SampleSummary e(DistModel::gamma(2.0, 1.0).sample(rng, 100000));
    const auto th = default_thresholds(e);
    const auto curve = mean_excess_curve(e, th);
    for (const auto& p : curve.points) {
      if (p.threshold > 2.0) break;
      CHECK(p.mean_excess == doctest::Approx(0.5).epsilon(0.1));
      CHECK(p.log_mean_excess == doctest::Approx(std::log(p.mean_excess)));
    }
  }
  SUBCASE("default thresholds") {
    const auto w = weibull_sample(1.0, 0.8, 713, 1);
    const auto th = default_thresholds(w);
    CHECK(th.size() == 50);
    for (std::size_t i = 1; i < th.size(); ++i) CHECK(th[i] > th[i - 1]);
    const auto curve = mean_excess_curve(w, th);
    CHECK(curve.excluded.empty());
    std::ostringstream out;
    write_mean_excess_csv(curve, out);
    CHECK(out.str().rfind("t,mean_excess,log_mean_excess\n", 0) == 0);
  }
}

TEST_CASE("contamination") {
  const auto s = weibull_sample(1.0, 1.0, 10000, 2);
  const auto g = DistModel::gamma(0.5, 0.5);
  Rng r0(1);
  const auto none = contaminate(s, 0.0, g, r0);
  CHECK(none.replaced == 0);
  CHECK(std::equal(none.sample.raw().begin(), none.sample.raw().end(), s.raw().begin()));
  Rng r1(1);
  CHECK(contaminate(s, 1.0, g, r1).replaced == 10000);
  Rng r2(3);
  const auto part = contaminate(s, 0.2, g, r2);
  CHECK(std::abs(static_cast<double>(part.replaced) - 2000.0) < 3.0 * std::sqrt(10000 * 0.2 * 0.8));
  Rng c(5), d(5);
  const auto x = contaminate(s, 0.3, g, c);
  const auto y = contaminate(s, 0.3, g, d);
  CHECK(std::equal(x.sample.raw().begin(), x.sample.raw().end(), y.sample.raw().begin()));
  CHECK_THROWS_AS(contaminate(s, 1.5, g, c), DomainError);
}

TEST_CASE("deviation table") {
  const auto s = weibull_sample(1.0, 0.8, 300, 6);
  DeviationConfig cfg;
  cfg.bootstrap_resamples = 20;
  const auto grid = make_eps_grid(0.3, 0.05);
  REQUIRE(grid.size() == 7);
  CHECK(grid[6] == doctest::Approx(0.3));

  const auto table = deviation_table(s, grid, cfg, 77);
  CHECK(table.d0 < table.d1);
  REQUIRE(table.rows.size() == 7);
  for (std::size_t i = 0; i + 1 < table.rows.size(); ++i) {
    const auto& r = table.rows[i];
    REQUIRE(r.tilde);
    REQUIRE(r.d_tilde);
    CHECK(*r.d_tilde == doctest::Approx(std::abs(*table.rows[i + 1].tilde - *r.tilde)));
    for (const auto* d : {&r.d_tilde, &r.d_star, &r.d_hill_bootstrap, &r.d_hill_mle})
      if (*d) CHECK(**d >= 0.0);
  }
  const auto& last = table.rows.back();
  CHECK_FALSE(last.d_tilde);
  CHECK_FALSE(last.d_star);
  CHECK_FALSE(last.d_hill_bootstrap);
  CHECK_FALSE(last.d_hill_mle);
  CHECK(table.rows[0].replaced == 0);

  cfg.threads = 3;
  const auto again = deviation_table(s, grid, cfg, 77);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    CHECK(again.rows[i].tilde == table.rows[i].tilde);
    CHECK(again.rows[i].k_bootstrap == table.rows[i].k_bootstrap);
  }

  std::ostringstream csv;
  write_deviation_csv(table, csv);
  const std::string text = csv.str();
  CHECK(text.rfind("epsilon,tilde,star,hill_bootstrap,hill_mle,d_tilde,", 0) == 0);

  const std::vector<double> one{0.1};
  const auto single = deviation_table(s, one, cfg, 1);
  CHECK_FALSE(single.rows[0].d_tilde);
  const std::vector<double> uneven{0.0, 0.1, 0.3};
  CHECK_THROWS_AS(deviation_table(s, uneven, cfg, 1), ConfigError);
  const std::vector<double> descending{0.2, 0.1};
  CHECK_THROWS_AS(deviation_table(s, descending, cfg, 1), ConfigError);
}
