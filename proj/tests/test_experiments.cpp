#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <string>

#include "prevkit/report.hpp"

using namespace prevkit;

TEST_CASE("census with a perfect test is exact every time") {
  const ScenarioConfig cfg(100, 0.3, 1.0, TestKit(1.0, 1.0), 200, 0.05, 11);
  const auto s = run_scenario(cfg);
  CHECK(s.mean_estimate == doctest::Approx(0.3).epsilon(1e-12));
  CHECK(s.sd_estimate == 0.0);
  CHECK(s.wald_coverage == 1.0);
  CHECK(s.cred_coverage == 1.0);
}

TEST_CASE("zero replications are rejected") {
  const ScenarioConfig cfg(100, 0.3, 0.3, TestKit(0.9, 0.95), 0, 0.05, 11);
  CHECK_THROWS_AS(run_scenario(cfg), std::invalid_argument);
}

TEST_CASE("grid runner") {
  SUBCASE("reference grid has 54 cells in fixed order") {
    GridConfig grid = reference_grid(2, 1);
    const auto rows = run_table_grid(grid);
    REQUIRE(rows.size() == 54);
    CHECK(rows.front().config.population_size == 100);
    CHECK(rows.back().config.population_size == 1000);
    // ordering: N, kit, prevalence, sampling rate
    CHECK(rows[0].config.kit.sensitivity == 0.9);
    CHECK(rows[9].config.kit.sensitivity == 0.8);
    CHECK(rows[0].config.true_prevalence == 0.1);
    CHECK(rows[0].config.sampling_rate == 0.1);
    CHECK(rows[1].config.sampling_rate == 0.3);
  }
  SUBCASE("singleton grid equals a direct scenario run") {
    GridConfig grid{{500}, {TestKit(0.9, 0.95)}, {0.3}, {0.3}, 50, 0.05, 3};
    const auto rows = run_table_grid(grid);
    REQUIRE(rows.size() == 1);
    const auto direct = run_scenario(
        ScenarioConfig(500, 0.3, 0.3, TestKit(0.9, 0.95), 50, 0.05, 3));
    CHECK(rows[0].mean_estimate == direct.mean_estimate);
    CHECK(rows[0].cred_avg_width == direct.cred_avg_width);
  }
  SUBCASE("empty grid is rejected") {
    GridConfig grid{{}, {TestKit(0.9, 0.95)}, {0.3}, {0.3}, 50, 0.05, 3};
    CHECK_THROWS_AS(run_table_grid(grid), std::invalid_argument);
  }
}

TEST_CASE("re-aggregating persisted replications reproduces the summary") {
  const ScenarioConfig cfg(200, 0.3, 0.25, TestKit(0.9, 0.95), 300, 0.05, 5);
  const auto rows = run_replications(cfg);
  const auto direct = run_scenario(cfg);
  const auto rebuilt = summarize(cfg, rows);
  CHECK(rebuilt.mean_estimate == direct.mean_estimate);
  CHECK(rebuilt.sd_estimate == direct.sd_estimate);
  CHECK(rebuilt.avg_se == direct.avg_se);
  CHECK(rebuilt.wald_coverage == direct.wald_coverage);
  CHECK(rebuilt.wald_avg_width == direct.wald_avg_width);
  CHECK(rebuilt.cred_coverage == direct.cred_coverage);
  CHECK(rebuilt.cred_avg_width == direct.cred_avg_width);
}

TEST_CASE("results are identical for any thread count") {
  const ScenarioConfig cfg(500, 0.3, 0.3, TestKit(0.8, 0.85), 400, 0.05, 21);
  const auto s1 = run_scenario(cfg, 1);
  const auto s8 = run_scenario(cfg, 8);
  CHECK(s1.mean_estimate == s8.mean_estimate);
  CHECK(s1.sd_estimate == s8.sd_estimate);
  CHECK(s1.avg_se == s8.avg_se);
  CHECK(s1.wald_coverage == s8.wald_coverage);
  CHECK(s1.cred_avg_width == s8.cred_avg_width);

  GridConfig grid{{100, 500}, {TestKit(0.9, 0.95)}, {0.1, 0.3}, {0.3}, 100, 0.05, 42};
  CHECK(summaries_to_csv(run_table_grid(grid, 1)) ==
        summaries_to_csv(run_table_grid(grid, 4)));
}

TEST_CASE("sweep rows keep the variance ordering and N order") {
  SweepConfig sweep;
  sweep.n_min = 120;
  sweep.n_max = 400;
  sweep.n_step = 40;
  sweep.replications = 500;
  sweep.seed = 9;
  const auto rows = run_figure1_sweep(sweep, 2);
  REQUIRE(rows.size() == 8);
  std::int64_t prev_n = 0;
  for (const auto& r : rows) {
    CHECK(r.population_size > prev_n);
    prev_n = r.population_size;
    CHECK(r.se_fpc <= r.se_new);
    CHECK(r.se_new <= r.se_mle);
    CHECK(r.se_empirical > 0.0);
  }
}

TEST_CASE("csv rendering") {
  const ScenarioConfig cfg(500, 0.3, 0.3, TestKit(0.9, 0.95), 50, 0.05, 42);
  const auto s = run_scenario(cfg);
  const std::string csv = summaries_to_csv({s});
  CHECK(csv.find("N,n,pi_c,se,sp,reps,seed,mean_est,sd_est,avg_se,wald_cov,"
                 "wald_width,cred_cov,cred_width\n") == 0);
  CHECK(csv.find("500,150,0.3,0.9,0.95,50,42,") != std::string::npos);
  // one header plus one row
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 2);
}

TEST_CASE("json rendering carries the same fields") {
  const ScenarioConfig cfg(500, 0.3, 0.3, TestKit(0.9, 0.95), 20, 0.05, 1);
  const auto s = run_scenario(cfg);
  const auto j = nlohmann::json::parse(summaries_to_json({s}));
  REQUIRE(j.is_array());
  REQUIRE(j.size() == 1);
  CHECK(j[0]["N"] == 500);
  CHECK(j[0]["n"] == 150);
  CHECK(j[0]["mean_est"].get<double>() == doctest::Approx(s.mean_estimate));
  CHECK(j[0].contains("cred_width"));
}

TEST_CASE("svg chart contains the four series") {
  SweepConfig sweep;
  sweep.n_min = 120;
  sweep.n_max = 200;
  sweep.n_step = 40;
  sweep.replications = 100;
  const auto rows = run_figure1_sweep(sweep);
  const std::string svg = sweep_to_svg(rows);
  CHECK(svg.find("<svg") == 0);
  CHECK(std::count(svg.begin(), svg.end(), '<') > 10);
  CHECK(svg.rfind("</svg>\n") == svg.size() - 7);
  std::size_t polylines = 0, pos = 0;
  while ((pos = svg.find("<polyline", pos)) != std::string::npos) {
    ++polylines;
    pos += 9;
  }
  CHECK(polylines == 4);
}
