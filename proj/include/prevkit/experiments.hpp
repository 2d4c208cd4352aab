#pragma once

#include <cstdint>
#include <stdexcept>
#include <thread>
#include <vector>

#include "prevkit/sim.hpp"

// Scenario-grid runner: aggregate replication results into the summary
// metrics reported per simulation cell, plus the standard-error sweep over
// population size.

namespace prevkit {

// Order-independent accumulation: per-replication values are stored by
// replication index and reduced sequentially with compensated summation,
// so results do not depend on the degree of parallelism.
class KahanSum {
 public:
  void add(double x) {
    const double y = x - comp_;
    const double t = sum_ + y;
    comp_ = (t - sum_) - y;
    sum_ = t;
  }
  double value() const { return sum_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

// Minimal per-replication record; enough to rebuild every summary column.
struct ReplicationRow {
  std::int64_t index;
  std::int64_t positives;
  double pi_c_hat;
  double se_pi_c;
  double wald_lower, wald_upper;
  double cred_lower, cred_upper;
};

struct ScenarioSummary {
  ScenarioConfig config;
  double mean_estimate;
  double sd_estimate;
  double avg_se;
  double wald_coverage;
  double wald_avg_width;
  double cred_coverage;
  double cred_avg_width;
};

struct SweepRow {
  std::int64_t population_size;
  double se_mle;        // mean SE from the uncorrected variance
  double se_new;        // mean SE from the misclassification-aware variance
  double se_empirical;  // SD of the bias-corrected estimate across replications
  double se_fpc;        // mean SE from the plain FPC variance
};

struct GridConfig {
  std::vector<std::int64_t> population_sizes;
  std::vector<TestKit> kits;
  std::vector<double> prevalences;
  std::vector<double> sampling_rates;
  std::int64_t replications;
  double alpha;
  std::uint64_t seed;
};

struct SweepConfig {
  std::int64_t sample_size = 100;
  double true_prevalence = 0.2;
  std::int64_t n_min = 120;
  std::int64_t n_max = 2000;
  std::int64_t n_step = 20;
  TestKit kit{0.9, 0.95};
  std::int64_t replications = 20000;
  std::uint64_t seed = 0;
};

namespace detail {

template <typename Fn>
void parallel_for(std::int64_t count, unsigned threads, Fn&& body) {
  if (threads <= 1 || count < 2) {
    for (std::int64_t i = 0; i < count; ++i) body(i);
    return;
  }
  const unsigned workers = std::min<unsigned>(threads, static_cast<unsigned>(count));
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      for (std::int64_t i = w; i < count; i += workers) body(i);
    });
  }
  for (auto& t : pool) t.join();
}

}  // namespace detail

inline std::vector<ReplicationRow> run_replications(const ScenarioConfig& cfg,
                                                    unsigned threads = 1) {
  if (cfg.replications < 1)
    throw std::invalid_argument("run_replications: at least one replication required");
  std::vector<ReplicationRow> rows(static_cast<std::size_t>(cfg.replications));
  detail::parallel_for(cfg.replications, threads, [&](std::int64_t i) {
    RandomStream stream = replication_stream(cfg, i);
    const ReplicationResult r = replicate(cfg, stream);
    rows[static_cast<std::size_t>(i)] = {
        i,          r.sample.positives, r.estimate.pi_c_hat,
        r.estimate.se_pi_c,
        r.wald.lower,  r.wald.upper,
        r.credible.lower, r.credible.upper};
  });
  return rows;
}

// Aggregate persisted rows back into a summary; run_scenario is exactly
// this composition, so re-aggregation reproduces its output.
inline ScenarioSummary summarize(const ScenarioConfig& cfg,
                                 const std::vector<ReplicationRow>& rows) {
  if (rows.empty())
    throw std::invalid_argument("summarize: no replications");
  const double true_pi_c =
      static_cast<double>(cfg.true_cases()) / static_cast<double>(cfg.population_size);
  KahanSum est, se, wald_cov, wald_w, cred_cov, cred_w;
  for (const auto& r : rows) {
    est.add(r.pi_c_hat);
    se.add(r.se_pi_c);
    wald_cov.add(r.wald_lower <= true_pi_c && true_pi_c <= r.wald_upper ? 1.0 : 0.0);
    wald_w.add(r.wald_upper - r.wald_lower);
    cred_cov.add(r.cred_lower <= true_pi_c && true_pi_c <= r.cred_upper ? 1.0 : 0.0);
    cred_w.add(r.cred_upper - r.cred_lower);
  }
  const double m = static_cast<double>(rows.size());
  const double mean = est.value() / m;
  KahanSum ss;
  for (const auto& r : rows) {
    const double d = r.pi_c_hat - mean;
    ss.add(d * d);
  }
  const double sd = rows.size() > 1 ? std::sqrt(ss.value() / (m - 1.0)) : 0.0;
  return {cfg,
          mean,
          sd,
          se.value() / m,
          wald_cov.value() / m,
          wald_w.value() / m,
          cred_cov.value() / m,
          cred_w.value() / m};
}

inline ScenarioSummary run_scenario(const ScenarioConfig& cfg,
                                    unsigned threads = 1) {
  return summarize(cfg, run_replications(cfg, threads));
}

// One summary per grid cell, ordered (N, kit, prevalence, sampling rate).
inline std::vector<ScenarioSummary> run_table_grid(const GridConfig& grid,
                                                   unsigned threads = 1) {
  if (grid.population_sizes.empty() || grid.kits.empty() ||
      grid.prevalences.empty() || grid.sampling_rates.empty())
    throw std::invalid_argument("run_table_grid: empty grid");
  if (grid.replications < 1)
    throw std::invalid_argument("run_table_grid: at least one replication required");
  std::vector<ScenarioSummary> out;
  out.reserve(grid.population_sizes.size() * grid.kits.size() *
              grid.prevalences.size() * grid.sampling_rates.size());
  for (std::int64_t N : grid.population_sizes)
    for (const TestKit& kit : grid.kits)
      for (double pi_c : grid.prevalences)
        for (double phi : grid.sampling_rates)
          out.push_back(run_scenario(
              ScenarioConfig(N, pi_c, phi, kit, grid.replications, grid.alpha,
                             grid.seed),
              threads));
  return out;
}

inline GridConfig reference_grid(std::int64_t reps, std::uint64_t seed) {
  return {{100, 500, 1000},
          {TestKit(0.9, 0.95), TestKit(0.8, 0.85)},
          {0.1, 0.3, 0.5},
          {0.1, 0.3, 0.5},
          reps,
          0.05,
          seed};
}

// Standard-error sweep at fixed sample size over a range of population
// sizes. Intervals are not needed here; only the SE aggregates are kept.
inline std::vector<SweepRow> run_figure1_sweep(const SweepConfig& sweep,
                                               unsigned threads = 1) {
  if (sweep.replications < 1)
    throw std::invalid_argument("run_figure1_sweep: at least one replication required");
  if (sweep.n_step < 1 || sweep.n_max < sweep.n_min)
    throw std::invalid_argument("run_figure1_sweep: bad population grid");
  std::vector<SweepRow> rows;
  for (std::int64_t N = sweep.n_min; N <= sweep.n_max; N += sweep.n_step) {
    const double phi = static_cast<double>(sweep.sample_size) / static_cast<double>(N);
    const ScenarioConfig cfg(N, sweep.true_prevalence, phi, sweep.kit,
                             sweep.replications, 0.05, sweep.seed);
    const double denom = sweep.kit.youden_denominator();
    struct PerRep { double pi_c_hat, se1, se2, se3; };
    std::vector<PerRep> reps(static_cast<std::size_t>(cfg.replications));
    detail::parallel_for(cfg.replications, threads, [&](std::int64_t i) {
      RandomStream stream = replication_stream(cfg, i);
      const PopulationRealization pop = realize_population(cfg, stream);
      const std::int64_t n = cfg.sample_size();
      const std::int64_t n_pos =
          hypergeometric_draw(cfg.population_size, pop.n_c_star, n, stream);
      const PrevalenceEstimate est =
          estimate(SampleSummary(cfg.population_size, n, n_pos), cfg.kit);
      reps[static_cast<std::size_t>(i)] = {
          est.pi_c_hat, std::sqrt(est.variances.v1) / denom,
          std::sqrt(est.variances.v2) / denom,
          std::sqrt(est.variances.v3) / denom};
    });
    KahanSum mean_est, s1, s2, s3;
    for (const auto& r : reps) {
      mean_est.add(r.pi_c_hat);
      s1.add(r.se1);
      s2.add(r.se2);
      s3.add(r.se3);
    }
    const double m = static_cast<double>(reps.size());
    const double mean = mean_est.value() / m;
    KahanSum ss;
    for (const auto& r : reps) {
      const double d = r.pi_c_hat - mean;
      ss.add(d * d);
    }
    const double sd =
        reps.size() > 1 ? std::sqrt(ss.value() / (m - 1.0)) : 0.0;
    rows.push_back({N, s1.value() / m, s3.value() / m, sd, s2.value() / m});
  }
  return rows;
}

}  // namespace prevkit
