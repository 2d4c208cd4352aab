#pragma once

#include <bit>
#include <cmath>
#include <cstdint>
#include <stdexcept>

#include "prevkit/estimators.hpp"
#include "prevkit/intervals.hpp"
#include "prevkit/rng.hpp"

// Finite-population Monte Carlo engine: realize test outcomes over a
// population with a fixed number of true cases, draw a sample without
// replacement, and produce one estimate plus intervals per replication.

namespace prevkit {

struct ScenarioConfig {
  std::int64_t population_size;  // N
  double true_prevalence;        // pi_c
  double sampling_rate;          // phi
  TestKit kit;
  std::int64_t replications;
  double alpha;
  std::uint64_t seed;

  ScenarioConfig(std::int64_t N, double pi_c, double phi, TestKit k,
                 std::int64_t reps, double a, std::uint64_t sd)
      : population_size(N), true_prevalence(pi_c), sampling_rate(phi),
        kit(k), replications(reps), alpha(a), seed(sd) {
    if (N < 2) throw std::invalid_argument("ScenarioConfig: N must be >= 2");
    if (!(pi_c >= 0.0 && pi_c <= 1.0))
      throw std::invalid_argument("ScenarioConfig: true prevalence must lie in [0,1]");
    if (!(phi > 0.0 && phi <= 1.0))
      throw std::invalid_argument("ScenarioConfig: sampling rate must lie in (0,1]");
    if (!(a > 0.0 && a < 1.0))
      throw std::invalid_argument("ScenarioConfig: alpha must lie in (0,1)");
    const std::int64_t n = sample_size();
    if (n < 2 || n > N)
      throw std::invalid_argument("ScenarioConfig: round(phi*N) must lie in [2, N]");
  }

  // half-up rounding; integral on the reference parameter grids
  std::int64_t sample_size() const {
    return static_cast<std::int64_t>(std::floor(
        sampling_rate * static_cast<double>(population_size) + 0.5));
  }

  std::int64_t true_cases() const {
    return static_cast<std::int64_t>(std::floor(
        true_prevalence * static_cast<double>(population_size) + 0.5));
  }

  // stable identity for substream derivation
  std::uint64_t scenario_id() const {
    auto bits = [](double x) { return std::bit_cast<std::uint64_t>(x); };
    std::uint64_t s = static_cast<std::uint64_t>(population_size);
    s = detail::splitmix64(s) ^ bits(true_prevalence);
    s = detail::splitmix64(s) ^ bits(sampling_rate);
    s = detail::splitmix64(s) ^ bits(kit.sensitivity);
    s = detail::splitmix64(s) ^ bits(kit.specificity);
    s = detail::splitmix64(s) ^ bits(alpha);
    return detail::splitmix64(s);
  }
};

struct PopulationRealization {
  std::int64_t n_c_star;   // would-be positives were the whole population tested
  std::int64_t true_cases; // N_c
};

struct ReplicationResult {
  SampleSummary sample;
  PrevalenceEstimate estimate;
  Interval wald;
  Interval credible;
};

inline PopulationRealization realize_population(const ScenarioConfig& cfg,
                                                RandomStream& stream) {
  const std::int64_t n_c = cfg.true_cases();
  const std::int64_t star =
      binomial_draw(n_c, cfg.kit.sensitivity, stream) +
      binomial_draw(cfg.population_size - n_c, 1.0 - cfg.kit.specificity, stream);
  return {star, n_c};
}

// Test-then-sample: realize the whole population's test outcomes, then draw
// the sample without replacement from it.
inline ReplicationResult replicate(const ScenarioConfig& cfg,
                                   RandomStream& stream) {
  const PopulationRealization pop = realize_population(cfg, stream);
  const std::int64_t n = cfg.sample_size();
  const std::int64_t n_pos =
      hypergeometric_draw(cfg.population_size, pop.n_c_star, n, stream);
  const SampleSummary sample(cfg.population_size, n, n_pos);
  PrevalenceEstimate est = estimate(sample, cfg.kit);
  Interval wald = wald_ci(est.pi_c_hat, est.se_pi_c, cfg.alpha);
  Interval credible = credible_misclass(sample, cfg.kit, cfg.alpha);
  return {sample, est, wald, credible};
}

inline RandomStream replication_stream(const ScenarioConfig& cfg,
                                       std::int64_t replication_index) {
  return RandomStream::substream(cfg.seed, cfg.scenario_id(),
                                 static_cast<std::uint64_t>(replication_index));
}

}  // namespace prevkit
