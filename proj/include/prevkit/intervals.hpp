#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "prevkit/beta.hpp"
#include "prevkit/estimators.hpp"
#include "prevkit/normal.hpp"

// Wald confidence intervals and scale/shift-adjusted Bayesian credible
// intervals for the true prevalence.

namespace prevkit {

enum class IntervalMethod { wald, jeffreys_adjusted_gold, credible_misclass };

struct Interval {
  double lower;
  double upper;
  IntervalMethod method;
  double nominal_level;

  double width() const { return upper - lower; }
  bool covers(double value) const { return lower <= value && value <= upper; }
};

namespace detail {

inline void check_alpha(double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0))
    throw std::invalid_argument("interval: alpha must lie in (0,1)");
}

inline Interval clip_to_unit(double lo, double hi, IntervalMethod m, double alpha) {
  if (lo > hi) std::swap(lo, hi);  // floating-point margin only
  lo = std::clamp(lo, 0.0, 1.0);
  hi = std::clamp(hi, 0.0, 1.0);
  return {lo, hi, m, 1.0 - alpha};
}

inline BetaParams jeffreys_posterior(const SampleSummary& s) {
  return BetaParams(static_cast<double>(s.positives) + 0.5,
                    static_cast<double>(s.sample_size - s.positives) + 0.5);
}

}  // namespace detail

inline Interval wald_ci(double pi_c_hat, double se, double alpha) {
  detail::check_alpha(alpha);
  if (se < 0.0) throw std::invalid_argument("wald_ci: se must be nonnegative");
  const double z = normal_quantile(1.0 - alpha / 2.0);
  return detail::clip_to_unit(pi_c_hat - z * se, pi_c_hat + z * se,
                              IntervalMethod::wald, alpha);
}

// Gold-standard adjusted Jeffreys interval: posterior percentiles rescaled
// toward pi_hat by a = sqrt(FPC), b = pi_hat(1-a).
inline Interval jeffreys_adjusted_gold(const SampleSummary& s, double alpha) {
  detail::check_alpha(alpha);
  const double pi_hat = positivity_rate(s);
  const double a = std::sqrt(fpc_factor(s.sample_size, s.population_size));
  const double b = pi_hat * (1.0 - a);
  const BetaParams post = detail::jeffreys_posterior(s);
  const double lo = a * beta_quantile(alpha / 2.0, post) + b;
  const double hi = a * beta_quantile(1.0 - alpha / 2.0, post) + b;
  return detail::clip_to_unit(lo, hi, IntervalMethod::jeffreys_adjusted_gold, alpha);
}

// Misclassification-corrected credible interval: posterior percentiles scaled
// by a' = sqrt(v3/v1), shifted by b' = pi_hat(1-a'), then pushed through the
// bias correction and clipped to [0,1].
//
// When pi_hat is 0 or 1 the ratio v3/v1 is undefined; the posterior mean
// (n+ + 0.5)/(n + 1) substitutes for pi_hat inside the ratio only.
inline Interval credible_misclass(const SampleSummary& s, const TestKit& kit,
                                  double alpha) {
  detail::check_alpha(alpha);
  const double pi_hat = positivity_rate(s);

  double ratio_pi = pi_hat;
  if (s.positives == 0 || s.positives == s.sample_size)
    ratio_pi = (static_cast<double>(s.positives) + 0.5) /
               (static_cast<double>(s.sample_size) + 1.0);

  const double pi_c = rogan_gladen(pi_hat, kit).thresholded;
  const VarianceBundle vb = var_total(ratio_pi, pi_c, s, kit);
  double a_prime;
  if (vb.v1 > 0.0) {
    a_prime = std::sqrt(vb.v3 / vb.v1);
  } else {
    // census with a perfect test: zero sampling and misclassification variance
    a_prime = 0.0;
  }
  const double b_prime = pi_hat * (1.0 - a_prime);

  const BetaParams post = detail::jeffreys_posterior(s);
  const double d = kit.youden_denominator();
  const double fp_rate = 1.0 - kit.specificity;
  const double lo =
      ((a_prime * beta_quantile(alpha / 2.0, post) + b_prime) - fp_rate) / d;
  const double hi =
      ((a_prime * beta_quantile(1.0 - alpha / 2.0, post) + b_prime) - fp_rate) / d;
  return detail::clip_to_unit(lo, hi, IntervalMethod::credible_misclass, alpha);
}

}  // namespace prevkit
