#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>

// Point estimation and variance estimation for test positivity and true
// prevalence under finite-population sampling with a known imperfect test.

namespace prevkit {

// Diagnostic test characteristics. Requires Se + Sp > 1 (informative test),
// otherwise the bias-correction denominator is not strictly positive.
struct TestKit {
  double sensitivity;
  double specificity;

  TestKit(double se, double sp) : sensitivity(se), specificity(sp) {
    if (!(se >= 0.0 && se <= 1.0) || !(sp >= 0.0 && sp <= 1.0))
      throw std::invalid_argument("TestKit: Se and Sp must lie in [0,1]");
    if (!(se + sp > 1.0))
      throw std::invalid_argument("TestKit: Se + Sp must exceed 1");
  }

  double youden_denominator() const { return sensitivity + specificity - 1.0; }
  bool is_perfect() const { return sensitivity == 1.0 && specificity == 1.0; }
};

// Observed sample: n individuals drawn without replacement from a population
// of size N, n_pos of them testing positive. n >= 2 keeps the finite
// population correction denominator n-1 positive.
struct SampleSummary {
  std::int64_t population_size;
  std::int64_t sample_size;
  std::int64_t positives;

  SampleSummary(std::int64_t pop, std::int64_t n, std::int64_t n_pos)
      : population_size(pop), sample_size(n), positives(n_pos) {
    if (n < 2) throw std::invalid_argument("SampleSummary: sample size must be >= 2");
    if (n > pop) throw std::invalid_argument("SampleSummary: sample size exceeds population");
    if (n_pos < 0 || n_pos > n)
      throw std::invalid_argument("SampleSummary: positives must lie in [0, n]");
  }
};

struct VarianceBundle {
  double v1;          // no finite population correction
  double v2;          // FPC-adjusted
  double v3;          // FPC-adjusted plus misclassification inflation
  double extra_term;  // the misclassification component; v3 = v2 + extra_term
};

struct PrevalenceEstimate {
  double pi_hat;      // test positivity n+/n
  double pi_c_hat;    // thresholded bias-corrected prevalence, in [0,1]
  double pi_c_raw;    // untruncated bias-corrected value, may leave [0,1]
  VarianceBundle variances;
  double se_pi_c;     // sqrt(v3) / (Se + Sp - 1)
};

inline double positivity_rate(const SampleSummary& s) {
  return static_cast<double>(s.positives) / static_cast<double>(s.sample_size);
}

// Cochran's correction n(N-n)/(N(n-1)) for sampling without replacement.
inline double fpc_factor(std::int64_t n, std::int64_t N) {
  if (n < 2) throw std::invalid_argument("fpc_factor: n must be >= 2");
  if (n > N) throw std::invalid_argument("fpc_factor: n must not exceed N");
  return (static_cast<double>(n) * static_cast<double>(N - n)) /
         (static_cast<double>(N) * static_cast<double>(n - 1));
}

inline double var_naive(double pi_hat, std::int64_t n) {
  if (n < 1) throw std::invalid_argument("var_naive: n must be >= 1");
  return pi_hat * (1.0 - pi_hat) / static_cast<double>(n);
}

inline double var_fpc(double pi_hat, std::int64_t n, std::int64_t N) {
  return fpc_factor(n, N) * var_naive(pi_hat, n);
}

struct RoganGladen {
  double raw;
  double thresholded;
};

// Bias-corrected prevalence (pi_hat + Sp - 1)/(Se + Sp - 1), thresholded to
// [0,1]: 0 when pi_hat <= 1-Sp, 1 when pi_hat >= Se.
inline RoganGladen rogan_gladen(double pi_hat, const TestKit& kit) {
  // (pi_hat - (1-Sp)) keeps the perfect-test case an exact identity
  const double raw = (pi_hat - (1.0 - kit.specificity)) / kit.youden_denominator();
  double thr = raw;
  if (pi_hat <= 1.0 - kit.specificity) thr = 0.0;
  else if (pi_hat >= kit.sensitivity) thr = 1.0;
  return {raw, thr};
}

// Extra variance of the population-level positive count induced by the
// imperfect test, scaled to the proportion: (1/N)[pc*Se(1-Se) + (1-pc)*Sp(1-Sp)].
inline double misclass_extra_variance(double pi_c_hat, const TestKit& kit,
                                      std::int64_t N) {
  if (N < 1) throw std::invalid_argument("misclass_extra_variance: N must be >= 1");
  const double se = kit.sensitivity, sp = kit.specificity;
  return (pi_c_hat * se * (1.0 - se) + (1.0 - pi_c_hat) * sp * (1.0 - sp)) /
         static_cast<double>(N);
}

inline VarianceBundle var_total(double pi_hat, double pi_c_hat,
                                const SampleSummary& s, const TestKit& kit) {
  VarianceBundle b{};
  b.v1 = var_naive(pi_hat, s.sample_size);
  b.v2 = var_fpc(pi_hat, s.sample_size, s.population_size);
  b.extra_term = misclass_extra_variance(pi_c_hat, kit, s.population_size);
  b.v3 = b.v2 + b.extra_term;
  return b;
}

// Propagate a variance of pi_hat through the bias correction.
inline double var_corrected(double var_pi_hat, const TestKit& kit) {
  const double d = kit.youden_denominator();
  return var_pi_hat / (d * d);
}

// Full estimate from one sample. The thresholded prevalence is used as the
// plug-in inside the misclassification variance term.
inline PrevalenceEstimate estimate(const SampleSummary& s, const TestKit& kit) {
  PrevalenceEstimate e{};
  e.pi_hat = positivity_rate(s);
  const RoganGladen rg = rogan_gladen(e.pi_hat, kit);
  e.pi_c_raw = rg.raw;
  e.pi_c_hat = rg.thresholded;
  e.variances = var_total(e.pi_hat, e.pi_c_hat, s, kit);
  e.se_pi_c = std::sqrt(e.variances.v3) / kit.youden_denominator();
  return e;
}

}  // namespace prevkit
