#pragma once

#include <cmath>
#include <limits>
#include <stdexcept>

// Beta distribution special functions: log normalization constant,
// regularized incomplete beta (CDF) and its inverse (quantile).

namespace prevkit {

struct BetaParams {
  double alpha;
  double beta;

  BetaParams(double a, double b) : alpha(a), beta(b) {
    if (!(a > 0.0) || !(b > 0.0))
      throw std::invalid_argument("BetaParams: shapes must be positive");
  }
};

inline double ln_beta(const BetaParams& p) {
  return std::lgamma(p.alpha) + std::lgamma(p.beta) - std::lgamma(p.alpha + p.beta);
}

namespace detail {

// Continued fraction for the incomplete beta, modified Lentz iteration.
// Converges quickly for x < (a+1)/(a+b+2); callers reduce via symmetry.
inline double beta_cont_frac(double a, double b, double x) {
  constexpr double tiny = 1e-300;
  constexpr double eps = 1e-16;
  const double qab = a + b, qap = a + 1.0, qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::fabs(d) < tiny) d = tiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= 300; ++m) {
    const double m2 = 2.0 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < tiny) d = tiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < tiny) c = tiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < tiny) d = tiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::fabs(del - 1.0) < eps) break;
  }
  return h;
}

}  // namespace detail

// Regularized incomplete beta I_x(alpha, beta).
inline double beta_cdf(double x, const BetaParams& p) {
  if (!(x >= 0.0 && x <= 1.0))
    throw std::invalid_argument("beta_cdf: x must lie in [0,1]");
  if (x == 0.0) return 0.0;
  if (x == 1.0) return 1.0;
  const double a = p.alpha, b = p.beta;
  const double ln_front =
      a * std::log(x) + b * std::log1p(-x) - ln_beta(p);
  const double front = std::exp(ln_front);
  if (x < (a + 1.0) / (a + b + 2.0))
    return front * detail::beta_cont_frac(a, b, x) / a;
  return 1.0 - std::exp(b * std::log1p(-x) + a * std::log(x) - ln_beta(p)) *
                   detail::beta_cont_frac(b, a, 1.0 - x) / b;
}

inline double beta_pdf(double x, const BetaParams& p) {
  if (x <= 0.0 || x >= 1.0) {
    if (x == 0.0 && p.alpha == 1.0) return p.beta;
    if (x == 1.0 && p.beta == 1.0) return p.alpha;
    return 0.0;
  }
  return std::exp((p.alpha - 1.0) * std::log(x) +
                  (p.beta - 1.0) * std::log1p(-x) - ln_beta(p));
}

// Inverse CDF. Newton iteration on the CDF with a maintained bisection
// bracket; falls back to pure bisection if Newton fails to converge.
inline double beta_quantile(double q, const BetaParams& p) {
  if (!(q >= 0.0 && q <= 1.0))
    throw std::invalid_argument("beta_quantile: q must lie in [0,1]");
  if (q == 0.0) return 0.0;
  if (q == 1.0) return 1.0;

  double lo = 0.0, hi = 1.0;
  // Mean as the starting point; always interior.
  double x = p.alpha / (p.alpha + p.beta);
  constexpr double tol = 1e-14;

  for (int it = 0; it < 100; ++it) {
    const double f = beta_cdf(x, p) - q;
    if (std::fabs(f) <= tol) return x;
    if (f > 0.0) hi = x; else lo = x;
    const double dens = beta_pdf(x, p);
    double next = (dens > 0.0) ? x - f / dens : 0.5 * (lo + hi);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (next == x) break;
    x = next;
  }
  // Bisection fallback.
  for (int it = 0; it < 200 && hi - lo > std::numeric_limits<double>::epsilon(); ++it) {
    const double mid = 0.5 * (lo + hi);
    if (beta_cdf(mid, p) - q > 0.0) hi = mid; else lo = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace prevkit
