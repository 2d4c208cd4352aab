#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>

// Seedable 64-bit generator with counter-derived substreams, plus exact
// binomial and hypergeometric variate generation by table-free inversion.

namespace prevkit {

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace detail

// SplitMix64 stream. Substreams are derived by hashing (seed, stream ids),
// so replication i depends only on the master seed and its own identity.
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed) : state_(seed) {
    // burn-in mixes a low-entropy seed
    detail::splitmix64(state_);
  }

  static RandomStream substream(std::uint64_t seed, std::uint64_t id_a,
                                std::uint64_t id_b) {
    std::uint64_t s = seed;
    std::uint64_t h = detail::splitmix64(s);
    s ^= id_a + 0x9e3779b97f4a7c15ULL;
    h ^= detail::splitmix64(s);
    s ^= id_b + 0xd1b54a32d192ed03ULL;
    h ^= detail::splitmix64(s);
    return RandomStream(h);
  }

  std::uint64_t next_u64() { return detail::splitmix64(state_); }

  // uniform on [0,1) with 53 random bits
  double next_uniform() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

 private:
  std::uint64_t state_;
};

namespace detail {

inline double lchoose(std::int64_t a, std::int64_t b) {
  return std::lgamma(static_cast<double>(a) + 1.0) -
         std::lgamma(static_cast<double>(b) + 1.0) -
         std::lgamma(static_cast<double>(a - b) + 1.0);
}

// Inversion over a zig-zag enumeration outward from the mode. Any fixed
// ordering of outcomes partitions [0,1) into intervals of length pmf(k),
// so the marginal distribution stays exact. Starting at the mode keeps the
// expected scan length O(sd) and avoids pmf underflow at the tails. The
// pmf is advanced by the one-step ratio in each direction.
//
// RatioUp(k) = pmf(k+1)/pmf(k), RatioDown(k) = pmf(k-1)/pmf(k).
template <typename RatioUp, typename RatioDown>
std::int64_t mode_inversion(std::int64_t lo, std::int64_t hi, std::int64_t mode,
                            double pmf_mode, RatioUp&& up, RatioDown&& down,
                            double u) {
  double cum = pmf_mode;
  if (u < cum) return mode;
  std::int64_t below = mode, above = mode;
  double p_below = pmf_mode, p_above = pmf_mode;
  bool can_below = mode > lo, can_above = mode < hi;
  if (can_below) p_below *= down(mode);
  if (can_above) p_above *= up(mode);
  while (can_below || can_above) {
    if (can_above && (!can_below || p_above >= p_below)) {
      ++above;
      cum += p_above;
      if (u < cum) return above;
      can_above = above < hi;
      if (can_above) p_above *= up(above);
    } else {
      --below;
      cum += p_below;
      if (u < cum) return below;
      can_below = below > lo;
      if (can_below) p_below *= down(below);
    }
  }
  // u landed in the rounding residue beyond the accumulated mass
  return mode;
}

}  // namespace detail

inline std::int64_t binomial_draw(std::int64_t trials, double p,
                                  RandomStream& stream) {
  if (!(p >= 0.0 && p <= 1.0))
    throw std::invalid_argument("binomial_draw: p must lie in [0,1]");
  if (trials < 0) throw std::invalid_argument("binomial_draw: negative trials");
  if (trials == 0 || p == 0.0) return 0;
  if (p == 1.0) return trials;
  const double u = stream.next_uniform();
  const double n = static_cast<double>(trials);
  const std::int64_t mode = std::min(
      trials, static_cast<std::int64_t>(std::floor((n + 1.0) * p)));
  const double pmf_mode =
      std::exp(detail::lchoose(trials, mode) +
               static_cast<double>(mode) * std::log(p) +
               static_cast<double>(trials - mode) * std::log1p(-p));
  const double odds = p / (1.0 - p);
  auto up = [n, odds](std::int64_t k) {
    return odds * (n - static_cast<double>(k)) / (static_cast<double>(k) + 1.0);
  };
  auto down = [n, odds](std::int64_t k) {
    return static_cast<double>(k) / (odds * (n - static_cast<double>(k) + 1.0));
  };
  return detail::mode_inversion(std::int64_t{0}, trials, mode, pmf_mode, up,
                                down, u);
}

// Hypergeometric(N, K, n): marked units among n drawn without replacement
// from a population of N containing K marked.
inline std::int64_t hypergeometric_draw(std::int64_t N, std::int64_t K,
                                        std::int64_t n, RandomStream& stream) {
  if (K < 0 || K > N) throw std::invalid_argument("hypergeometric_draw: K out of range");
  if (n < 0 || n > N) throw std::invalid_argument("hypergeometric_draw: n out of range");
  const std::int64_t lo = std::max<std::int64_t>(0, n + K - N);
  const std::int64_t hi = std::min(K, n);
  if (lo == hi) return lo;
  const double u = stream.next_uniform();
  const std::int64_t mode = std::clamp(
      static_cast<std::int64_t>(std::floor(
          (static_cast<double>(n) + 1.0) * (static_cast<double>(K) + 1.0) /
          (static_cast<double>(N) + 2.0))),
      lo, hi);
  const double pmf_mode = std::exp(detail::lchoose(K, mode) +
                                   detail::lchoose(N - K, n - mode) -
                                   detail::lchoose(N, n));
  auto up = [N, K, n](std::int64_t k) {
    return (static_cast<double>(K - k) * static_cast<double>(n - k)) /
           ((static_cast<double>(k) + 1.0) *
            static_cast<double>(N - K - n + k + 1));
  };
  auto down = [N, K, n](std::int64_t k) {
    return (static_cast<double>(k) * static_cast<double>(N - K - n + k)) /
           (static_cast<double>(K - k + 1) * static_cast<double>(n - k + 1));
  };
  return detail::mode_inversion(lo, hi, mode, pmf_mode, up, down, u);
}

}  // namespace prevkit
