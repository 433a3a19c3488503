#pragma once

#include <array>
#include <cmath>
#include <cstdint>

namespace hyperlab {

// SplitMix64 step (Steele/Lea/Flood). Used for seeding only.
inline uint64_t splitmix64_next(uint64_t& state) {
  uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Stream-splitting function: run i of an ensemble with master seed s uses
// the generator seeded with stream_seed(s, i). Golden-gamma spacing in the
// SplitMix64 seed space keeps distinct indices statistically independent,
// and the mapping is a pure function of (s, i), so results never depend on
// scheduling.
inline uint64_t stream_seed(uint64_t master_seed, uint64_t stream_index) {
  uint64_t s = master_seed + 0x9e3779b97f4a7c15ULL * (stream_index + 1);
  return splitmix64_next(s);
}

// xoshiro256** with the sampling helpers the simulations need. All draws are
// deterministic functions of the seed, so a run is bit-reproducible for a
// fixed seed regardless of what other threads do.
class Rng {
 public:
  explicit Rng(uint64_t seed) {
    uint64_t sm = seed;
    for (auto& w : state_) w = splitmix64_next(sm);
    if ((state_[0] | state_[1] | state_[2] | state_[3]) == 0) state_[0] = 1;
  }

  static Rng stream(uint64_t master_seed, uint64_t stream_index) {
    return Rng(stream_seed(master_seed, stream_index));
  }

  uint64_t next_u64() {
    const uint64_t result = rotl(state_[1] * 5, 7) * 9;
    const uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
  }

  // Uniform on [0, 1), 53-bit resolution.
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  // Uniform on (0, 1]; safe as a log() argument.
  double uniform_pos() {
    return static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
  }

  // Uniform integer in [0, bound), bound >= 1. Rejection, no modulo bias.
  uint64_t below(uint64_t bound) {
    const uint64_t threshold = (-bound) % bound;
    for (;;) {
      const uint64_t x = next_u64();
      if (x >= threshold) return x % bound;
    }
  }

  // Standard normal via the polar method; second variate cached.
  double normal() {
    if (has_cached_) {
      has_cached_ = false;
      return cached_;
    }
    double u, v, r2;
    do {
      u = 2.0 * uniform() - 1.0;
      v = 2.0 * uniform() - 1.0;
      r2 = u * u + v * v;
    } while (r2 >= 1.0 || r2 == 0.0);
    const double f = std::sqrt(-2.0 * std::log(r2) / r2);
    cached_ = v * f;
    has_cached_ = true;
    return u * f;
  }

  // Exact Binomial(trials, prob) by CDF inversion, with the point mass at 0
  // computed in log space so huge trial counts with tiny prob stay exact.
  // When trials*|log1p(-prob)| would underflow the starting pmf, the draw is
  // split into two independent halves (Binomial additivity), which keeps the
  // inversion exact for any mean.
  uint64_t binomial(uint64_t trials, double prob) {
    if (trials == 0 || !(prob > 0.0)) return 0;
    if (prob >= 1.0) return trials;
    const double log_q = std::log1p(-prob);
    if (static_cast<double>(trials) * log_q < -700.0) {
      const uint64_t half = trials / 2;
      return binomial(half, prob) + binomial(trials - half, prob);
    }
    double pmf = std::exp(static_cast<double>(trials) * log_q);
    double cdf = pmf;
    const double odds = prob / (1.0 - prob);
    const double u = uniform();
    uint64_t m = 0;
    while (u > cdf && m < trials) {
      pmf *= odds * static_cast<double>(trials - m) / static_cast<double>(m + 1);
      cdf += pmf;
      ++m;
      if (pmf <= 0.0) break;  // tail underflow: cdf cannot grow further
    }
    return m;
  }

  // Number of failures before the first success, P(G=g) = (1-p)^g p, by
  // inversion of the geometric CDF. log1p keeps it exact for tiny p.
  // Results that would not fit in uint64_t saturate (callers compare against
  // a remaining range and stop).
  uint64_t geometric_skip(double prob) {
    if (prob >= 1.0) return 0;
    const double g = std::floor(std::log(uniform_pos()) / std::log1p(-prob));
    if (!(g < 9.0e18)) return UINT64_MAX;
    return static_cast<uint64_t>(g);
  }

 private:
  static uint64_t rotl(uint64_t x, int s) { return (x << s) | (x >> (64 - s)); }

  std::array<uint64_t, 4> state_{};
  double cached_ = 0.0;
  bool has_cached_ = false;
};

}  // namespace hyperlab
