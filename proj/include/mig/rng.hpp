#pragma once

#include <cmath>
#include <complex>
#include <cstdint>

namespace mig {

// Deterministic random stream built on splitmix64. Monte Carlo code derives
// one substream per (phase, trial) pair so results do not depend on thread
// scheduling or on how many draws earlier trials consumed.
class RngStream {
 public:
  explicit RngStream(uint64_t seed) : seed_(seed), state_(seed) {}

  uint64_t next_u64() {
    state_ += 0x9e3779b97f4a7c15ull;
    uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  // Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  // Standard normal via Box-Muller; the second deviate of each pair is cached.
  double normal() {
    if (have_cached_) {
      have_cached_ = false;
      return cached_;
    }
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 2.0 * M_PI * u2;
    cached_ = r * std::sin(a);
    have_cached_ = true;
    return r * std::cos(a);
  }

  // Circular complex normal: Re and Im are independent N(0, 1/2).
  std::complex<double> cnormal() {
    const double re = normal();
    const double im = normal();
    return {re * M_SQRT1_2, im * M_SQRT1_2};
  }

  // Child stream keyed by (tag, index). Derivation uses only the construction
  // seed, never the consumption state, so substreams are order-independent.
  RngStream derived(uint64_t tag, uint64_t index) const {
    return RngStream(mix(mix(seed_ ^ 0x6a09e667f3bcc909ull, tag), index));
  }

  uint64_t seed() const { return seed_; }

 private:
  static uint64_t mix(uint64_t a, uint64_t b) {
    uint64_t z = a + 0x9e3779b97f4a7c15ull * (b + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  uint64_t seed_ = 0;
  uint64_t state_ = 0;
  bool have_cached_ = false;
  double cached_ = 0.0;
};

}  // namespace mig
