#pragma once

#include <cstdint>
#include <random>

namespace lrmf {

/// Deterministic random source. All draws go through explicit conversions of
/// mt19937_64 output words, so a given seed produces the same stream on every
/// build (std::*_distribution would not guarantee that).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  std::uint64_t raw() { return gen_(); }

  /// Uniform on [0, 1) with 53 random bits.
  double uniform01() {
    return static_cast<double>(raw() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  /// Uniform on [-s, s].
  double symmetric(double s) { return s * (2.0 * uniform01() - 1.0); }

  /// Uniform integer in [0, bound). Rejection sampling, unbiased.
  std::uint64_t integer(std::uint64_t bound) {
    const std::uint64_t threshold = (~bound + 1) % bound;  // 2^64 mod bound
    for (;;) {
      const std::uint64_t r = raw();
      if (r >= threshold) return r % bound;
    }
  }

  /// +1 or -1 with equal probability.
  int rademacher() { return (raw() & 1u) ? 1 : -1; }

 private:
  std::mt19937_64 gen_;
};

}  // namespace lrmf
