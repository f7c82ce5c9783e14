#pragma once

#include <cstdint>

namespace linfeas {

/// Counter-based 64-bit generator (splitmix64). The state is a plain
/// counter advanced by the golden-ratio increment and the output is a
/// bijective mix of it, so streams are reproducible from the seed alone
/// and independent streams can be forked by seed arithmetic.
class CounterRng {
 public:
  explicit CounterRng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  /// Uniform double in [0, 1) with 53 random bits.
  double next_double() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  /// Uniform integer in [0, bound). Masked rejection, no modulo bias.
  std::uint64_t uniform_int(std::uint64_t bound);

  double uniform(double lo, double hi) {
    return lo + (hi - lo) * next_double();
  }

  /// Standard normal via the Marsaglia polar method.
  double normal();

 private:
  std::uint64_t state_;
};

}  // namespace linfeas
