#include "linfeas/rng.hpp"

#include <cmath>
#include <stdexcept>

namespace linfeas {

std::uint64_t CounterRng::uniform_int(std::uint64_t bound) {
  if (bound == 0) throw std::invalid_argument("uniform_int: bound must be positive");
  if (bound == 1) return 0;
  // Smallest all-ones mask covering bound-1.
  std::uint64_t mask = bound - 1;
  mask |= mask >> 1;
  mask |= mask >> 2;
  mask |= mask >> 4;
  mask |= mask >> 8;
  mask |= mask >> 16;
  mask |= mask >> 32;
  for (;;) {
    std::uint64_t v = next_u64() & mask;
    if (v < bound) return v;
  }
}

double CounterRng::normal() {
  for (;;) {
    double u = 2.0 * next_double() - 1.0;
    double v = 2.0 * next_double() - 1.0;
    double s = u * u + v * v;
    if (s > 0.0 && s < 1.0) {
      return u * std::sqrt(-2.0 * std::log(s) / s);
    }
  }
}

}  // namespace linfeas
