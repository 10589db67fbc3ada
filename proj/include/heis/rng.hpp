#pragma once

#include <cstdint>
#include <random>

// Seeded generator with a platform-independent uniform mapping.
// std::uniform_real_distribution is implementation defined, so doubles are
// derived directly from the mt19937_64 stream; outputs are bit-identical
// across compilers for a fixed seed.

namespace heis {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  std::uint64_t bits() { return eng_(); }

  // Uniform in [0, 1) with 53-bit resolution.
  double unit() { return double(eng_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * unit(); }

  // Uniform integer in [0, n).
  std::uint64_t index(std::uint64_t n) { return eng_() % n; }

  std::int64_t integer(std::int64_t lo, std::int64_t hi) {
    return lo + std::int64_t(index(std::uint64_t(hi - lo + 1)));
  }

 private:
  std::mt19937_64 eng_;
};

}  // namespace heis
