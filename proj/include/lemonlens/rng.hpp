#pragma once

#include <cstdint>

namespace lemonlens {

// Small deterministic PRNG (splitmix64). Used instead of <random> engines +
// distributions so that seeded outputs are identical across standard library
// implementations, which the CLI's byte-identical-output guarantee needs.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // Uniform in [0, n). n must be >= 1. Modulo bias is irrelevant here
  // (n is tiny against 2^64) and keeps the generator portable.
  std::uint64_t next_below(std::uint64_t n) { return next_u64() % n; }

  // Uniform double in [0, 1).
  double next_double() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  // Uniform double in [lo, hi).
  double next_in(double lo, double hi) {
    return lo + (hi - lo) * next_double();
  }

 private:
  std::uint64_t state_;
};

}  // namespace lemonlens
