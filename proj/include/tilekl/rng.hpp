#pragma once

#include <cstdint>
#include <random>

namespace tilekl {

// std::mt19937_64 with bounded-integer and unit-interval sampling done here
// rather than through <random> distributions, whose output differs between
// standard libraries. Same seed, same stream on every platform.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  // Uniform in [0, bound). bound must be non-zero.
  std::uint64_t below(std::uint64_t bound) {
    // Rejection sampling on the top of the range keeps the result unbiased.
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
    std::uint64_t r;
    do {
      r = engine_();
    } while (r >= limit);
    return r % bound;
  }

  // Uniform in [0, 1) with 53 random bits.
  double unit() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

 private:
  std::mt19937_64 engine_;
};

// A seed from std::random_device, for runs without an explicit seed.
std::uint64_t entropy_seed();

}  // namespace tilekl
