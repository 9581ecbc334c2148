#pragma once

// Portable random streams. Traffic must be reproducible bit-for-bit on any
// platform, so nothing here touches <random>'s implementation-defined
// distributions.
//
//   splitmix64(x):  x += 0x9E3779B97F4A7C15;
//                   z = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9;
//                   z = (z ^ (z >> 27)) * 0x94D049BB133111EB;
//                   return z ^ (z >> 31)
//
//   Pcg32 is PCG-XSH-RR with 64-bit state, multiplier 6364136223846793005,
//   seeded the reference way (state=0, inc=(seq<<1)|1, step, state+=seed, step).

#include <cstdint>

namespace rfidnet {

constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9E3779B97F4A7C15ULL;
  std::uint64_t z = x;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

class Pcg32 {
 public:
  Pcg32(std::uint64_t seed, std::uint64_t sequence) noexcept : inc_((sequence << 1U) | 1U) {
    next_u32();
    state_ += seed;
    next_u32();
  }

  std::uint32_t next_u32() noexcept {
    const std::uint64_t old = state_;
    state_ = old * 6364136223846793005ULL + inc_;
    const auto xorshifted = static_cast<std::uint32_t>(((old >> 18U) ^ old) >> 27U);
    const auto rot = static_cast<std::uint32_t>(old >> 59U);
    return (xorshifted >> rot) | (xorshifted << ((32U - rot) & 31U));
  }

  /// Uniform in [0, 1) with 53 random bits.
  double next_double() noexcept {
    const std::uint64_t hi = next_u32();
    const std::uint64_t lo = next_u32();
    return static_cast<double>(((hi << 32U) | lo) >> 11U) * 0x1.0p-53;
  }

  /// Uniform integer in [0, bound) by rejection; bound > 0.
  std::uint32_t next_below(std::uint32_t bound) noexcept {
    const std::uint32_t threshold = (0U - bound) % bound;
    for (;;) {
      const std::uint32_t r = next_u32();
      if (r >= threshold) return r % bound;
    }
  }

  /// Poisson(mean) by Knuth's product method, split into chunks of mean <= 10
  /// so exp(-chunk) never underflows.
  std::uint64_t poisson(double mean) noexcept;

 private:
  std::uint64_t state_ = 0;
  std::uint64_t inc_;
};

/// Independent stream for (seed, node, tick): traffic on one node at one tick
/// never depends on how many draws other nodes or earlier ticks made.
inline Pcg32 traffic_stream(std::uint64_t seed, std::uint64_t node, std::uint64_t tick) noexcept {
  const std::uint64_t a = splitmix64(seed);
  const std::uint64_t b = splitmix64(a ^ splitmix64(tick));
  return Pcg32(b, node);
}

}  // namespace rfidnet
