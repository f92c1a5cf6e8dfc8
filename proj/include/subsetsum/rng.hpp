#pragma once

#include <cstdint>

namespace subsetsum {

// SplitMix64 finalizer. Bijective on 64-bit words.
inline std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

// Counter-style generator built on SplitMix64. A stream is a pure function of
// its 64-bit key, so independent streams can be derived per (grid point,
// trial) and consumed on any thread in any order with identical results.
class Rng {
 public:
  explicit Rng(std::uint64_t key) : state_(key) {}

  std::uint64_t next_u64() {
    state_ += 0x9E3779B97F4A7C15ull;
    return mix64(state_);
  }

  // Unbiased draw from {0, ..., bound-1}; multiply-shift with rejection.
  std::uint64_t next_below(std::uint64_t bound) {
    unsigned __int128 m = static_cast<unsigned __int128>(next_u64()) * bound;
    auto lo = static_cast<std::uint64_t>(m);
    if (lo < bound) {
      const std::uint64_t cutoff = (0 - bound) % bound;
      while (lo < cutoff) {
        m = static_cast<unsigned __int128>(next_u64()) * bound;
        lo = static_cast<std::uint64_t>(m);
      }
    }
    return static_cast<std::uint64_t>(m >> 64);
  }

  // Uniform double in [0, 1) with 53 random bits.
  double next_unit() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  bool next_bernoulli(double p) { return next_unit() < p; }

 private:
  std::uint64_t state_;
};

// Derives an independent stream keyed by (master, a, b).
inline Rng derive_stream(std::uint64_t master, std::uint64_t a = 0,
                         std::uint64_t b = 0) {
  std::uint64_t h = mix64(master ^ 0xA0761D6478BD642Full);
  h = mix64(h ^ (a + 0xE7037ED1A0B428DBull));
  h = mix64(h ^ (b + 0x8EBC6AF09C88C6E3ull));
  return Rng(h);
}

}  // namespace subsetsum
