#pragma once

#include <cstdint>

namespace pcons {

// SplitMix64 finalizer. Full-period mixing of a 64-bit word.
inline uint64_t mix64(uint64_t z) {
  z ^= z >> 30;
  z *= 0xBF58476D1CE4E5B9ULL;
  z ^= z >> 27;
  z *= 0x94D049BB133111EBULL;
  z ^= z >> 31;
  return z;
}

// SplitMix64 generator. Small state, deterministic across platforms, good
// enough statistically for sampling experiments. Not for cryptography.
class SplitMix64 {
 public:
  explicit SplitMix64(uint64_t seed) : state_(seed) {}

  uint64_t next() {
    state_ += 0x9E3779B97F4A7C15ULL;
    return mix64(state_);
  }

  // Uniform draw in [0, bound) via 128-bit multiply-shift. bound > 0.
  // Debiased by rejection on the low product half.
  uint64_t below(uint64_t bound) {
    uint64_t x = next();
    unsigned __int128 m = static_cast<unsigned __int128>(x) * bound;
    uint64_t lo = static_cast<uint64_t>(m);
    if (lo < bound) {
      uint64_t threshold = -bound % bound;
      while (lo < threshold) {
        x = next();
        m = static_cast<unsigned __int128>(x) * bound;
        lo = static_cast<uint64_t>(m);
      }
    }
    return static_cast<uint64_t>(m >> 64);
  }

  // Uniform in [0, 1), 53 bits of entropy.
  double next_double() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

 private:
  uint64_t state_;
};

// Decorrelated per-stream seed: stream index i of a base seed. Used to give
// every trial of an experiment its own generator so trials can run in any
// order (or in parallel) and still reproduce bit-for-bit.
inline uint64_t stream_seed(uint64_t base_seed, uint64_t stream_index) {
  return mix64(base_seed + 0x9E3779B97F4A7C15ULL * (stream_index + 1));
}

}  // namespace pcons
