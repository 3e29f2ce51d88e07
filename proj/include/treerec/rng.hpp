#pragma once
// Deterministic, splittable PRNG used by every randomized component.
//
// Engine: SplitMix64 (Steele/Lea/Flood mixing constants). Chosen over the
// <random> engines+distributions because distribution output is
// implementation-defined; everything here is pinned so a rerun with the same
// seed reproduces byte-identical results on any conforming compiler.
//
// Stream derivation contract: the stream for trace t under master seed s is
// Rng::stream(s, t), which seeds the engine with mix(s ^ t). Distinct
// indices give distinct streams (mix is a bijection on uint64).

#include <cstdint>

namespace treerec {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(mix(seed)) {}

  static Rng stream(std::uint64_t master_seed, std::uint64_t index) {
    return Rng(master_seed ^ index);
  }

  // The engine's finalizer as a standalone hash, for deriving well-separated
  // seeds from structured ids (e.g. (grid position, trial) pairs).
  static std::uint64_t hash(std::uint64_t z) { return mix(z); }

  std::uint64_t next_u64() {
    state_ += 0x9E3779B97F4A7C15ull;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

  // Uniform in [0, 1) with 53 random bits.
  double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  bool bernoulli(double p) { return next_double() < p; }

  // Uniform in [0, n). Rejection sampling; exact for any n >= 1.
  std::uint64_t uniform_below(std::uint64_t n) {
    if (n == 0) return 0;
    const std::uint64_t threshold = (0 - n) % n;  // 2^64 mod n
    for (;;) {
      std::uint64_t r = next_u64();
      if (r >= threshold) return r % n;
    }
  }

 private:
  static std::uint64_t mix(std::uint64_t z) {
    z += 0x9E3779B97F4A7C15ull;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

  std::uint64_t state_;
};

}  // namespace treerec
