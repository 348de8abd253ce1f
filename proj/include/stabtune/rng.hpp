#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <vector>

#include "stabtune/error.hpp"

namespace stabtune {

// Deterministic random stream with keyed substream derivation.
//
// All draws go through explicitly coded transforms rather than the
// std:: distribution templates, whose output is implementation-defined;
// a given seed therefore produces the same stream under every compiler.
// Substreams are derived from the parent's seed and a key without
// consuming generator state, so work parcelled out by index produces the
// same results regardless of execution order.
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed)
      : seed_(seed), engine_(mix(seed, 0x243f6a8885a308d3ull)) {}

  // SplitMix64 finalizer over a seed/key pair; the basis for all stream
  // derivation in the library.
  static std::uint64_t mix(std::uint64_t a, std::uint64_t b) {
    std::uint64_t z = a + 0x9e3779b97f4a7c15ull * (b + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  std::uint64_t seed() const { return seed_; }

  // Independent stream derived from this stream's seed and a key.
  RngStream substream(std::uint64_t key) const {
    return RngStream(mix(seed_, key));
  }

  std::uint64_t next_u64() { return engine_(); }

  // Uniform on [0, 1) with 53-bit resolution.
  double uniform() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  // Unbiased integer in [0, bound) by rejection sampling.
  std::uint64_t uniform_int(std::uint64_t bound) {
    if (bound == 0) throw ArgumentError("uniform_int: bound must be positive");
    const std::uint64_t threshold = (0 - bound) % bound;  // 2^64 mod bound
    for (;;) {
      const std::uint64_t x = engine_();
      if (x >= threshold) return x % bound;
    }
  }

  // Standard normal via Box-Muller; consumes exactly two uniforms per call.
  double normal() {
    const double u1 = 1.0 - uniform();  // (0, 1], keeps the log finite
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) *
           std::cos(2.0 * std::numbers::pi * u2);
  }

  // In-place Fisher-Yates shuffle.
  template <typename T>
  void shuffle(std::vector<T>& values) {
    for (std::size_t i = values.size(); i > 1; --i) {
      const std::size_t j = static_cast<std::size_t>(uniform_int(i));
      std::swap(values[i - 1], values[j]);
    }
  }

 private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
};

}  // namespace stabtune
