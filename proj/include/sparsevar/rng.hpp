#pragma once

#include <cmath>
#include <cstdint>

namespace sparsevar {

// Counter-based generator: draw i of a stream is a pure function of
// (seed, i), so concurrent consumers never share state and any draw can be
// recomputed in isolation.
class CounterRng {
 public:
  explicit CounterRng(std::uint64_t seed) : key_(seed) {}

  // SplitMix64 finalizer.
  static std::uint64_t mix(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
  }

  std::uint64_t bits(std::uint64_t i) const {
    return mix(key_ + i * 0x9E3779B97F4A7C15ULL);
  }

  // Uniform in (0, 1].
  double uniform_open(std::uint64_t i) const {
    return (static_cast<double>(bits(i) >> 11) + 1.0) * 0x1.0p-53;
  }

  // Uniform in [0, 1).
  double uniform(std::uint64_t i) const {
    return static_cast<double>(bits(i) >> 11) * 0x1.0p-53;
  }

  // Standard normal draw i via Box-Muller on uniforms (2i, 2i+1).
  double normal(std::uint64_t i) const {
    const double u1 = uniform_open(2 * i);
    const double u2 = uniform(2 * i + 1);
    return std::sqrt(-2.0 * std::log(u1)) *
           std::cos(2.0 * 3.14159265358979323846 * u2);
  }

  // Uniform integer in [0, n).
  std::uint64_t below(std::uint64_t i, std::uint64_t n) const {
    return bits(i) % n;
  }

  // Derives the seed of an independent substream.
  static std::uint64_t substream(std::uint64_t seed, std::uint64_t tag) {
    return mix(mix(seed) ^ tag);
  }

 private:
  std::uint64_t key_;
};

}  // namespace sparsevar
