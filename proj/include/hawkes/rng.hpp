#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace hawkes {

/// Mixes a 64-bit value into a well-spread stream seed (splitmix64 finalizer).
inline std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Deterministic per-stream seed derived from a master seed and a stream
/// index. Monte Carlo drivers use this to give every path its own stream
/// regardless of scheduling order.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
  return mix64(master ^ mix64(index + 1));
}

/// Seeded random source. Draws go through explicit inverse-CDF transforms of
/// raw mt19937_64 output so a given seed produces the same stream on every
/// platform (std::*_distribution makes no such guarantee).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t raw() { return engine_(); }

  /// Uniform on [0, 1) with 53 random bits.
  double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  /// Exponential with the given rate (rate > 0).
  double exponential(double rate) { return -std::log1p(-uniform01()) / rate; }

  /// Index i drawn with probability weights[i] / sum(weights). The weights
  /// must be non-negative with a positive sum.
  template <typename Vec>
  int categorical(const Vec& weights) {
    double total = 0.0;
    for (int i = 0; i < static_cast<int>(weights.size()); ++i) total += weights[i];
    double u = uniform01() * total;
    double acc = 0.0;
    const int n = static_cast<int>(weights.size());
    for (int i = 0; i < n; ++i) {
      acc += weights[i];
      if (u < acc) return i;
    }
    return n - 1;
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace hawkes
