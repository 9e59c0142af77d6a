// Copyright 2026 The cellsleep Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <span>
#include <vector>

namespace cellsleep {

constexpr std::uint64_t mix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Derives an independent stream seed from a parent seed and a list of
/// stream indices. Pure, so any component can recompute another's stream.
constexpr std::uint64_t derive_seed(std::uint64_t seed) noexcept { return seed; }

template <typename... Rest>
constexpr std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream,
                                    Rest... rest) noexcept {
  return derive_seed(mix64(seed ^ mix64(stream + 0x632be59bd9b4e019ULL)),
                     static_cast<std::uint64_t>(rest)...);
}

/// Random source with platform-independent output. Only the engine comes from
/// the standard library (its sequence is fixed by the standard); every
/// distribution is computed here, since std:: distributions are
/// implementation-defined.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  /// Uniform in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Uniform integer in [0, n), unbiased.
  std::uint64_t below(std::uint64_t n) {
    const std::uint64_t limit = -n % n;  // 2^64 mod n
    for (;;) {
      const std::uint64_t x = engine_();
      if (x >= limit) return x % n;
    }
  }

  /// Standard normal (Box-Muller, one draw per call).
  double normal() {
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) *
           std::cos(2.0 * std::numbers::pi * u2);
  }

  /// Index drawn from normalized probabilities. Zero-probability entries are
  /// never returned.
  std::size_t categorical(std::span<const double> probs) {
    const double u = uniform();
    double acc = 0.0;
    std::size_t last = probs.size();
    for (std::size_t i = 0; i < probs.size(); ++i) {
      if (probs[i] <= 0.0) continue;
      acc += probs[i];
      last = i;
      if (u < acc) return i;
    }
    return last;  // rounding left u >= acc
  }

  /// Counts of n independent categorical draws.
  std::vector<int> multinomial(int n, std::span<const double> probs) {
    std::vector<int> counts(probs.size(), 0);
    for (int i = 0; i < n; ++i) ++counts[categorical(probs)];
    return counts;
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace cellsleep
