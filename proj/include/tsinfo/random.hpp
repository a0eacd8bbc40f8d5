// Copyright 2026 The tsinfo Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef TSINFO_RANDOM_HPP
#define TSINFO_RANDOM_HPP

#include <cmath>
#include <cstdint>
#include <random>
#include <span>

namespace tsinfo {

/// SplitMix64 finalizer; a bijection on 64-bit words.
inline std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Seed for replication `k` of an experiment run under `master_seed`.
/// Injective in k for fixed master_seed: mix64 is a bijection and the inputs
/// master_seed + (k+1)*GOLDEN are pairwise distinct below 2^64 replications.
inline std::uint64_t derive_seed(std::uint64_t master_seed, std::uint64_t k) {
  return mix64(master_seed + (k + 1) * 0x9e3779b97f4a7c15ULL);
}

/// Seeded random stream. Sampling routines are written out explicitly so that
/// output depends only on the mt19937_64 bit stream, not on the standard
/// library's distribution implementations.
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_bits() { return engine_(); }

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  /// Uniform double in [lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Uniform integer in [0, n).
  int uniform_int(int n) {
    const int k = static_cast<int>(uniform() * n);
    return k < n ? k : n - 1;
  }

  /// Standard normal via Marsaglia's polar method (second deviate cached).
  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u, v, s;
    do {
      u = 2.0 * uniform() - 1.0;
      v = 2.0 * uniform() - 1.0;
      s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    const double scale = std::sqrt(-2.0 * std::log(s) / s);
    spare_ = v * scale;
    has_spare_ = true;
    return u * scale;
  }

  /// Index sampled from nonnegative weights summing to ~1 (inverse CDF walk).
  /// Falls back to the last positive-weight index on accumulated rounding.
  int discrete(std::span<const double> weights) {
    const double u = uniform();
    double cum = 0.0;
    int last_positive = 0;
    for (int i = 0; i < static_cast<int>(weights.size()); ++i) {
      if (weights[i] > 0.0) last_positive = i;
      cum += weights[i];
      if (u < cum && weights[i] > 0.0) return i;
    }
    return last_positive;
  }

  /// Bernoulli draw with success probability p.
  bool bernoulli(double p) { return uniform() < p; }

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace tsinfo

#endif  // TSINFO_RANDOM_HPP
