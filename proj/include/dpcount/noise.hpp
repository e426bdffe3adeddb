// Copyright 2026 The dpcount Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef DPCOUNT_NOISE_HPP_
#define DPCOUNT_NOISE_HPP_

#include <cmath>
#include <cstdint>
#include <random>

#include "dpcount/errors.hpp"

namespace dpcount {

enum class NoiseMode { kLive, kZero };

// SplitMix64 finalizer; used to derive independent child seeds.
inline std::uint64_t mix_seed(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index) {
  return mix_seed(mix_seed(base) ^ (index * 0xd1342543de82ef95ULL + 1));
}

// Seeded noise source. Not thread-safe; each mechanism owns one.
//
// In zero mode every sample is exactly 0 but draws are still requested and
// counted, so callers run the same control flow as in live mode.
//
// Not cryptographically secure, and floating-point Laplace sampling is known
// to leak through the low-order bits of its output.
class RandomSource {
 public:
  explicit RandomSource(std::uint64_t seed = 0, NoiseMode mode = NoiseMode::kLive)
      : seed_(seed), mode_(mode), engine_(seed) {}

  std::uint64_t seed() const { return seed_; }
  NoiseMode mode() const { return mode_; }
  bool live() const { return mode_ == NoiseMode::kLive; }

  // Independent source for the index-th child (trial, sample, ...).
  RandomSource child(std::uint64_t index) const {
    return RandomSource(derive_seed(seed_, index), mode_);
  }

  // Uniform in the open interval (0, 1).
  double uniform_open() {
    return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
  }

  // Lap(b) by inverse CDF from a single uniform.
  double laplace(double scale) {
    ++laplace_draws_;
    if (!live()) return 0.0;
    internal::require_parameter(scale > 0.0 && std::isfinite(scale),
                                "Laplace scale must be positive");
    const double u = uniform_open() - 0.5;
    const double magnitude = -scale * std::log1p(-2.0 * std::fabs(u));
    return std::copysign(magnitude, u);
  }

  // N(0, sigma^2).
  double gaussian(double sigma) {
    ++gaussian_draws_;
    if (!live()) return 0.0;
    internal::require_parameter(sigma > 0.0 && std::isfinite(sigma),
                                "Gaussian sigma must be positive");
    return sigma * normal_(engine_);
  }

  std::uint64_t laplace_draws() const { return laplace_draws_; }
  std::uint64_t gaussian_draws() const { return gaussian_draws_; }
  std::uint64_t draws() const { return laplace_draws_ + gaussian_draws_; }
  // Draws that actually consumed randomness.
  std::uint64_t effective_draws() const { return live() ? draws() : 0; }

 private:
  std::uint64_t seed_;
  NoiseMode mode_;
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_;
  std::uint64_t laplace_draws_ = 0;
  std::uint64_t gaussian_draws_ = 0;
};

inline double sample_laplace(RandomSource& src, double scale) { return src.laplace(scale); }
inline double sample_gaussian(RandomSource& src, double sigma) { return src.gaussian(sigma); }

}  // namespace dpcount

#endif  // DPCOUNT_NOISE_HPP_
