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

#ifndef DPCOUNT_BOUNDS_HPP_
#define DPCOUNT_BOUNDS_HPP_

#include <algorithm>
#include <cmath>
#include <cstdint>

#include "dpcount/config.hpp"
#include "dpcount/errors.hpp"
#include "dpcount/unknown_k_all.hpp"

namespace dpcount {

enum class BoundBranch { kDimension, kFlippancy, kSparseVector, kOutputPerturbation };

inline const char* bound_branch_name(BoundBranch b) {
  switch (b) {
    case BoundBranch::kDimension: return "d";
    case BoundBranch::kFlippancy: return "K";
    case BoundBranch::kSparseVector: return "sparse_vector";
    case BoundBranch::kOutputPerturbation: return "output_perturbation";
  }
  return "?";
}

// Error-bound branches, constants dropped.
//
// Known K, delta = 0:  min(d, K, sqrt(K ln(2T/beta) / eps), T ln(2T/beta) / eps)
// Known K, delta > 0:  min(d, K, (K ln(1/delta) ln^2(2T/beta) / eps^2)^(1/3),
//                          sqrt(T ln(1/delta) ln(2T/beta)) / eps)
// Unknown K replaces the sparse-vector branch by
//   ln K * sqrt(K ln(T/beta) / eps)                       (delta = 0)
//   (K ln^2 K ln(1/delta) ln^2(T/beta) / eps^2)^(1/3)     (delta > 0)
// and adds ln^2 K ln(ln K / beta) / eps, with ln K clamped below at 1.
struct BoundSpec {
  double dimension = 0.0;
  double flippancy = 0.0;
  double sparse_vector = 0.0;
  double output_perturbation = 0.0;
  double minimum = 0.0;
  BoundBranch argmin = BoundBranch::kFlippancy;

  double unknown_sparse_vector = 0.0;
  double unknown_output_perturbation = 0.0;
  double unknown_additive = 0.0;
  double unknown_minimum = 0.0;
};

inline BoundSpec theoretical_bound(const PrivacyParams& pp, double beta, std::int64_t horizon,
                                   std::int64_t flippancy, std::size_t d) {
  check_privacy_params(pp);
  internal::require_parameter(beta > 0.0 && beta < 1.0, "beta must lie in (0, 1)");
  internal::require_parameter(horizon >= 1, "T must be >= 1");
  internal::require_parameter(flippancy >= 0, "K must be >= 0");
  internal::require_parameter(d >= 1, "d must be >= 1");

  const double eps = pp.epsilon;
  const double t = static_cast<double>(horizon);
  const double k = static_cast<double>(flippancy);
  const double log2t = std::log(2.0 * t / beta);
  const double log1t = std::log(t / beta);

  BoundSpec b;
  b.dimension = static_cast<double>(d);
  b.flippancy = k;
  if (pp.pure()) {
    b.sparse_vector = std::sqrt(k * log2t / eps);
    b.output_perturbation = t * log2t / eps;
  } else {
    const double log_d = std::log(1.0 / pp.delta);
    b.sparse_vector = std::cbrt(k * log_d * log2t * log2t / (eps * eps));
    b.output_perturbation = std::sqrt(t * log_d * log2t) / eps;
  }
  const double branches[] = {b.dimension, b.flippancy, b.sparse_vector, b.output_perturbation};
  const auto* it = std::min_element(std::begin(branches), std::end(branches));
  b.minimum = *it;
  b.argmin = static_cast<BoundBranch>(it - std::begin(branches));

  const double lk = std::max(1.0, std::log(std::max(k, 1.0)));
  if (pp.pure()) {
    b.unknown_sparse_vector = lk * std::sqrt(k * log1t / eps);
  } else {
    const double log_d = std::log(1.0 / pp.delta);
    b.unknown_sparse_vector = std::cbrt(k * lk * lk * log_d * log1t * log1t / (eps * eps));
  }
  b.unknown_output_perturbation = baseline_error_scale(pp, beta, horizon);
  b.unknown_additive = lk * lk * std::log(lk / beta) / eps;
  b.unknown_minimum = std::min({b.dimension, b.flippancy, b.unknown_sparse_vector,
                                b.unknown_output_perturbation}) +
                      b.unknown_additive;
  return b;
}

}  // namespace dpcount

#endif  // DPCOUNT_BOUNDS_HPP_
