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

// Privacy parameters and the derived configuration of the sparse-vector
// distinct-count monitor, plus the per-instance budget schedules used when
// the total flippancy is not known in advance.

#ifndef DPCOUNT_CONFIG_HPP_
#define DPCOUNT_CONFIG_HPP_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>

#include "dpcount/errors.hpp"

namespace dpcount {

struct PrivacyParams {
  double epsilon = 1.0;
  double delta = 0.0;  // 0 selects the pure-DP path

  bool pure() const { return delta == 0.0; }
};

inline void check_privacy_params(const PrivacyParams& pp) {
  internal::require_parameter(pp.epsilon > 0.0 && std::isfinite(pp.epsilon), "epsilon must be > 0");
  internal::require_parameter(pp.delta >= 0.0 && pp.delta < 1.0, "delta must be in [0, 1)");
}

struct KnownKConfig {
  PrivacyParams privacy;
  std::int64_t flippancy_bound = 0;  // K
  std::int64_t horizon = 1;          // T
  double beta = 0.05;
  std::int64_t max_rounds = 1;       // S_K
  double round_epsilon = 0.0;        // eps_1
  double threshold = 0.0;            // Thresh

  // ln(2T/beta)
  double log_term() const {
    return std::log(2.0 * static_cast<double>(horizon) / beta);
  }
  // alpha = Thresh / 2
  double alpha() const { return threshold / 2.0; }
};

// Fills eps_1 and Thresh for an explicitly chosen S_K:
//   eps_1 = eps / (2 S_K)                         (delta = 0)
//   eps_1 = eps / (4 sqrt(2 S_K ln(1/delta)))     (delta > 0)
//   Thresh = 16 ln(2T/beta) / eps_1
inline KnownKConfig make_known_k_config(const PrivacyParams& pp, std::int64_t max_rounds,
                                        std::int64_t horizon, double beta) {
  check_privacy_params(pp);
  internal::require_parameter(max_rounds >= 1, "S_K must be >= 1");
  internal::require_parameter(horizon >= 1, "T must be >= 1");
  internal::require_parameter(beta > 0.0 && beta < 1.0, "beta must be in (0, 1)");
  KnownKConfig cfg;
  cfg.privacy = pp;
  cfg.horizon = horizon;
  cfg.beta = beta;
  cfg.max_rounds = max_rounds;
  const double s = static_cast<double>(max_rounds);
  if (pp.pure()) {
    cfg.round_epsilon = pp.epsilon / (2.0 * s);
  } else {
    cfg.round_epsilon = pp.epsilon / (4.0 * std::sqrt(2.0 * s * std::log(1.0 / pp.delta)));
  }
  cfg.threshold = 16.0 / cfg.round_epsilon * cfg.log_term();
  return cfg;
}

namespace internal {

// floor() that does not lose an exact integer to rounding noise in x.
inline double stable_floor(double x) { return std::floor(x * (1.0 + 1e-12)); }
inline double stable_ceil(double x) { return std::ceil(x * (1.0 - 1e-12)); }

}  // namespace internal

// Chooses S_K so the monitor does not run out of rounds on a stream of total
// flippancy at most K:
//   delta = 0:  S_K = floor(sqrt(K eps / (18 ln(2T/beta)))) + 1
//   delta > 0:  S_K = ceil((K eps / (36 sqrt(ln(1/delta)) ln(2T/beta)))^(2/3)) + 1
// The delta > 0 path requires eps < 1.
inline KnownKConfig derive_known_k_config(const PrivacyParams& pp, std::int64_t flippancy_bound,
                                          std::int64_t horizon, double beta) {
  check_privacy_params(pp);
  internal::require_parameter(flippancy_bound >= 1, "K must be >= 1");
  internal::require_parameter(horizon >= 1, "T must be >= 1");
  internal::require_parameter(beta > 0.0 && beta < 1.0, "beta must be in (0, 1)");
  internal::require_parameter(pp.pure() || pp.epsilon < 1.0,
                              "approximate DP path requires epsilon < 1");
  const double k = static_cast<double>(flippancy_bound);
  const double log_term = std::log(2.0 * static_cast<double>(horizon) / beta);
  double rounds;
  if (pp.pure()) {
    rounds = internal::stable_floor(std::sqrt(k * pp.epsilon / (18.0 * log_term))) + 1.0;
  } else {
    const double base = k * pp.epsilon / (36.0 * std::sqrt(std::log(1.0 / pp.delta)) * log_term);
    rounds = internal::stable_ceil(std::pow(base, 2.0 / 3.0)) + 1.0;
  }
  KnownKConfig cfg = make_known_k_config(pp, static_cast<std::int64_t>(rounds), horizon, beta);
  cfg.flippancy_bound = flippancy_bound;
  return cfg;
}

// Parameters of the j-th guess (j >= 1) when K is unknown: K_j = 2^j and
// eps, delta, beta each scaled by weight / (pi^2 j^2).
struct InstanceSchedule {
  std::int64_t index = 1;
  std::int64_t flippancy_guess = 2;
  PrivacyParams privacy;
  double beta = 0.0;
};

inline InstanceSchedule instance_schedule(const PrivacyParams& pp, double beta, std::int64_t j,
                                          double eps_weight, double delta_weight,
                                          double beta_weight) {
  internal::require_parameter(j >= 1 && j < 62, "instance index out of range");
  const double denom = std::numbers::pi * std::numbers::pi * static_cast<double>(j * j);
  InstanceSchedule s;
  s.index = j;
  s.flippancy_guess = std::int64_t{1} << j;
  s.privacy.epsilon = eps_weight * pp.epsilon / denom;
  s.privacy.delta = delta_weight * pp.delta / denom;
  s.beta = beta_weight * beta / denom;
  return s;
}

}  // namespace dpcount

#endif  // DPCOUNT_CONFIG_HPP_
