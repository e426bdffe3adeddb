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

// Mechanisms that ignore flippancy: the constant-zero release and per-step
// output perturbation calibrated to a whole-stream sensitivity of T (L1) or
// sqrt(T) (L2).

#ifndef DPCOUNT_BASELINES_HPP_
#define DPCOUNT_BASELINES_HPP_

#include <cmath>
#include <cstdint>
#include <memory>
#include <string>
#include <utility>

#include "dpcount/config.hpp"
#include "dpcount/errors.hpp"
#include "dpcount/mechanism.hpp"
#include "dpcount/noise.hpp"
#include "dpcount/query.hpp"

namespace dpcount {

// Outputs 0 at every step. Error is at most min(d, K).
class ZeroMechanism final : public Mechanism {
 public:
  explicit ZeroMechanism(RandomSource src = RandomSource()) : src_(std::move(src)) {}

  StepOutput step(UpdateBatch) override { return {0.0, StepStatus::kOk, 1}; }
  const RandomSource& noise() const override { return src_; }
  std::size_t state_words() const override { return (sizeof(*this) + 7) / 8; }
  std::string name() const override { return "zero"; }

 private:
  RandomSource src_;
};

inline double laplace_baseline_scale(const PrivacyParams& pp, std::int64_t horizon) {
  return static_cast<double>(horizon) / pp.epsilon;
}

// sigma = sqrt(2 ln(2/delta)) * sqrt(T) / eps
inline double gaussian_baseline_sigma(const PrivacyParams& pp, std::int64_t horizon) {
  return std::sqrt(2.0 * std::log(2.0 / pp.delta)) * std::sqrt(static_cast<double>(horizon)) /
         pp.epsilon;
}

// out^t = Q^t + Lap(T/eps).
template <StreamQuery Query = DistinctCountQuery>
class LaplaceBaseline final : public Mechanism {
 public:
  LaplaceBaseline(const PrivacyParams& pp, std::int64_t horizon, Query query, RandomSource src)
      : query_(std::move(query)), src_(std::move(src)), horizon_(horizon) {
    check_privacy_params(pp);
    internal::require_parameter(horizon >= 1, "T must be >= 1");
    scale_ = laplace_baseline_scale(pp, horizon);
  }

  StepOutput step(UpdateBatch batch) override {
    internal::require_parameter(steps_ < horizon_, "stream longer than the configured horizon T");
    ++steps_;
    query_.apply(batch);
    return {query_.value() + src_.laplace(scale_), StepStatus::kOk, 1};
  }

  const RandomSource& noise() const override { return src_; }
  std::size_t state_words() const override {
    return query_.words() + (sizeof(*this) - sizeof(Query) + 7) / 8;
  }
  std::string name() const override { return "laplace-T"; }
  double scale() const { return scale_; }

 private:
  Query query_;
  RandomSource src_;
  std::int64_t horizon_;
  std::int64_t steps_ = 0;
  double scale_ = 0.0;
};

// out^t = Q^t + N(0, sigma^2); requires delta > 0.
template <StreamQuery Query = DistinctCountQuery>
class GaussianBaseline final : public Mechanism {
 public:
  GaussianBaseline(const PrivacyParams& pp, std::int64_t horizon, Query query, RandomSource src)
      : query_(std::move(query)), src_(std::move(src)), horizon_(horizon) {
    check_privacy_params(pp);
    internal::require_parameter(pp.delta > 0.0, "Gaussian baseline requires delta > 0");
    internal::require_parameter(horizon >= 1, "T must be >= 1");
    sigma_ = gaussian_baseline_sigma(pp, horizon);
  }

  StepOutput step(UpdateBatch batch) override {
    internal::require_parameter(steps_ < horizon_, "stream longer than the configured horizon T");
    ++steps_;
    query_.apply(batch);
    return {query_.value() + src_.gaussian(sigma_), StepStatus::kOk, 1};
  }

  const RandomSource& noise() const override { return src_; }
  std::size_t state_words() const override {
    return query_.words() + (sizeof(*this) - sizeof(Query) + 7) / 8;
  }
  std::string name() const override { return "gaussian-T"; }
  double sigma() const { return sigma_; }

 private:
  Query query_;
  RandomSource src_;
  std::int64_t horizon_;
  std::int64_t steps_ = 0;
  double sigma_ = 0.0;
};

}  // namespace dpcount

#endif  // DPCOUNT_BASELINES_HPP_
