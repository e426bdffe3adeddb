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

// Distinct counting when K is unknown: guess K_j = 2^j, run the known-K
// monitor with budget eps_j = 6 eps / (pi^2 j^2) (likewise delta_j, beta_j)
// until it runs out of rounds, then double the guess. The schedules sum to
// eps, delta and beta. Running counters carry over between guesses; noise
// state does not.

#ifndef DPCOUNT_UNKNOWN_K_HPP_
#define DPCOUNT_UNKNOWN_K_HPP_

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <utility>

#include "dpcount/config.hpp"
#include "dpcount/errors.hpp"
#include "dpcount/known_k.hpp"
#include "dpcount/mechanism.hpp"
#include "dpcount/noise.hpp"
#include "dpcount/query.hpp"

namespace dpcount {

// Known-K configuration of the j-th guess.
inline KnownKConfig doubling_instance_config(const PrivacyParams& pp, double beta,
                                             std::int64_t horizon, std::int64_t j) {
  const InstanceSchedule s = instance_schedule(pp, beta, j, 6.0, 6.0, 6.0);
  return derive_known_k_config(s.privacy, s.flippancy_guess, horizon, s.beta);
}

template <StreamQuery Query = DistinctCountQuery>
class UnknownKMechanism final : public Mechanism {
 public:
  UnknownKMechanism(const PrivacyParams& pp, double beta, std::int64_t horizon, Query query,
                    RandomSource src)
      : privacy_(pp), beta_(beta), horizon_(horizon), query_(std::move(query)),
        src_(std::move(src)) {
    check_privacy_params(pp);
    internal::require_parameter(pp.pure() || pp.epsilon < 1.0,
                                "approximate DP path requires epsilon < 1");
    monitor_.emplace(doubling_instance_config(privacy_, beta_, horizon_, 1), query_.value(), src_);
    pre_stream_ = monitor_->output();
  }

  double pre_stream_output() const { return pre_stream_; }

  StepOutput step(UpdateBatch batch) override {
    internal::require_parameter(steps_ < horizon_, "stream longer than the configured horizon T");
    ++steps_;
    query_.apply(batch);
    const double value = query_.value();
    const MonitorStep r = monitor_->observe(value, src_);
    const StepOutput out{r.output, StepStatus::kOk, instance_};
    if (r.aborted) {
      finished_yes_ += monitor_->yes_events();
      ++aborts_;
      ++instance_;
      monitor_.emplace(doubling_instance_config(privacy_, beta_, horizon_, instance_), value, src_);
    }
    return out;
  }

  MechanismStats stats() const override { return {finished_yes_ + monitor_->yes_events(), instance_, aborts_}; }
  const RandomSource& noise() const override { return src_; }
  std::size_t state_words() const override {
    return query_.words() + (sizeof(*this) - sizeof(Query) + 7) / 8;
  }
  std::string name() const override { return "unknown-k"; }

  std::int64_t instance() const { return instance_; }
  const KnownKConfig& current_config() const { return monitor_->config(); }

 private:
  PrivacyParams privacy_;
  double beta_;
  std::int64_t horizon_;
  Query query_;
  RandomSource src_;
  std::optional<OutputMonitor> monitor_;
  double pre_stream_ = 0.0;
  std::int64_t steps_ = 0;
  std::int64_t instance_ = 1;
  std::int64_t finished_yes_ = 0;
  std::int64_t aborts_ = 0;
};

}  // namespace dpcount

#endif  // DPCOUNT_UNKNOWN_K_HPP_
