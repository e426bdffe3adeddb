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

// Unknown-K distinct counting that also tracks the trivial bounds.
//
// Guess j uses eps_j = 12 eps / (pi^2 j^2), beta_j = 12 beta / (pi^2 j^2),
// delta_j = 6 delta / (pi^2 j^2) and K_j = 2^j. Before starting guess j it
// compares the monitor's error scale B_j against min(d, err_T):
//
//   min(K_j, B_j) > min(d, err_T)  ->  switch for good to the zero mechanism
//                                      (d is the smaller) or to the Laplace /
//                                      Gaussian baseline (err_T is smaller)
//   K_j >= B_j                     ->  run the tracking monitor
//   K_j <  B_j                     ->  run the monitor with a frozen output
//
// When a guess runs out of rounds at step t', the next guess starts from the
// fresh snapshot Q^{t'} + Lap(1/eps_j).

#ifndef DPCOUNT_UNKNOWN_K_ALL_HPP_
#define DPCOUNT_UNKNOWN_K_ALL_HPP_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "dpcount/baselines.hpp"
#include "dpcount/config.hpp"
#include "dpcount/errors.hpp"
#include "dpcount/known_k.hpp"
#include "dpcount/mechanism.hpp"
#include "dpcount/noise.hpp"
#include "dpcount/query.hpp"

namespace dpcount {

// B_j:
//   delta = 0:  sqrt(K_j ln(T/beta_j) / eps_j)
//   delta > 0:  (K_j ln(1/delta_j) ln^2(T/beta_j) / eps_j^2)^(1/3)
//               + sqrt(ln(1/delta_j)) ln(T/beta_j) / eps_j
inline double monitor_error_scale(const InstanceSchedule& s, std::int64_t horizon) {
  const double k = static_cast<double>(s.flippancy_guess);
  const double eps = s.privacy.epsilon;
  const double log_t = std::log(static_cast<double>(horizon) / s.beta);
  if (s.privacy.pure()) return std::sqrt(k * log_t / eps);
  const double log_d = std::log(1.0 / s.privacy.delta);
  return std::cbrt(k * log_d * log_t * log_t / (eps * eps)) + std::sqrt(log_d) * log_t / eps;
}

// err_T:
//   delta = 0:  T ln(T/beta) / eps
//   delta > 0:  sqrt(T ln(1/delta) ln(T/beta)) / eps
inline double baseline_error_scale(const PrivacyParams& pp, double beta, std::int64_t horizon) {
  const double t = static_cast<double>(horizon);
  const double log_t = std::log(t / beta);
  if (pp.pure()) return t * log_t / pp.epsilon;
  return std::sqrt(t * std::log(1.0 / pp.delta) * log_t) / pp.epsilon;
}

enum class InstanceKind { kTracking, kFrozen, kZero, kLaplace, kGaussian };

inline const char* instance_kind_name(InstanceKind k) {
  switch (k) {
    case InstanceKind::kTracking: return "tracking";
    case InstanceKind::kFrozen: return "frozen";
    case InstanceKind::kZero: return "zero";
    case InstanceKind::kLaplace: return "laplace";
    case InstanceKind::kGaussian: return "gaussian";
  }
  return "?";
}

// What was decided when guess j started.
struct InstanceRecord {
  std::int64_t index = 1;
  std::int64_t flippancy_guess = 2;
  double monitor_scale = 0.0;   // B_j
  double baseline_scale = 0.0;  // err_T
  InstanceKind kind = InstanceKind::kTracking;
  std::int64_t start_step = 1;
};

template <StreamQuery Query = DistinctCountQuery>
class UnknownKAllBoundsMechanism final : public Mechanism {
 public:
  UnknownKAllBoundsMechanism(const PrivacyParams& pp, double beta, std::int64_t horizon,
                             std::size_t d, Query query, RandomSource src)
      : privacy_(pp), beta_(beta), horizon_(horizon), d_(d), query_(std::move(query)),
        src_(std::move(src)) {
    check_privacy_params(pp);
    internal::require_parameter(pp.pure() || pp.epsilon < 1.0,
                                "approximate DP path requires epsilon < 1");
    internal::require_parameter(horizon >= 1, "T must be >= 1");
    internal::require_parameter(beta > 0.0 && beta < 1.0, "beta must be in (0, 1)");
    start_instance(1, std::nullopt);
    pre_stream_ = monitor_ ? monitor_->output() : 0.0;
  }

  double pre_stream_output() const { return pre_stream_; }

  StepOutput step(UpdateBatch batch) override {
    internal::require_parameter(steps_ < horizon_, "stream longer than the configured horizon T");
    ++steps_;
    query_.apply(batch);
    const double value = query_.value();
    switch (kind_) {
      case InstanceKind::kZero:
        return {0.0, StepStatus::kOk, instance_};
      case InstanceKind::kLaplace:
        return {value + src_.laplace(laplace_baseline_scale(privacy_, horizon_)), StepStatus::kOk,
                instance_};
      case InstanceKind::kGaussian:
        return {value + src_.gaussian(gaussian_baseline_sigma(privacy_, horizon_)),
                StepStatus::kOk, instance_};
      case InstanceKind::kTracking:
      case InstanceKind::kFrozen:
        break;
    }
    const MonitorStep r = monitor_->observe(value, src_);
    const StepOutput out{r.output, StepStatus::kOk, instance_};
    if (r.aborted) {
      ++aborts_;
      finished_yes_ += monitor_->yes_events();
      const double refreshed = value + src_.laplace(1.0 / schedule_.privacy.epsilon);
      start_instance(instance_ + 1, refreshed);
    }
    return out;
  }

  MechanismStats stats() const override {
    return {finished_yes_ + (monitor_ ? monitor_->yes_events() : 0), instance_, aborts_};
  }
  const RandomSource& noise() const override { return src_; }
  std::size_t state_words() const override {
    return query_.words() + (sizeof(*this) - sizeof(Query) + 7) / 8 +
           history_.size() * sizeof(InstanceRecord) / 8;
  }
  std::string name() const override { return "unknown-k-all"; }

  InstanceKind current_kind() const { return kind_; }
  const std::vector<InstanceRecord>& history() const { return history_; }

 private:
  void start_instance(std::int64_t j, std::optional<double> carried_output) {
    instance_ = j;
    schedule_ = instance_schedule(privacy_, beta_, j, 12.0, 6.0, 12.0);
    internal::require_parameter(schedule_.beta < 1.0,
                                "beta too large for the per-guess failure schedule");
    InstanceRecord rec;
    rec.index = j;
    rec.flippancy_guess = schedule_.flippancy_guess;
    rec.monitor_scale = monitor_error_scale(schedule_, horizon_);
    rec.baseline_scale = baseline_error_scale(privacy_, beta_, horizon_);
    rec.start_step = steps_ + 1;

    const double k = static_cast<double>(schedule_.flippancy_guess);
    const double trivial = std::min(static_cast<double>(d_), rec.baseline_scale);
    monitor_.reset();
    if (std::min(k, rec.monitor_scale) > trivial) {
      if (static_cast<double>(d_) <= rec.baseline_scale) {
        kind_ = InstanceKind::kZero;
      } else {
        kind_ = privacy_.pure() ? InstanceKind::kLaplace : InstanceKind::kGaussian;
      }
    } else {
      kind_ = k >= rec.monitor_scale ? InstanceKind::kTracking : InstanceKind::kFrozen;
      const KnownKConfig cfg = derive_known_k_config(schedule_.privacy, schedule_.flippancy_guess,
                                                     horizon_, schedule_.beta);
      const auto mode = kind_ == InstanceKind::kTracking ? OutputMonitor::Mode::kTracking
                                                         : OutputMonitor::Mode::kFrozen;
      if (carried_output) {
        monitor_.emplace(OutputMonitor::resume(cfg, *carried_output, src_, mode));
      } else {
        monitor_.emplace(cfg, query_.value(), src_, mode);
      }
    }
    rec.kind = kind_;
    history_.push_back(rec);
  }

  PrivacyParams privacy_;
  double beta_;
  std::int64_t horizon_;
  std::size_t d_;
  Query query_;
  RandomSource src_;
  InstanceSchedule schedule_;
  std::optional<OutputMonitor> monitor_;
  InstanceKind kind_ = InstanceKind::kTracking;
  std::vector<InstanceRecord> history_;
  double pre_stream_ = 0.0;
  std::int64_t steps_ = 0;
  std::int64_t instance_ = 1;
  std::int64_t finished_yes_ = 0;
  std::int64_t aborts_ = 0;
};

}  // namespace dpcount

#endif  // DPCOUNT_UNKNOWN_K_ALL_HPP_
