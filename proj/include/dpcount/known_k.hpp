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

// Distinct counting with a known bound K on the total flippancy.
//
// The monitor keeps releasing a noisy snapshot `out` of the tracked value Q
// and asks an AboveThreshold instance, at every step, whether |out - Q| has
// drifted past Thresh. Each positive answer refreshes out = Q + Lap(1/eps_1)
// and starts a new AboveThreshold instance; the run is limited to S_K rounds,
// a round being one AboveThreshold instance plus one snapshot noise draw.

#ifndef DPCOUNT_KNOWN_K_HPP_
#define DPCOUNT_KNOWN_K_HPP_

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
#include "dpcount/svt.hpp"

namespace dpcount {

struct MonitorStep {
  double output = 0.0;
  bool refreshed = false;  // out was replaced at this step
  bool aborted = false;    // the rounds ran out at this step
};

// The sparse-vector monitor, independent of how Q is computed.
//
// Rounds are counted from 1 (the initial snapshot). A positive answer while
// fewer than S_K rounds have been used opens the next round; a positive answer
// in round S_K stops the monitor instead, keeping the previous output. This
// spends exactly S_K AboveThreshold instances and S_K snapshot draws.
//
// In frozen mode the snapshot is never refreshed; rounds still advance.
class OutputMonitor {
 public:
  enum class Mode { kTracking, kFrozen };

  // Draws tau_1 ~ Lap(2/eps_1), then out = initial_value + nu_1, nu_1 ~ Lap(1/eps_1).
  OutputMonitor(const KnownKConfig& cfg, double initial_value, RandomSource& src,
                Mode mode = Mode::kTracking)
      : cfg_(cfg), mode_(mode), svt_(cfg.round_epsilon, cfg.threshold, src) {
    output_ = initial_value + src.laplace(1.0 / cfg_.round_epsilon);
  }

  // Continues from an output released elsewhere; draws only tau_1.
  static OutputMonitor resume(const KnownKConfig& cfg, double output, RandomSource& src,
                              Mode mode = Mode::kTracking) {
    return OutputMonitor(cfg, output, src, mode, ResumeTag{});
  }

  // One step: mu_t ~ Lap(4/eps_1) is drawn inside the AboveThreshold query.
  MonitorStep observe(double value, RandomSource& src) {
    if (aborted_) return {output_, false, true};
    const SvtAnswer answer = svt_.step(std::fabs(output_ - value), src);
    if (answer != SvtAnswer::kYes) return {output_, false, false};
    ++yes_events_;
    if (rounds_ >= cfg_.max_rounds) {
      aborted_ = true;
      return {output_, false, true};
    }
    ++rounds_;
    svt_ = AboveThreshold(cfg_.round_epsilon, cfg_.threshold, src);
    if (mode_ == Mode::kTracking) {
      output_ = value + src.laplace(1.0 / cfg_.round_epsilon);
      return {output_, true, false};
    }
    return {output_, false, false};
  }

  double output() const { return output_; }
  bool aborted() const { return aborted_; }
  std::int64_t rounds() const { return rounds_; }
  std::int64_t yes_events() const { return yes_events_; }
  Mode mode() const { return mode_; }
  const KnownKConfig& config() const { return cfg_; }

 private:
  struct ResumeTag {};
  OutputMonitor(const KnownKConfig& cfg, double output, RandomSource& src, Mode mode, ResumeTag)
      : cfg_(cfg), mode_(mode), svt_(cfg.round_epsilon, cfg.threshold, src), output_(output) {}

  KnownKConfig cfg_;
  Mode mode_;
  AboveThreshold svt_;
  double output_ = 0.0;
  std::int64_t rounds_ = 1;
  std::int64_t yes_events_ = 0;
  bool aborted_ = false;
};

// Item-level private release of Q^t (by default the distinct count) for
// streams of total flippancy (or total variation of Q) at most cfg.K.
//
// The snapshot drawn at construction is the pre-stream output; step t returns
// the output after consuming x^t.
template <StreamQuery Query = DistinctCountQuery>
class KnownKMechanism final : public Mechanism {
 public:
  KnownKMechanism(const KnownKConfig& cfg, Query query, RandomSource src)
      : query_(std::move(query)),
        src_(std::move(src)),
        monitor_(cfg, query_.value(), src_) {
    pre_stream_ = monitor_.output();
  }

  double pre_stream_output() const { return pre_stream_; }

  StepOutput step(UpdateBatch batch) override {
    if (monitor_.aborted()) return {monitor_.output(), StepStatus::kAborted, 1};
    internal::require_parameter(steps_ < monitor_.config().horizon,
                                "stream longer than the configured horizon T");
    query_.apply(batch);
    ++steps_;
    const MonitorStep r = monitor_.observe(query_.value(), src_);
    return {r.output, r.aborted ? StepStatus::kAbortedAfter : StepStatus::kOk, 1};
  }

  MechanismStats stats() const override {
    return {monitor_.yes_events(), 1, monitor_.aborted() ? 1 : 0};
  }
  const RandomSource& noise() const override { return src_; }
  std::size_t state_words() const override {
    return query_.words() + (sizeof(*this) - sizeof(Query) + 7) / 8;
  }
  std::string name() const override { return "known-k"; }

  const KnownKConfig& config() const { return monitor_.config(); }
  const Query& query() const { return query_; }
  std::int64_t rounds() const { return monitor_.rounds(); }

 private:
  Query query_;
  RandomSource src_;
  OutputMonitor monitor_;
  double pre_stream_ = 0.0;
  std::int64_t steps_ = 0;
};

// Distinct-count instance over [1, d].
inline std::unique_ptr<Mechanism> make_known_k(const KnownKConfig& cfg, std::size_t d,
                                               RandomSource src) {
  return std::make_unique<KnownKMechanism<>>(cfg, DistinctCountQuery(d), std::move(src));
}

}  // namespace dpcount

#endif  // DPCOUNT_KNOWN_K_HPP_
