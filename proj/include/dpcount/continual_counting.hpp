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

// Event-level baseline for likes-model streams: under event-level neighbors
// the difference sequence diff^t = Q^t - Q^{t-1} has sensitivity 1, so a
// binary-tree continual counter over it releases Q^t.
//
// Node layout: at step t the dyadic block ending at t (its size is the lowest
// set bit of t) gets one fresh Lap(L/eps) draw, and the output sums the noisy
// blocks for the set bits of t. L = bit_width(T) is the number of blocks any
// single step can fall into.

#ifndef DPCOUNT_CONTINUAL_COUNTING_HPP_
#define DPCOUNT_CONTINUAL_COUNTING_HPP_

#include <bit>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "dpcount/errors.hpp"
#include "dpcount/mechanism.hpp"
#include "dpcount/noise.hpp"
#include "dpcount/stream.hpp"

namespace dpcount {

class BinaryTreeCounter {
 public:
  BinaryTreeCounter(std::int64_t horizon, double epsilon)
      : horizon_(horizon),
        levels_(std::bit_width(static_cast<std::uint64_t>(horizon > 0 ? horizon : 1))),
        exact_(levels_, 0.0),
        noisy_(levels_, 0.0) {
    internal::require_parameter(horizon >= 1, "T must be >= 1");
    internal::require_parameter(epsilon > 0.0, "epsilon must be > 0");
    scale_ = static_cast<double>(levels_) / epsilon;
  }

  // Adds the next sequence element and returns the noisy prefix sum.
  double add(double value, RandomSource& src) {
    internal::require_parameter(t_ < static_cast<std::uint64_t>(horizon_),
                                "stream longer than the configured horizon T");
    ++t_;
    const int level = std::countr_zero(t_);
    double block = value;
    for (int i = 0; i < level; ++i) {
      block += exact_[i];
      exact_[i] = 0.0;
      noisy_[i] = 0.0;
    }
    exact_[level] = block;
    noisy_[level] = block + src.laplace(scale_);
    double sum = 0.0;
    for (int i = 0; i < levels_; ++i) {
      if ((t_ >> i) & 1U) sum += noisy_[i];
    }
    return sum;
  }

  int levels() const { return levels_; }
  double node_scale() const { return scale_; }

 private:
  std::int64_t horizon_;
  int levels_;
  std::vector<double> exact_;
  std::vector<double> noisy_;
  double scale_ = 0.0;
  std::uint64_t t_ = 0;
};

// Rejects (ValidationError) any step that takes a running sum outside {0, 1}.
class ContinualCountingLikes final : public Mechanism {
 public:
  ContinualCountingLikes(std::size_t d, std::int64_t horizon, double epsilon, RandomSource src)
      : state_(d), counter_(horizon, epsilon), src_(std::move(src)) {}

  StepOutput step(UpdateBatch batch) override {
    state_.apply(batch);
    for (const Update& u : batch) {
      const std::int32_t c = state_.count(u.item);
      if (c < 0 || c > 1) {
        throw ValidationError("continual-likes needs a likes-model stream: item " +
                              std::to_string(u.item.value) + " reaches running sum " +
                              std::to_string(c) + " at step " + std::to_string(state_.time()));
      }
    }
    const std::int64_t q = state_.distinct_count();
    const double diff = static_cast<double>(q - previous_);
    previous_ = q;
    return {counter_.add(diff, src_), StepStatus::kOk, 1};
  }

  const RandomSource& noise() const override { return src_; }
  std::size_t state_words() const override {
    return state_.words() + 2 * static_cast<std::size_t>(counter_.levels()) +
           (sizeof(*this) + 7) / 8;
  }
  std::string name() const override { return "continual-likes"; }
  const BinaryTreeCounter& counter() const { return counter_; }

 private:
  CounterState state_;
  BinaryTreeCounter counter_;
  RandomSource src_;
  std::int64_t previous_ = 0;
};

}  // namespace dpcount

#endif  // DPCOUNT_CONTINUAL_COUNTING_HPP_
