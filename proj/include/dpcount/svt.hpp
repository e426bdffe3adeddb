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

#ifndef DPCOUNT_SVT_HPP_
#define DPCOUNT_SVT_HPP_

#include <cstdint>

#include "dpcount/errors.hpp"
#include "dpcount/noise.hpp"

namespace dpcount {

enum class SvtAnswer { kNo, kYes, kAborted };

// AboveThreshold with a single positive answer.
//
// The threshold noise tau ~ Lap(2/eps) is drawn once at construction; every
// answered query draws mu ~ Lap(4/eps) and reports kYes iff
// q + mu > threshold + tau (ties answer kNo). After the first kYes the
// instance only reports kAborted and draws nothing. The caller must only pose
// queries of sensitivity at most 1; that contract cannot be checked here.
class AboveThreshold {
 public:
  AboveThreshold(double epsilon, double threshold, RandomSource& src)
      : epsilon_(epsilon), threshold_(threshold) {
    internal::require_parameter(epsilon > 0.0, "AboveThreshold epsilon must be > 0");
    tau_ = src.laplace(2.0 / epsilon_);
  }

  SvtAnswer step(double query_value, RandomSource& src) {
    if (aborted_) return SvtAnswer::kAborted;
    ++answered_;
    const double mu = src.laplace(4.0 / epsilon_);
    if (query_value + mu > threshold_ + tau_) {
      aborted_ = true;
      return SvtAnswer::kYes;
    }
    return SvtAnswer::kNo;
  }

  double epsilon() const { return epsilon_; }
  double threshold() const { return threshold_; }
  double threshold_noise() const { return tau_; }
  bool aborted() const { return aborted_; }
  std::uint64_t queries_answered() const { return answered_; }

 private:
  double epsilon_;
  double threshold_;
  double tau_ = 0.0;
  bool aborted_ = false;
  std::uint64_t answered_ = 0;
};

inline AboveThreshold svt_new(double epsilon, double threshold, RandomSource& src) {
  return AboveThreshold(epsilon, threshold, src);
}

}  // namespace dpcount

#endif  // DPCOUNT_SVT_HPP_
