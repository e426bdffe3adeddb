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

#ifndef DPCOUNT_MECHANISM_HPP_
#define DPCOUNT_MECHANISM_HPP_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <string>

#include "dpcount/noise.hpp"
#include "dpcount/stream.hpp"

namespace dpcount {

enum class StepStatus {
  kOk,
  kAbortedAfter,  // step processed and output emitted; the mechanism then stopped
  kAborted,       // mechanism had already stopped; value repeats the last output
};

struct StepOutput {
  double value = 0.0;
  StepStatus status = StepStatus::kOk;
  std::int64_t instance = 1;  // which sparse-vector instance produced the value
};

struct MechanismStats {
  std::int64_t yes_events = 0;  // positive sparse-vector answers
  std::int64_t instances = 1;   // instances started (wrappers restart them)
  std::int64_t aborts = 0;      // instances that ran out of rounds
};

// A private continual-release mechanism: one output per input batch.
class Mechanism {
 public:
  virtual ~Mechanism() = default;

  virtual StepOutput step(UpdateBatch batch) = 0;
  virtual MechanismStats stats() const { return {}; }
  virtual const RandomSource& noise() const = 0;
  // Mechanism state in 64-bit words.
  virtual std::size_t state_words() const = 0;
  virtual std::string name() const = 0;
};

// Builds a fresh mechanism around the given noise source.
using MechanismFactory = std::function<std::unique_ptr<Mechanism>(RandomSource)>;

}  // namespace dpcount

#endif  // DPCOUNT_MECHANISM_HPP_
