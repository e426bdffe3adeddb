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

// Turns a mechanism that runs on general-model streams of length T + 1 into
// one for likes-model streams of length T by prepending an all-zero step:
// output t of the adapter is output t + 1 of the inner mechanism on 0^d x.
// For a 0-output-determined inner mechanism that is event-level
// (eps, delta)-private, the adapter is item-level (2 eps, (1 + e^eps) delta)
// private. Every mechanism in this library is 0-output-determined: its
// output distribution depends on the input only through the true count
// sequence.

#ifndef DPCOUNT_ADAPTER_HPP_
#define DPCOUNT_ADAPTER_HPP_

#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "dpcount/errors.hpp"
#include "dpcount/mechanism.hpp"
#include "dpcount/stream.hpp"

namespace dpcount {

class EventToItemAdapter final : public Mechanism {
 public:
  // `inner` must accept T + 1 steps; its first output is consumed here.
  EventToItemAdapter(std::unique_ptr<Mechanism> inner, std::size_t d)
      : inner_(std::move(inner)), state_(d) {
    internal::require_parameter(inner_ != nullptr, "adapter needs an inner mechanism");
    inner_->step(UpdateBatch{});
  }

  StepOutput step(UpdateBatch batch) override {
    state_.apply(batch);
    for (const Update& u : batch) {
      const std::int32_t c = state_.count(u.item);
      if (c < 0 || c > 1) {
        throw ValidationError("event-to-item adapter needs a likes-model stream: item " +
                              std::to_string(u.item.value) + " at step " +
                              std::to_string(state_.time()));
      }
    }
    return inner_->step(batch);
  }

  MechanismStats stats() const override { return inner_->stats(); }
  const RandomSource& noise() const override { return inner_->noise(); }
  std::size_t state_words() const override {
    return inner_->state_words() + state_.words() + 1;
  }
  std::string name() const override { return "item(" + inner_->name() + ")"; }

 private:
  std::unique_ptr<Mechanism> inner_;
  CounterState state_;
};

// 0^d followed by x, as a general-model stream of length T + 1.
inline Stream prepend_zero_step(const Stream& x) {
  std::vector<std::vector<Update>> batches = x.to_batches();
  batches.insert(batches.begin(), std::vector<Update>{});
  return Stream(x.dimension(), x.length() + 1, Model::kGeneral, batches);
}

// Runs the adapter over a likes-model stream; `make_inner` receives the
// horizon T + 1 the inner mechanism must be built for.
template <class InnerFactory>
std::vector<double> event_to_item_adapter(InnerFactory&& make_inner, const Stream& x) {
  if (x.model() != Model::kLikes) {
    throw ValidationError("event-to-item adapter needs a stream declared in the likes model");
  }
  require_valid(x);
  EventToItemAdapter adapter(make_inner(static_cast<std::int64_t>(x.length()) + 1),
                             x.dimension());
  std::vector<double> out;
  out.reserve(x.length());
  for (std::size_t t = 1; t <= x.length(); ++t) out.push_back(adapter.step(x.batch(t)).value);
  return out;
}

}  // namespace dpcount

#endif  // DPCOUNT_ADAPTER_HPP_
