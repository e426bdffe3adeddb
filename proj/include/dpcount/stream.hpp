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

// Turnstile streams over the item universe [1, d], the exact per-item
// counter state, and the non-private reference quantities (distinct count,
// flippancy, difference sequence) every mechanism is measured against.

#ifndef DPCOUNT_STREAM_HPP_
#define DPCOUNT_STREAM_HPP_

#include <algorithm>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "dpcount/errors.hpp"

namespace dpcount {

// 1-based item index.
struct ItemId {
  std::uint32_t value = 0;
  friend auto operator<=>(const ItemId&, const ItemId&) = default;
};

struct Update {
  ItemId item;
  std::int8_t delta = 0;  // +1 insertion, -1 deletion
  friend bool operator==(const Update&, const Update&) = default;
};

// One time step of a stream: the nonzero coordinates of x^t.
using UpdateBatch = std::span<const Update>;

enum class Model { kGeneral, kLikes };

inline const char* model_name(Model m) {
  return m == Model::kLikes ? "likes" : "general";
}

// Exact running sums c_1..c_d and the live number of items with c_i > 0.
//
// Each cell packs the 32-bit count with a 32-bit stamp of the last step that
// touched it, so duplicate detection costs nothing beyond the d-word counter
// array and an update costs O(batch size).
class CounterState {
 public:
  explicit CounterState(std::size_t d) : cells_(d) {
    internal::require_parameter(d >= 1, "dimension d must be >= 1");
  }

  // Starts from explicit counts (index 0 holds c_1).
  explicit CounterState(std::span<const std::int32_t> initial)
      : CounterState(initial.size()) {
    for (std::size_t i = 0; i < initial.size(); ++i) {
      cells_[i].count = initial[i];
      if (initial[i] > 0) ++distinct_;
    }
  }

  // Applies x^t. Throws InputError (leaving the state untouched) when an id is
  // outside [1, d], a delta is not +-1, or an id repeats within the batch.
  void apply(UpdateBatch batch) {
    internal::require_parameter(
        time_ < std::numeric_limits<std::uint32_t>::max(),
        "stream longer than 2^32 - 1 steps");
    const std::uint32_t stamp = time_ + 1;
    for (std::size_t k = 0; k < batch.size(); ++k) {
      const Update& u = batch[k];
      const char* problem = nullptr;
      if (u.item.value < 1 || u.item.value > cells_.size()) {
        problem = "item id out of range";
      } else if (u.delta != 1 && u.delta != -1) {
        problem = "update delta must be +1 or -1";
      } else if (cells_[u.item.value - 1].stamp == stamp) {
        problem = "duplicate item in batch";
      }
      if (problem != nullptr) {
        for (std::size_t r = 0; r < k; ++r) cells_[batch[r].item.value - 1].stamp = 0;
        throw InputError(std::string(problem) + " (item " +
                         std::to_string(u.item.value) + ", step " +
                         std::to_string(stamp) + ")");
      }
      cells_[u.item.value - 1].stamp = stamp;
    }
    for (const Update& u : batch) {
      Cell& cell = cells_[u.item.value - 1];
      const bool was_present = cell.count > 0;
      cell.count += u.delta;
      const bool is_present = cell.count > 0;
      if (was_present != is_present) distinct_ += is_present ? 1 : -1;
    }
    ++time_;
  }

  std::int64_t distinct_count() const { return distinct_; }
  std::int32_t count(ItemId i) const { return cells_.at(i.value - 1).count; }
  std::size_t dimension() const { return cells_.size(); }
  std::uint32_t time() const { return time_; }

  // Size of the state in 64-bit words.
  std::size_t words() const {
    return (cells_.size() * sizeof(Cell) + sizeof(*this) + 7) / 8;
  }

 private:
  struct Cell {
    std::int32_t count = 0;
    std::uint32_t stamp = 0;
  };
  static_assert(sizeof(Cell) == 8);

  std::vector<Cell> cells_;
  std::int64_t distinct_ = 0;
  std::uint32_t time_ = 0;
};

inline CounterState apply_batch(CounterState state, UpdateBatch batch) {
  state.apply(batch);
  return state;
}

inline std::int64_t distinct_count(const CounterState& state) {
  return state.distinct_count();
}

// A stream of declared length T over [1, d]. Batches are stored contiguously;
// steps past the supplied batches are empty.
class Stream {
 public:
  Stream() = default;

  Stream(std::size_t d, std::size_t length, Model model)
      : d_(d), length_(length), model_(model), offsets_(length + 1, 0) {
    internal::require_parameter(d >= 1, "dimension d must be >= 1");
  }

  Stream(std::size_t d, std::size_t length, Model model,
         const std::vector<std::vector<Update>>& batches)
      : Stream(d, length, model) {
    if (batches.size() > length) {
      throw InputError("stream has " + std::to_string(batches.size()) +
                       " batches but declared length " + std::to_string(length));
    }
    std::vector<std::uint32_t> seen(d, 0);
    for (std::size_t t = 0; t < length; ++t) {
      if (t < batches.size()) {
        for (const Update& u : batches[t]) {
          if (u.item.value < 1 || u.item.value > d) {
            throw InputError("item id " + std::to_string(u.item.value) +
                             " outside [1, " + std::to_string(d) + "] at step " +
                             std::to_string(t + 1));
          }
          if (u.delta != 1 && u.delta != -1) {
            throw InputError("delta must be +1 or -1 at step " + std::to_string(t + 1));
          }
          if (seen[u.item.value - 1] == t + 1) {
            throw InputError("duplicate item " + std::to_string(u.item.value) +
                             " at step " + std::to_string(t + 1));
          }
          seen[u.item.value - 1] = static_cast<std::uint32_t>(t + 1);
          entries_.push_back(u);
        }
      }
      offsets_[t + 1] = entries_.size();
    }
  }

  std::size_t dimension() const { return d_; }
  std::size_t length() const { return length_; }
  Model model() const { return model_; }
  std::size_t update_count() const { return entries_.size(); }

  // x^t for t in [1, length()].
  UpdateBatch batch(std::size_t t) const {
    if (t < 1 || t > length_) throw InputError("step " + std::to_string(t) + " out of range");
    return UpdateBatch(entries_).subspan(offsets_[t - 1], offsets_[t] - offsets_[t - 1]);
  }

  std::vector<std::vector<Update>> to_batches() const {
    std::vector<std::vector<Update>> out(length_);
    for (std::size_t t = 1; t <= length_; ++t) {
      auto b = batch(t);
      out[t - 1].assign(b.begin(), b.end());
    }
    return out;
  }

  Stream with_model(Model m) const {
    Stream copy = *this;
    copy.model_ = m;
    return copy;
  }

  friend bool operator==(const Stream&, const Stream&) = default;

 private:
  std::size_t d_ = 1;
  std::size_t length_ = 0;
  Model model_ = Model::kGeneral;
  std::vector<Update> entries_;
  std::vector<std::size_t> offsets_ = {0};
};

// First place a likes-model stream leaves {0, 1}.
struct ModelViolation {
  ItemId item;
  std::size_t step = 0;
  std::int64_t prefix_sum = 0;
};

struct ValidationReport {
  bool ok = true;
  std::optional<ModelViolation> violation;
  bool singleton = true;        // ||x^t||_1 <= 1 at every step
  std::size_t max_batch_size = 0;
};

// Checks the stream against its declared model. The general model accepts any
// prefix sum; the likes model requires every prefix sum to stay in {0, 1}.
inline ValidationReport validate(const Stream& stream) {
  ValidationReport report;
  std::vector<std::int64_t> sums(stream.dimension(), 0);
  for (std::size_t t = 1; t <= stream.length(); ++t) {
    const UpdateBatch b = stream.batch(t);
    report.max_batch_size = std::max(report.max_batch_size, b.size());
    if (b.size() > 1) report.singleton = false;
    for (const Update& u : b) {
      std::int64_t& s = sums[u.item.value - 1];
      s += u.delta;
      if (report.ok && stream.model() == Model::kLikes && (s < 0 || s > 1)) {
        report.ok = false;
        report.violation = ModelViolation{u.item, t, s};
      }
    }
  }
  return report;
}

inline void require_valid(const Stream& stream) {
  const ValidationReport r = validate(stream);
  if (!r.ok) {
    throw ValidationError("likes-model violation: item " +
                          std::to_string(r.violation->item.value) + " at step " +
                          std::to_string(r.violation->step) + " has prefix sum " +
                          std::to_string(r.violation->prefix_sum));
  }
}

// CountDistinct(x)^t for t = 1..T.
inline std::vector<std::int64_t> count_sequence(const Stream& stream) {
  CounterState state(stream.dimension());
  std::vector<std::int64_t> out;
  out.reserve(stream.length());
  for (std::size_t t = 1; t <= stream.length(); ++t) {
    state.apply(stream.batch(t));
    out.push_back(state.distinct_count());
  }
  return out;
}

struct FlippancySummary {
  std::int64_t total = 0;     // K
  std::int64_t max_item = 0;  // w
  std::vector<std::int64_t> per_item;
};

// Counts, per item, the steps t in [1, T] where the presence indicator
// 1(prefix sum > 0) differs from its value at t - 1, with presence 0 before
// the stream starts.
inline FlippancySummary total_flippancy(const Stream& stream) {
  require_valid(stream);
  FlippancySummary s;
  s.per_item.assign(stream.dimension(), 0);
  std::vector<std::int64_t> sums(stream.dimension(), 0);
  for (std::size_t t = 1; t <= stream.length(); ++t) {
    for (const Update& u : stream.batch(t)) {
      std::int64_t& c = sums[u.item.value - 1];
      const bool before = c > 0;
      c += u.delta;
      if ((c > 0) != before) ++s.per_item[u.item.value - 1];
    }
  }
  for (std::int64_t k : s.per_item) {
    s.total += k;
    s.max_item = std::max(s.max_item, k);
  }
  return s;
}

// diff^t = CountDistinct^t - CountDistinct^{t-1}, with CountDistinct^0 = 0.
inline std::vector<std::int64_t> diff_sequence(const Stream& stream) {
  std::vector<std::int64_t> counts = count_sequence(stream);
  std::vector<std::int64_t> diff(counts.size());
  std::int64_t prev = 0;
  for (std::size_t t = 0; t < counts.size(); ++t) {
    diff[t] = counts[t] - prev;
    prev = counts[t];
  }
  return diff;
}

}  // namespace dpcount

#endif  // DPCOUNT_STREAM_HPP_
