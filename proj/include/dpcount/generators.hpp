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

// Stream constructions: the block and multi-update families used to argue
// lower bounds, the 1-way-marginals reductions, seeded random streams with a
// flippancy target, and neighboring-stream edits.

#ifndef DPCOUNT_GENERATORS_HPP_
#define DPCOUNT_GENERATORS_HPP_

#include <algorithm>
#include <cstdint>
#include <map>
#include <random>
#include <span>
#include <string>
#include <unordered_set>
#include <vector>

#include "dpcount/errors.hpp"
#include "dpcount/stream.hpp"
#include "dpcount/stream_io.hpp"

namespace dpcount {

namespace internal {

inline void require_strictly_increasing(std::span<const std::size_t> v, std::size_t lo,
                                        std::size_t hi, const char* what) {
  for (std::size_t k = 0; k < v.size(); ++k) {
    require_parameter(v[k] >= lo && v[k] <= hi,
                      std::string(what) + " entries must lie in [" + std::to_string(lo) + ", " +
                          std::to_string(hi) + "]");
    require_parameter(k == 0 || v[k - 1] < v[k], std::string(what) + " must be strictly increasing");
  }
}

inline Update make_update(std::size_t item, int delta) {
  return Update{ItemId{static_cast<std::uint32_t>(item)}, static_cast<std::int8_t>(delta)};
}

}  // namespace internal

// Splits [1, T'] into T'/m blocks of m steps. In the p-th chosen block
// (p = 0, 1, ...) item i in [1, m] is inserted at the block's i-th step when p
// is even and deleted there when p is odd. Singleton updates, likes model,
// total flippancy m |J|.
inline Stream blocks_stream(std::size_t d, std::size_t m, std::span<const std::size_t> blocks,
                            std::size_t length) {
  internal::require_parameter(m >= 1, "m must be >= 1");
  internal::require_parameter(d >= m, "d must be >= m");
  internal::require_parameter(length % m == 0, "T' must be divisible by m");
  internal::require_strictly_increasing(blocks, 1, length / m, "J");
  std::vector<std::vector<Update>> batches(length);
  for (std::size_t p = 0; p < blocks.size(); ++p) {
    const int sign = p % 2 == 0 ? 1 : -1;
    for (std::size_t i = 1; i <= m; ++i) {
      batches[(blocks[p] - 1) * m + i - 1].push_back(internal::make_update(i, sign));
    }
  }
  return Stream(d, length, Model::kLikes, batches);
}

// At the k-th chosen step (k = 0, 1, ...) all items 1..m are inserted (k even)
// or deleted (k odd). Likes model, total flippancy m |I|.
inline Stream multiupdate_stream(std::size_t d, std::size_t m, std::span<const std::size_t> steps,
                                 std::size_t length) {
  internal::require_parameter(m >= 1, "m must be >= 1");
  internal::require_parameter(d >= m, "d must be >= m");
  internal::require_strictly_increasing(steps, 1, length, "I");
  std::vector<std::vector<Update>> batches(length);
  for (std::size_t k = 0; k < steps.size(); ++k) {
    const int sign = k % 2 == 0 ? 1 : -1;
    for (std::size_t i = 1; i <= m; ++i) batches[steps[k] - 1].push_back(internal::make_update(i, sign));
  }
  return Stream(d, length, Model::kLikes, batches);
}

enum class MarginalsVariant { kSingleton, kMulti };

// d = n, T = 2nm. Column j (1-based) owns steps 2n(j-1)+1 .. 2nj: row i is
// inserted at step 2n(j-1)+i and deleted at step 2n(j-1)+n+i when
// y[i][j] = 1. After step (2j-1)n the distinct count equals the number of ones
// in column j.
inline Stream marginals_to_stream_singleton(const MarginalsTable& y) {
  internal::require_parameter(y.rows >= 1 && y.cols >= 1, "table needs n, m >= 1");
  const std::size_t n = y.rows;
  std::vector<std::vector<Update>> batches(2 * n * y.cols);
  for (std::size_t j = 0; j < y.cols; ++j) {
    for (std::size_t i = 0; i < n; ++i) {
      if (!y.at(i, j)) continue;
      batches[2 * n * j + i].push_back(internal::make_update(i + 1, 1));
      batches[2 * n * j + n + i].push_back(internal::make_update(i + 1, -1));
    }
  }
  return Stream(n, 2 * n * y.cols, Model::kLikes, batches);
}

// d = n, T = 2m. Step 2j-1 inserts the rows with a one in column j, step 2j
// deletes them.
inline Stream marginals_to_stream_multi(const MarginalsTable& y) {
  internal::require_parameter(y.rows >= 1 && y.cols >= 1, "table needs n, m >= 1");
  std::vector<std::vector<Update>> batches(2 * y.cols);
  for (std::size_t j = 0; j < y.cols; ++j) {
    for (std::size_t i = 0; i < y.rows; ++i) {
      if (!y.at(i, j)) continue;
      batches[2 * j].push_back(internal::make_update(i + 1, 1));
      batches[2 * j + 1].push_back(internal::make_update(i + 1, -1));
    }
  }
  return Stream(y.rows, 2 * y.cols, Model::kLikes, batches);
}

inline Stream marginals_to_stream(const MarginalsTable& y, MarginalsVariant v) {
  return v == MarginalsVariant::kSingleton ? marginals_to_stream_singleton(y)
                                           : marginals_to_stream_multi(y);
}

// Reads the marginal estimates back out of the per-step outputs r[1..T]:
// b[j] = r[(2j-1)n] / n (singleton) or r[2j-1] / n (multi).
inline std::vector<double> extract_marginals(std::span<const double> outputs, std::size_t n,
                                             std::size_t m, MarginalsVariant variant) {
  internal::require_parameter(n >= 1 && m >= 1, "n, m must be >= 1");
  const std::size_t needed = variant == MarginalsVariant::kSingleton ? 2 * n * m : 2 * m;
  if (outputs.size() < needed) {
    throw InputError("need " + std::to_string(needed) + " outputs, got " +
                     std::to_string(outputs.size()));
  }
  std::vector<double> b(m);
  for (std::size_t j = 1; j <= m; ++j) {
    const std::size_t t = variant == MarginalsVariant::kSingleton ? (2 * j - 1) * n : 2 * j - 1;
    b[j - 1] = outputs[t - 1] / static_cast<double>(n);
  }
  return b;
}

// Seeded random stream whose total flippancy lies in [ceil(K/2), K].
//
// A flip count F is drawn uniformly from that range and F distinct
// (step, item) slots (distinct steps when `singleton`) are sampled; each slot
// toggles its item's presence. General-model streams additionally get
// presence-preserving excursions: +1 then -1 on a present item (running sum
// 1 -> 2 -> 1) or -1 then +1 on an absent one (0 -> -1 -> 0).
inline Stream random_stream(std::size_t d, std::size_t length, Model model, bool singleton,
                            std::int64_t target_flippancy, std::uint64_t seed) {
  internal::require_parameter(d >= 1, "d must be >= 1");
  internal::require_parameter(target_flippancy >= 0, "target K must be >= 0");
  const std::uint64_t capacity = singleton ? length : static_cast<std::uint64_t>(d) * length;
  internal::require_parameter(static_cast<std::uint64_t>(target_flippancy) <= capacity,
                              "target K=" + std::to_string(target_flippancy) +
                                  " exceeds the stream capacity " + std::to_string(capacity));
  std::mt19937_64 rng(seed);
  auto uniform = [&rng](std::uint64_t lo, std::uint64_t hi) {
    return std::uniform_int_distribution<std::uint64_t>(lo, hi)(rng);
  };

  const std::uint64_t flips =
      target_flippancy == 0
          ? 0
          : uniform((static_cast<std::uint64_t>(target_flippancy) + 1) / 2,
                    static_cast<std::uint64_t>(target_flippancy));

  // Floyd's sampling of `flips` distinct slots out of `capacity`.
  std::unordered_set<std::uint64_t> slots;
  slots.reserve(flips * 2);
  for (std::uint64_t j = capacity - flips; j < capacity; ++j) {
    const std::uint64_t r = uniform(0, j);
    if (!slots.insert(r).second) slots.insert(j);
  }

  enum class Kind : std::uint8_t { kFlip, kExcursionOut, kExcursionBack };
  std::vector<std::map<std::size_t, Kind>> events(d);  // per item, keyed by 0-based step
  std::vector<char> step_used(singleton ? length : 0, 0);
  for (std::uint64_t s : slots) {
    std::size_t t, i;
    if (singleton) {
      t = static_cast<std::size_t>(s);
      i = static_cast<std::size_t>(uniform(0, d - 1));
      step_used[t] = 1;
    } else {
      t = static_cast<std::size_t>(s / d);
      i = static_cast<std::size_t>(s % d);
    }
    events[i][t] = Kind::kFlip;
  }

  if (model == Model::kGeneral && length >= 2) {
    const std::uint64_t attempts = (flips + 1) / 2;
    for (std::uint64_t a = 0; a < attempts; ++a) {
      const auto i = static_cast<std::size_t>(uniform(0, d - 1));
      auto t1 = static_cast<std::size_t>(uniform(0, length - 1));
      auto t2 = static_cast<std::size_t>(uniform(0, length - 1));
      if (t1 == t2) continue;
      if (t1 > t2) std::swap(t1, t2);
      if (singleton && (step_used[t1] || step_used[t2])) continue;
      auto it = events[i].lower_bound(t1);
      if (it != events[i].end() && it->first <= t2) continue;
      events[i][t1] = Kind::kExcursionOut;
      events[i][t2] = Kind::kExcursionBack;
      if (singleton) step_used[t1] = step_used[t2] = 1;
    }
  }

  std::vector<std::vector<Update>> batches(length);
  for (std::size_t i = 0; i < d; ++i) {
    int count = 0;
    int excursion = 0;
    for (const auto& [t, kind] : events[i]) {
      int delta = 0;
      switch (kind) {
        case Kind::kFlip:
          delta = count == 0 ? 1 : -1;
          break;
        case Kind::kExcursionOut:
          excursion = count == 1 ? 1 : -1;
          delta = excursion;
          break;
        case Kind::kExcursionBack:
          delta = -excursion;
          break;
      }
      count += delta;
      batches[t].push_back(internal::make_update(i + 1, delta));
    }
  }
  for (auto& b : batches) {
    std::sort(b.begin(), b.end(), [](const Update& x, const Update& y) { return x.item < y.item; });
  }
  return Stream(d, length, model, batches);
}

enum class NeighborKind { kEvent, kItem };

struct Neighbor {
  Stream stream;
  NeighborKind kind;
};

// Replaces item i's whole update column (column[t-1] = x_i^t in {-1, 0, 1}).
inline Neighbor neighbor_item(const Stream& x, ItemId item, std::span<const std::int8_t> column) {
  internal::require_parameter(item.value >= 1 && item.value <= x.dimension(), "item out of range");
  internal::require_parameter(column.size() == x.length(), "replacement column must have T entries");
  std::vector<std::vector<Update>> batches = x.to_batches();
  for (std::size_t t = 0; t < x.length(); ++t) {
    auto& b = batches[t];
    std::erase_if(b, [&](const Update& u) { return u.item == item; });
    const std::int8_t v = column[t];
    internal::require_parameter(v >= -1 && v <= 1, "column entries must be in {-1, 0, 1}");
    if (v != 0) {
      b.push_back(Update{item, v});
      std::sort(b.begin(), b.end(), [](const Update& p, const Update& q) { return p.item < q.item; });
    }
  }
  Neighbor out{Stream(x.dimension(), x.length(), x.model(), batches), NeighborKind::kItem};
  require_valid(out.stream);
  return out;
}

// Sets the single coordinate x_i^t to `value` in {-1, 0, 1}.
inline Neighbor neighbor_event(const Stream& x, std::size_t step, ItemId item, int value) {
  internal::require_parameter(step >= 1 && step <= x.length(), "step out of range");
  internal::require_parameter(item.value >= 1 && item.value <= x.dimension(), "item out of range");
  internal::require_parameter(value >= -1 && value <= 1, "value must be in {-1, 0, 1}");
  std::vector<std::vector<Update>> batches = x.to_batches();
  auto& b = batches[step - 1];
  std::erase_if(b, [&](const Update& u) { return u.item == item; });
  if (value != 0) {
    b.push_back(Update{item, static_cast<std::int8_t>(value)});
    std::sort(b.begin(), b.end(), [](const Update& p, const Update& q) { return p.item < q.item; });
  }
  Neighbor out{Stream(x.dimension(), x.length(), x.model(), batches), NeighborKind::kEvent};
  require_valid(out.stream);
  return out;
}

}  // namespace dpcount

#endif  // DPCOUNT_GENERATORS_HPP_
