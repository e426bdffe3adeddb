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

// Queries a monitor can track in place of the distinct count.
//
// A query consumes the update batches and exposes a real value Q^t. The
// monitor's privacy argument needs |Q^t(x) - Q^t(y)| <= 1 for neighboring
// streams at every t; its accuracy argument needs the total variation
// sum_t |Q^t - Q^{t-1}| to be at most the configured K. Both are caller
// contracts.

#ifndef DPCOUNT_QUERY_HPP_
#define DPCOUNT_QUERY_HPP_

#include <concepts>
#include <cstddef>
#include <functional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "dpcount/errors.hpp"
#include "dpcount/stream.hpp"

namespace dpcount {

template <class Q>
concept StreamQuery = std::copy_constructible<Q> && requires(Q q, const Q cq, UpdateBatch b) {
  q.apply(b);
  { cq.value() } -> std::convertible_to<double>;
  { cq.words() } -> std::convertible_to<std::size_t>;
};

// Number of items with a positive running sum.
class DistinctCountQuery {
 public:
  explicit DistinctCountQuery(std::size_t d) : state_(d) {}
  explicit DistinctCountQuery(CounterState state) : state_(std::move(state)) {}

  void apply(UpdateBatch b) { state_.apply(b); }
  double value() const { return static_cast<double>(state_.distinct_count()); }
  const CounterState& state() const { return state_; }
  std::size_t words() const { return state_.words(); }

 private:
  CounterState state_;
};

// Arbitrary function of the running counters.
class OracleQuery {
 public:
  using Oracle = std::function<double(const CounterState&)>;

  OracleQuery(std::size_t d, Oracle oracle) : state_(d), oracle_(std::move(oracle)) {}

  void apply(UpdateBatch b) { state_.apply(b); }
  double value() const { return oracle_(state_); }
  const CounterState& state() const { return state_; }
  std::size_t words() const { return state_.words() + sizeof(Oracle) / 8; }

 private:
  CounterState state_;
  Oracle oracle_;
};

// Q^t = value for every t.
class ConstantQuery {
 public:
  explicit ConstantQuery(double value) : value_(value) {}
  void apply(UpdateBatch) {}
  double value() const { return value_; }
  std::size_t words() const { return 1; }

 private:
  double value_;
};

// Edge streams: item e is the edge edges[e - 1] of a graph on `nodes`
// vertices; an edge is present while its running sum is positive.
// Q^t = (number of vertices with present degree >= min_degree) / 2.
// Changing one edge moves two degrees, so the halving keeps the
// sensitivity at 1.
class HighDegreeQuery {
 public:
  struct Edge {
    std::size_t u = 0;  // 0-based vertex ids
    std::size_t v = 0;
  };

  HighDegreeQuery(std::size_t nodes, std::vector<Edge> edges, std::size_t min_degree)
      : state_(edges.size()), edges_(std::move(edges)), degree_(nodes, 0), min_degree_(min_degree) {
    internal::require_parameter(min_degree >= 1, "degree threshold must be >= 1");
    for (const Edge& e : edges_) {
      internal::require_parameter(e.u < nodes && e.v < nodes && e.u != e.v,
                                  "edge endpoints must be distinct vertices");
    }
  }

  void apply(UpdateBatch b) {
    std::vector<char> before(b.size());
    for (std::size_t k = 0; k < b.size(); ++k) {
      const ItemId id = b[k].item;
      before[k] = id.value >= 1 && id.value <= edges_.size() && state_.count(id) > 0;
    }
    state_.apply(b);
    for (std::size_t k = 0; k < b.size(); ++k) {
      const bool now = state_.count(b[k].item) > 0;
      if (now == static_cast<bool>(before[k])) continue;
      const Edge& e = edges_[b[k].item.value - 1];
      bump(e.u, now ? 1 : -1);
      bump(e.v, now ? 1 : -1);
    }
  }

  double value() const { return static_cast<double>(high_) / 2.0; }
  std::size_t words() const { return state_.words() + degree_.size() + 2 * edges_.size() + 2; }

 private:
  void bump(std::size_t vertex, int by) {
    const bool was_high = degree_[vertex] >= min_degree_;
    degree_[vertex] = static_cast<std::size_t>(static_cast<long long>(degree_[vertex]) + by);
    const bool is_high = degree_[vertex] >= min_degree_;
    if (was_high != is_high) high_ += is_high ? 1 : -1;
  }

  CounterState state_;
  std::vector<Edge> edges_;
  std::vector<std::size_t> degree_;
  std::size_t min_degree_;
  long long high_ = 0;
};

static_assert(StreamQuery<DistinctCountQuery>);
static_assert(StreamQuery<OracleQuery>);
static_assert(StreamQuery<ConstantQuery>);
static_assert(StreamQuery<HighDegreeQuery>);

}  // namespace dpcount

#endif  // DPCOUNT_QUERY_HPP_
