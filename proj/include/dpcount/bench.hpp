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

#ifndef DPCOUNT_BENCH_HPP_
#define DPCOUNT_BENCH_HPP_

#include <chrono>
#include <cstdint>
#include <optional>
#include <vector>

#include "dpcount/config.hpp"
#include "dpcount/errors.hpp"
#include "dpcount/mechanism.hpp"
#include "dpcount/stream.hpp"

namespace dpcount {

struct BenchResult {
  std::size_t steps = 0;
  std::size_t updates = 0;
  double seconds = 0.0;
  double updates_per_second = 0.0;
  std::uint64_t laplace_draws = 0;
  std::uint64_t gaussian_draws = 0;
  std::uint64_t effective_draws = 0;
  std::optional<std::uint64_t> draw_limit;
  bool within_limit = true;
  std::size_t state_words = 0;
};

// Noise-draw ceiling for the known-K mechanism over `steps` steps.
inline std::uint64_t known_k_draw_limit(const KnownKConfig& cfg, std::size_t steps) {
  return static_cast<std::uint64_t>(steps) + 2 * static_cast<std::uint64_t>(cfg.max_rounds) + 1;
}

// Singleton likes-model stream of `length` steps; step t toggles item
// ((t - 1) mod d) + 1.
inline Stream cyclic_toggle_stream(std::size_t d, std::size_t length) {
  internal::require_parameter(d >= 1, "d must be >= 1");
  std::vector<std::vector<Update>> batches(length);
  std::vector<std::int8_t> present(d, 0);
  for (std::size_t t = 0; t < length; ++t) {
    const std::size_t i = t % d;
    const std::int8_t delta = present[i] ? -1 : 1;
    present[i] ^= 1;
    batches[t].push_back({ItemId{static_cast<std::uint32_t>(i + 1)}, delta});
  }
  return Stream(d, length, Model::kLikes, std::move(batches));
}

// Times mech over the whole stream. Counted draws include zero-mode calls.
inline BenchResult throughput_bench(Mechanism& mech, const Stream& stream,
                                    std::optional<std::uint64_t> draw_limit = std::nullopt) {
  BenchResult r;
  const auto start = std::chrono::steady_clock::now();
  for (std::size_t t = 1; t <= stream.length(); ++t) mech.step(stream.batch(t));
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  r.steps = stream.length();
  r.updates = stream.update_count();
  r.updates_per_second = r.seconds > 0.0 ? static_cast<double>(r.updates) / r.seconds : 0.0;
  r.laplace_draws = mech.noise().laplace_draws();
  r.gaussian_draws = mech.noise().gaussian_draws();
  r.effective_draws = mech.noise().effective_draws();
  r.draw_limit = draw_limit;
  r.within_limit = !draw_limit || mech.noise().draws() <= *draw_limit;
  r.state_words = mech.state_words();
  return r;
}

}  // namespace dpcount

#endif  // DPCOUNT_BENCH_HPP_
