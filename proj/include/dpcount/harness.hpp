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

// Running mechanisms against the exact oracle: single evaluations, seeded
// multi-trial statistics, and the result CSV.

#ifndef DPCOUNT_HARNESS_HPP_
#define DPCOUNT_HARNESS_HPP_

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <limits>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <thread>
#include <vector>

#include "dpcount/errors.hpp"
#include "dpcount/mechanism.hpp"
#include "dpcount/noise.hpp"
#include "dpcount/stream.hpp"

namespace dpcount {

struct TrialReport {
  std::vector<double> outputs;
  std::vector<double> truth;
  std::vector<double> per_step_error;
  double max_error = 0.0;
  std::optional<std::size_t> abort_step;  // step after which the mechanism stopped
  std::int64_t instance_count = 1;
  MechanismStats stats;
  std::uint64_t laplace_draws = 0;
  std::uint64_t gaussian_draws = 0;
  std::uint64_t effective_draws = 0;
  std::chrono::duration<double> wall_time{0.0};
};

// Runs `mech` over every step of `stream` and scores each output against
// `truth` (one value per step).
inline TrialReport evaluate(Mechanism& mech, const Stream& stream, std::span<const double> truth) {
  internal::require_parameter(truth.size() == stream.length(), "truth must have one value per step");
  TrialReport r;
  r.outputs.reserve(stream.length());
  const auto start = std::chrono::steady_clock::now();
  for (std::size_t t = 1; t <= stream.length(); ++t) {
    const StepOutput o = mech.step(stream.batch(t));
    r.outputs.push_back(o.value);
    r.instance_count = std::max(r.instance_count, o.instance);
    if (o.status == StepStatus::kAbortedAfter && !r.abort_step) r.abort_step = t;
  }
  r.wall_time = std::chrono::steady_clock::now() - start;
  r.truth.assign(truth.begin(), truth.end());
  r.per_step_error.resize(r.outputs.size());
  for (std::size_t k = 0; k < r.outputs.size(); ++k) {
    r.per_step_error[k] = std::fabs(r.outputs[k] - r.truth[k]);
    r.max_error = std::max(r.max_error, r.per_step_error[k]);
  }
  r.stats = mech.stats();
  r.instance_count = std::max(r.instance_count, r.stats.instances);
  r.laplace_draws = mech.noise().laplace_draws();
  r.gaussian_draws = mech.noise().gaussian_draws();
  r.effective_draws = mech.noise().effective_draws();
  return r;
}

// Scores against the exact distinct count.
inline TrialReport evaluate(Mechanism& mech, const Stream& stream) {
  require_valid(stream);
  const std::vector<std::int64_t> counts = count_sequence(stream);
  const std::vector<double> truth(counts.begin(), counts.end());
  return evaluate(mech, stream, truth);
}

struct TrialOptions {
  std::size_t trials = 100;
  std::uint64_t base_seed = 0;
  NoiseMode mode = NoiseMode::kLive;
  double bound = std::numeric_limits<double>::infinity();
  unsigned jobs = 1;
  bool keep_reports = false;
};

struct TrialSummary {
  std::vector<double> max_errors;  // indexed by trial
  std::vector<std::int64_t> instance_counts;
  std::vector<TrialReport> reports;  // only with keep_reports
  double pass_fraction = 0.0;        // fraction of trials with max_error < bound
  double median = 0.0;
  double p90 = 0.0;
  double worst = 0.0;
};

// Noise source of trial `index`.
inline RandomSource trial_source(std::uint64_t base_seed, NoiseMode mode, std::uint64_t index) {
  return RandomSource(base_seed, mode).child(index);
}

namespace internal {

inline double nearest_rank(const std::vector<double>& sorted, double q) {
  if (sorted.empty()) return 0.0;
  const auto rank = static_cast<std::size_t>(std::ceil(q * static_cast<double>(sorted.size())));
  return sorted[std::clamp<std::size_t>(rank, 1, sorted.size()) - 1];
}

// Calls fn(i) for i in [0, n) on `jobs` threads.
template <class Fn>
void parallel_for(std::size_t n, unsigned jobs, Fn&& fn) {
  jobs = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(std::max<std::size_t>(n, 1))));
  if (jobs == 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  std::exception_ptr failure;
  std::atomic<bool> failed{false};
  for (unsigned w = 0; w < jobs; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < n && !failed; i = next++) {
        try {
          fn(i);
        } catch (...) {
          if (!failed.exchange(true)) failure = std::current_exception();
        }
      }
    });
  }
  for (auto& th : pool) th.join();
  if (failure) std::rethrow_exception(failure);
}

}  // namespace internal

// Independent trials with child seeds derive_seed(base_seed, trial index).
// Results do not depend on `jobs`.
inline TrialSummary run_trials(const MechanismFactory& factory, const Stream& stream,
                               const TrialOptions& opts) {
  internal::require_parameter(opts.trials >= 1, "need at least one trial");
  require_valid(stream);
  const std::vector<std::int64_t> counts = count_sequence(stream);
  const std::vector<double> truth(counts.begin(), counts.end());

  TrialSummary s;
  s.max_errors.resize(opts.trials);
  s.instance_counts.resize(opts.trials);
  if (opts.keep_reports) s.reports.resize(opts.trials);
  internal::parallel_for(opts.trials, opts.jobs, [&](std::size_t i) {
    auto mech = factory(trial_source(opts.base_seed, opts.mode, i));
    TrialReport r = evaluate(*mech, stream, truth);
    s.max_errors[i] = r.max_error;
    s.instance_counts[i] = r.instance_count;
    if (opts.keep_reports) s.reports[i] = std::move(r);
  });

  std::size_t passed = 0;
  for (double e : s.max_errors) passed += e < opts.bound ? 1 : 0;
  s.pass_fraction = static_cast<double>(passed) / static_cast<double>(opts.trials);
  std::vector<double> sorted = s.max_errors;
  std::sort(sorted.begin(), sorted.end());
  s.median = internal::nearest_rank(sorted, 0.5);
  s.p90 = internal::nearest_rank(sorted, 0.9);
  s.worst = sorted.back();
  return s;
}

inline std::string format_number(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

// t,output,truth,abs_error rows plus a trailing summary comment.
inline void write_result_csv(std::ostream& out, const TrialReport& r) {
  out << "t,output,truth,abs_error\n";
  for (std::size_t k = 0; k < r.outputs.size(); ++k) {
    out << (k + 1) << ',' << format_number(r.outputs[k]) << ',' << format_number(r.truth[k]) << ','
        << format_number(r.per_step_error[k]) << '\n';
  }
  out << "# max_error=" << format_number(r.max_error) << " aborts=" << r.stats.aborts
      << " instances=" << r.instance_count << '\n';
}

}  // namespace dpcount

#endif  // DPCOUNT_HARNESS_HPP_
