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

#include "dpcount/known_k.hpp"

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "dpcount/errors.hpp"
#include "dpcount/generators.hpp"
#include "dpcount/query.hpp"
#include "gtest/gtest.h"
#include "oracles.hpp"

namespace dpcount {
namespace {

using ::dpcount::testing::up;

// A config with an explicit small threshold, for hand simulation.
KnownKConfig SmallConfig(double threshold, std::int64_t rounds, std::int64_t horizon) {
  KnownKConfig cfg = make_known_k_config({1.0, 0.0}, rounds, horizon, 0.1);
  cfg.threshold = threshold;
  return cfg;
}

// Inserts item t at step t.
Stream Staircase(std::size_t d) {
  std::vector<std::vector<Update>> batches;
  for (std::uint32_t i = 1; i <= d; ++i) batches.push_back({up(i, 1)});
  return Stream(d, d, Model::kLikes, batches);
}

std::vector<double> RunAll(Mechanism& mech, const Stream& x) {
  std::vector<double> out;
  for (std::size_t t = 1; t <= x.length(); ++t) out.push_back(mech.step(x.batch(t)).value);
  return out;
}

TEST(OutputMonitorTest, ZeroNoiseHandSimulation) {
  RandomSource src(0, NoiseMode::kZero);
  OutputMonitor monitor(SmallConfig(3.0, 3, 100), 0.0, src);
  EXPECT_EQ(monitor.output(), 0.0);
  for (double q : {0.0, 1.0, 2.0, 3.0}) EXPECT_FALSE(monitor.observe(q, src).refreshed);
  const MonitorStep s = monitor.observe(4.0, src);
  EXPECT_TRUE(s.refreshed);
  EXPECT_EQ(s.output, 4.0);
  EXPECT_EQ(monitor.rounds(), 2);
  EXPECT_EQ(monitor.yes_events(), 1);
}

TEST(OutputMonitorTest, FrozenModeNeverRefreshes) {
  RandomSource src(0, NoiseMode::kZero);
  OutputMonitor monitor(SmallConfig(1.0, 10, 100), 5.0, src, OutputMonitor::Mode::kFrozen);
  for (double q : {5.0, 9.0, 20.0, 40.0}) EXPECT_EQ(monitor.observe(q, src).output, 5.0);
  EXPECT_EQ(monitor.yes_events(), 3);
  EXPECT_EQ(monitor.rounds(), 4);
}

TEST(KnownKTest, ZeroNoiseOutputStaysPutBelowThreshold) {
  const double beta = 32.0 * std::exp(-4.0);
  const KnownKConfig cfg = derive_known_k_config({1.0, 0.0}, 72, 16, beta);
  ASSERT_NEAR(cfg.threshold, 256.0, 1e-9);
  KnownKMechanism<> mech(cfg, DistinctCountQuery(20), RandomSource(1, NoiseMode::kZero));
  const Stream x = random_stream(20, 16, Model::kLikes, false, 72, 5);
  for (double v : RunAll(mech, x)) EXPECT_EQ(v, 0.0);
  EXPECT_EQ(mech.stats().yes_events, 0);
}

TEST(KnownKTest, ZeroNoiseResetsToExactCount) {
  KnownKMechanism<> mech(SmallConfig(2.0, 5, 8), DistinctCountQuery(8),
                         RandomSource(1, NoiseMode::kZero));
  const std::vector<double> out = RunAll(mech, Staircase(8));
  // |out - Q| first exceeds 2 at Q = 3, then again at Q = 6.
  EXPECT_EQ(out, (std::vector<double>{0, 0, 3, 3, 3, 6, 6, 6}));
  EXPECT_EQ(mech.stats().yes_events, 2);
  EXPECT_EQ(mech.rounds(), 3);
}

TEST(KnownKTest, StopsWhenRoundsRunOut) {
  KnownKMechanism<> mech(SmallConfig(2.0, 1, 8), DistinctCountQuery(8),
                         RandomSource(1, NoiseMode::kZero));
  const Stream x = Staircase(8);
  EXPECT_EQ(mech.step(x.batch(1)).status, StepStatus::kOk);
  EXPECT_EQ(mech.step(x.batch(2)).status, StepStatus::kOk);
  const StepOutput third = mech.step(x.batch(3));
  EXPECT_EQ(third.status, StepStatus::kAbortedAfter);
  EXPECT_EQ(third.value, 0.0);
  const StepOutput fourth = mech.step(x.batch(4));
  EXPECT_EQ(fourth.status, StepStatus::kAborted);
  EXPECT_EQ(fourth.value, 0.0);
  EXPECT_EQ(mech.stats().aborts, 1);
}

TEST(KnownKTest, RejectsStepsBeyondHorizon) {
  KnownKMechanism<> mech(SmallConfig(100.0, 2, 2), DistinctCountQuery(2),
                         RandomSource(1, NoiseMode::kZero));
  mech.step({});
  mech.step({});
  EXPECT_THROW(mech.step({}), ParameterError);
}

TEST(KnownKTest, ZeroNoiseSoundnessOnRandomStreams) {
  for (const std::int64_t k : {16, 256, 4096}) {
    for (int trial = 0; trial < 20; ++trial) {
      const std::size_t d = 32, len = 8192;
      const Model model = trial % 2 ? Model::kGeneral : Model::kLikes;
      const Stream x = random_stream(d, len, model, trial % 3 == 0, k, 1000 * k + trial);
      ASSERT_LE(total_flippancy(x).total, k);
      const KnownKConfig cfg = derive_known_k_config({1.0, 0.0}, k, len, 0.05);
      KnownKMechanism<> mech(cfg, DistinctCountQuery(d), RandomSource(trial, NoiseMode::kZero));
      const auto truth = count_sequence(x);
      for (std::size_t t = 1; t <= len; ++t) {
        const StepOutput o = mech.step(x.batch(t));
        ASSERT_EQ(o.status, StepStatus::kOk) << "K=" << k << " t=" << t;
        ASSERT_LE(std::fabs(o.value - static_cast<double>(truth[t - 1])), cfg.threshold);
      }
    }
  }
}

TEST(KnownKTest, DrawCountBound) {
  for (int seed = 0; seed < 20; ++seed) {
    const std::size_t d = 16, len = 2000;
    const Stream x = random_stream(d, len, Model::kLikes, false, 400, seed);
    const KnownKConfig cfg = derive_known_k_config({1.0, 0.0}, 400, len, 0.05);
    KnownKMechanism<> mech(cfg, DistinctCountQuery(d), RandomSource(seed));
    RunAll(mech, x);
    const std::uint64_t rounds_used = static_cast<std::uint64_t>(mech.rounds());
    // tau and nu per round plus one mu per step.
    EXPECT_EQ(mech.noise().laplace_draws(), len + 2 * rounds_used);
    EXPECT_LE(mech.noise().laplace_draws(), len + 2 * cfg.max_rounds + 1);
  }
  RandomSource zero(0, NoiseMode::kZero);
  KnownKMechanism<> quiet(derive_known_k_config({1.0, 0.0}, 4, 50, 0.05), DistinctCountQuery(3),
                          zero);
  RunAll(quiet, Stream(3, 50, Model::kLikes));
  EXPECT_EQ(quiet.noise().laplace_draws(), 52u);
  EXPECT_EQ(quiet.noise().effective_draws(), 0u);
}

TEST(KnownKTest, OutputConstantBetweenPositiveAnswers) {
  // A ramp to 4000 distinct items forces several positive answers.
  const std::size_t d = 4000, len = 4000;
  const std::vector<std::size_t> blocks = {1};
  const Stream x = blocks_stream(d, d, blocks, len);
  const KnownKConfig cfg = derive_known_k_config({2.0, 0.0}, 4000, len, 0.1);
  KnownKMechanism<> mech(cfg, DistinctCountQuery(d), RandomSource(8));
  double prev = mech.pre_stream_output();
  std::int64_t yes = 0;
  int changes = 0;
  for (std::size_t t = 1; t <= len; ++t) {
    const double v = mech.step(x.batch(t)).value;
    const std::int64_t now = mech.stats().yes_events;
    if (now == yes) {
      ASSERT_EQ(v, prev) << "t=" << t;
    } else {
      ++changes;
    }
    yes = now;
    prev = v;
  }
  EXPECT_GT(changes, 0);
}

TEST(KnownKTest, StateIsLinearInDimension) {
  const KnownKConfig cfg = derive_known_k_config({1.0, 0.0}, 10, 10, 0.1);
  KnownKMechanism<> small(cfg, DistinctCountQuery(10), RandomSource(1));
  KnownKMechanism<> large(cfg, DistinctCountQuery(100000), RandomSource(1));
  const std::size_t overhead = small.state_words() - 10;
  EXPECT_EQ(large.state_words(), 100000 + overhead);
  EXPECT_LE(overhead, 512u);
}

TEST(GeneralizedQueryTest, DistinctOracleIsSamplePathIdentical) {
  const std::size_t d = 12, len = 500;
  const Stream x = random_stream(d, len, Model::kGeneral, false, 200, 21);
  const KnownKConfig cfg = derive_known_k_config({1.0, 0.0}, 200, len, 0.1);
  KnownKMechanism<> plain(cfg, DistinctCountQuery(d), RandomSource(3));
  KnownKMechanism<OracleQuery> oracle(
      cfg,
      OracleQuery(d, [](const CounterState& s) { return static_cast<double>(s.distinct_count()); }),
      RandomSource(3));
  EXPECT_EQ(plain.pre_stream_output(), oracle.pre_stream_output());
  for (std::size_t t = 1; t <= len; ++t) {
    ASSERT_EQ(plain.step(x.batch(t)).value, oracle.step(x.batch(t)).value);
  }
}

TEST(GeneralizedQueryTest, ConstantQuery) {
  const std::size_t len = 1000;
  const KnownKConfig cfg = derive_known_k_config({1.0, 0.0}, 5, len, 0.05);
  KnownKMechanism<ConstantQuery> mech(cfg, ConstantQuery(5.0), RandomSource(17));
  for (std::size_t t = 1; t <= len; ++t) {
    ASSERT_LE(std::fabs(mech.step({}).value - 5.0), cfg.alpha());
  }
  EXPECT_EQ(mech.stats().yes_events, 0);
}

// Brute-force high-degree count from the dense presence matrix.
double HighDegreeBrute(const std::vector<std::vector<std::int64_t>>& sums, std::size_t t,
                       std::size_t nodes, const std::vector<HighDegreeQuery::Edge>& edges,
                       std::size_t tau) {
  std::vector<std::size_t> deg(nodes, 0);
  for (std::size_t e = 0; e < edges.size(); ++e) {
    if (sums[t][e] > 0) ++deg[edges[e].u], ++deg[edges[e].v];
  }
  std::size_t high = 0;
  for (std::size_t v : deg) high += v >= tau;
  return static_cast<double>(high) / 2.0;
}

TEST(GeneralizedQueryTest, HighDegreeNodes) {
  const std::size_t nodes = 8;
  std::vector<HighDegreeQuery::Edge> edges;
  for (std::size_t u = 0; u < nodes; ++u) {
    for (std::size_t v = u + 1; v < nodes; ++v) edges.push_back({u, v});
  }
  const std::size_t len = 400;
  const Stream x = random_stream(edges.size(), len, Model::kLikes, false, 120, 4);
  const auto sums = testing::prefix_matrix(x);

  HighDegreeQuery q(nodes, edges, 3);
  double variation = 0.0, prev = 0.0;
  for (std::size_t t = 1; t <= len; ++t) {
    q.apply(x.batch(t));
    ASSERT_EQ(q.value(), HighDegreeBrute(sums, t, nodes, edges, 3)) << "t=" << t;
    variation += std::fabs(q.value() - prev);
    prev = q.value();
  }
  const std::int64_t k = total_flippancy(x).total;
  EXPECT_LE(variation, static_cast<double>(k));

  const KnownKConfig cfg = derive_known_k_config({1.0, 0.0}, k, len, 0.05);
  KnownKMechanism<HighDegreeQuery> mech(cfg, HighDegreeQuery(nodes, edges, 3),
                                        RandomSource(0, NoiseMode::kZero));
  for (std::size_t t = 1; t <= len; ++t) {
    const StepOutput o = mech.step(x.batch(t));
    ASSERT_EQ(o.status, StepStatus::kOk);
    ASSERT_LE(std::fabs(o.value - HighDegreeBrute(sums, t, nodes, edges, 3)), cfg.threshold);
  }
  KnownKMechanism<HighDegreeQuery> live(cfg, HighDegreeQuery(nodes, edges, 3), RandomSource(6));
  double worst = 0.0;
  for (std::size_t t = 1; t <= len; ++t) {
    worst = std::max(worst, std::fabs(live.step(x.batch(t)).value -
                                      HighDegreeBrute(sums, t, nodes, edges, 3)));
  }
  EXPECT_LT(worst, 3.0 * cfg.alpha());
}

}  // namespace
}  // namespace dpcount
