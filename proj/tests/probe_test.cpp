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

#include "dpcount/probe.hpp"

#include <cmath>
#include <cstdint>
#include <memory>
#include <vector>

#include "dpcount/baselines.hpp"
#include "dpcount/errors.hpp"
#include "dpcount/generators.hpp"
#include "dpcount/known_k.hpp"
#include "gtest/gtest.h"
#include "oracles.hpp"

namespace dpcount {
namespace {

using ::dpcount::testing::up;

MechanismFactory LaplaceFactory(double eps, std::int64_t horizon, std::size_t d) {
  return [=](RandomSource src) -> std::unique_ptr<Mechanism> {
    return std::make_unique<LaplaceBaseline<>>(PrivacyParams{eps, 0.0}, horizon,
                                               DistinctCountQuery(d), std::move(src));
  };
}

TEST(BinningTest, IntegerBinsWithOpenTails) {
  const Binning b = integer_bins(-1, 1);
  EXPECT_EQ(b.bins(), 5u);
  EXPECT_EQ(b.locate(-7.0), 0u);
  EXPECT_EQ(b.locate(-1.2), 1u);
  EXPECT_EQ(b.locate(0.0), 2u);
  EXPECT_EQ(b.locate(0.49), 2u);
  EXPECT_EQ(b.locate(0.5), 3u);
  EXPECT_EQ(b.locate(99.0), 4u);
}

TEST(ProjectionTest, MostSeparatedStep) {
  Stream x(2, 4, Model::kLikes, {{up(1, 1)}, {up(2, 1)}, {}, {up(2, -1)}});
  Stream y(2, 4, Model::kLikes, {{}, {up(2, 1)}, {}, {up(2, -1)}});
  EXPECT_EQ(most_separated_step(x, y), 1u);
  EXPECT_EQ(most_separated_step(x, x), 1u);
  const std::vector<double> out = {5, 6, 7, 8};
  EXPECT_EQ(default_projection(x, y)(out), 5.0);
  EXPECT_EQ(output_at(3)(out), 7.0);
}

TEST(ProbeTest, IdenticalStreamsGiveNearZero) {
  const Stream x(1, 1, Model::kLikes, {{up(1, 1)}});
  ProbeOptions opts;
  opts.samples = 200'000;
  const ProbeResult r =
      privacy_probe(LaplaceFactory(1.0, 1, 1), x, x, output_at(1), integer_bins(-1, 3), opts);
  ASSERT_TRUE(r.conclusive);
  EXPECT_LE(r.epsilon_hat, 0.1);
}

TEST(ProbeTest, LaplaceBaselineWitness) {
  const Stream x(1, 1, Model::kLikes, {{up(1, 1)}});
  const Stream y(1, 1, Model::kLikes);
  ProbeOptions opts;
  opts.samples = 200'000;
  opts.base_seed = 3;
  const ProbeResult r =
      privacy_probe(LaplaceFactory(1.0, 1, 1), x, y, output_at(1), integer_bins(-2, 3), opts);
  ASSERT_TRUE(r.conclusive);
  EXPECT_GE(r.epsilon_hat, 0.8);
  EXPECT_LE(r.epsilon_hat, 1.1);
}

TEST(ProbeTest, FloorSkipsSparseBinsAndReportsInconclusive) {
  const Stream x(1, 1, Model::kLikes, {{up(1, 1)}});
  ProbeOptions opts;
  opts.samples = 1000;
  opts.floor = 0.5;  // no single unit-width bin holds half the mass
  const ProbeResult r =
      privacy_probe(LaplaceFactory(1.0, 1, 1), x, x, output_at(1), integer_bins(-5, 5), opts);
  EXPECT_FALSE(r.conclusive);
  EXPECT_TRUE(std::isnan(r.epsilon_hat));
  std::uint64_t total = 0;
  for (auto c : r.counts_x) total += c;
  EXPECT_EQ(total, 1000u);
}

TEST(ProbeTest, DeltaAllowanceLowersEstimate) {
  const Stream x(1, 1, Model::kLikes, {{up(1, 1)}});
  const Stream y(1, 1, Model::kLikes);
  ProbeOptions opts;
  opts.samples = 50'000;
  const ProbeResult plain =
      privacy_probe(LaplaceFactory(1.0, 1, 1), x, y, output_at(1), integer_bins(-2, 3), opts);
  opts.delta = 0.05;
  const ProbeResult relaxed =
      privacy_probe(LaplaceFactory(1.0, 1, 1), x, y, output_at(1), integer_bins(-2, 3), opts);
  EXPECT_LT(relaxed.epsilon_hat, plain.epsilon_hat);
}

TEST(ProbeTest, JobsDoNotChangeCounts) {
  const Stream x(1, 1, Model::kLikes, {{up(1, 1)}});
  const Stream y(1, 1, Model::kLikes);
  ProbeOptions opts;
  opts.samples = 20'000;
  const ProbeResult a =
      privacy_probe(LaplaceFactory(1.0, 1, 1), x, y, output_at(1), integer_bins(-2, 3), opts);
  opts.jobs = 3;
  const ProbeResult b =
      privacy_probe(LaplaceFactory(1.0, 1, 1), x, y, output_at(1), integer_bins(-2, 3), opts);
  EXPECT_EQ(a.counts_x, b.counts_x);
  EXPECT_EQ(a.counts_y, b.counts_y);
  EXPECT_EQ(a.epsilon_hat, b.epsilon_hat);
}

TEST(ProbeTest, KnownKItemNeighbors) {
  const Stream x(2, 3, Model::kLikes, {{up(1, 1)}, {up(2, 1)}, {up(1, -1)}});
  const std::vector<std::int8_t> empty(3, 0);
  const Neighbor y = neighbor_item(x, ItemId{1}, empty);
  const KnownKConfig cfg = derive_known_k_config({0.5, 0.0}, 3, 3, 0.05);
  MechanismFactory factory = [cfg](RandomSource src) { return make_known_k(cfg, 2, std::move(src)); };
  ProbeOptions opts;
  opts.samples = 100'000;
  const ProbeResult r = privacy_probe(factory, x, y.stream, default_projection(x, y.stream),
                                      integer_bins(-8, 8, 2.0), opts);
  ASSERT_TRUE(r.conclusive);
  EXPECT_LE(r.epsilon_hat, 0.6);
}

}  // namespace
}  // namespace dpcount
