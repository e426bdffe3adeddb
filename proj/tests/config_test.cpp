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

#include "dpcount/config.hpp"

#include <cmath>
#include <numbers>

#include "dpcount/errors.hpp"
#include "dpcount/unknown_k.hpp"
#include "dpcount/unknown_k_all.hpp"
#include "gtest/gtest.h"

namespace dpcount {
namespace {

constexpr double kPi2 = std::numbers::pi * std::numbers::pi;

TEST(KnownKConfigTest, HandEvaluatedPureExample) {
  // T = 16 and beta = 32 e^-4 give ln(2T/beta) = 4, so K eps / (18 * 4) = 1.
  const double beta = 32.0 * std::exp(-4.0);
  const KnownKConfig cfg = derive_known_k_config({1.0, 0.0}, 72, 16, beta);
  EXPECT_NEAR(cfg.log_term(), 4.0, 1e-12);
  EXPECT_EQ(cfg.max_rounds, 2);
  EXPECT_DOUBLE_EQ(cfg.round_epsilon, 0.25);
  EXPECT_NEAR(cfg.threshold, 256.0, 1e-9);
  EXPECT_NEAR(cfg.alpha(), 128.0, 1e-9);
  EXPECT_EQ(cfg.flippancy_bound, 72);
}

TEST(KnownKConfigTest, SingleFlipNeedsOneRound) {
  for (const double eps : {0.1, 1.0, 3.0}) {
    for (const std::int64_t horizon : {1, 100, 100000}) {
      const KnownKConfig cfg = derive_known_k_config({eps, 0.0}, 1, horizon, 0.05);
      EXPECT_EQ(cfg.max_rounds, 1);
      EXPECT_DOUBLE_EQ(cfg.round_epsilon, eps / 2.0);
    }
  }
}

TEST(KnownKConfigTest, ApproximateExample) {
  const double eps = 0.5, delta = 0.01, beta = 0.05;
  const std::int64_t k = 10000, horizon = 10000;
  const KnownKConfig cfg = derive_known_k_config({eps, delta}, k, horizon, beta);
  // (5000 / (36 sqrt(ln 100) ln(4e5)))^(2/3) = 2.93..., so S_K = 3 + 1.
  const double lt = std::log(2.0 * horizon / beta);
  const double base = k * eps / (36.0 * std::sqrt(std::log(1.0 / delta)) * lt);
  ASSERT_GT(std::pow(base, 2.0 / 3.0), 2.9);
  ASSERT_LT(std::pow(base, 2.0 / 3.0), 3.0);
  EXPECT_EQ(cfg.max_rounds, 4);
  const double eps1 = eps / (4.0 * std::sqrt(2.0 * 4 * std::log(1.0 / delta)));
  EXPECT_DOUBLE_EQ(cfg.round_epsilon, eps1);
  EXPECT_DOUBLE_EQ(cfg.threshold, 16.0 / eps1 * lt);
  EXPECT_GT(cfg.max_rounds * (9.0 / 8.0) * (cfg.threshold / 2.0), static_cast<double>(k));
}

TEST(KnownKConfigTest, NoEarlyAbortInequalityOnGrid) {
  for (const double eps : {0.05, 0.3, 1.0, 2.5}) {
    for (std::int64_t k = 1; k <= 1 << 20; k *= 3) {
      for (const std::int64_t horizon : {1, 64, 4096, 1 << 20}) {
        for (const double beta : {0.01, 0.2, 0.9}) {
          const KnownKConfig cfg = derive_known_k_config({eps, 0.0}, k, horizon, beta);
          ASSERT_GT(cfg.max_rounds * (9.0 / 8.0) * (cfg.threshold / 2.0), static_cast<double>(k))
              << "eps=" << eps << " K=" << k << " T=" << horizon << " beta=" << beta;
          const double root = std::sqrt(k * eps / (18.0 * cfg.log_term()));
          EXPECT_GT(static_cast<double>(cfg.max_rounds), root);
          EXPECT_LE(static_cast<double>(cfg.max_rounds), root + 1.0 + 1e-9);
        }
      }
    }
  }
}

TEST(KnownKConfigTest, ParameterErrors) {
  EXPECT_THROW(derive_known_k_config({1.0, 0.0}, 0, 10, 0.1), ParameterError);
  EXPECT_THROW(derive_known_k_config({1.0, 0.0}, 5, 0, 0.1), ParameterError);
  EXPECT_THROW(derive_known_k_config({1.0, 0.0}, 5, 10, 0.0), ParameterError);
  EXPECT_THROW(derive_known_k_config({1.0, 0.0}, 5, 10, 1.0), ParameterError);
  EXPECT_THROW(derive_known_k_config({0.0, 0.0}, 5, 10, 0.1), ParameterError);
  EXPECT_THROW(derive_known_k_config({1.0, 1.0}, 5, 10, 0.1), ParameterError);
  EXPECT_THROW(derive_known_k_config({1.0, 1e-6}, 5, 10, 0.1), ParameterError);
  EXPECT_NO_THROW(derive_known_k_config({0.9, 1e-6}, 5, 10, 0.1));
  EXPECT_THROW(make_known_k_config({1.0, 0.0}, 0, 10, 0.1), ParameterError);
}

TEST(InstanceScheduleTest, DoublingWeights) {
  const PrivacyParams pp{0.8, 1e-5};
  for (std::int64_t j = 1; j <= 6; ++j) {
    const InstanceSchedule s = instance_schedule(pp, 0.1, j, 6.0, 6.0, 6.0);
    EXPECT_EQ(s.flippancy_guess, std::int64_t{1} << j);
    EXPECT_DOUBLE_EQ(s.privacy.epsilon, 6.0 * 0.8 / (kPi2 * j * j));
    EXPECT_DOUBLE_EQ(s.privacy.delta, 6.0 * 1e-5 / (kPi2 * j * j));
    EXPECT_DOUBLE_EQ(s.beta, 6.0 * 0.1 / (kPi2 * j * j));
  }
  // The weights 6 / (pi^2 j^2) sum to 1.
  double total = 0.0;
  for (std::int64_t j = 1; j < 62; ++j) total += instance_schedule(pp, 0.1, j, 6, 6, 6).privacy.epsilon;
  EXPECT_NEAR(total, 0.8, 0.8 * 6.0 / (kPi2 * 61));
  EXPECT_THROW(instance_schedule(pp, 0.1, 0, 6, 6, 6), ParameterError);
}

TEST(InstanceScheduleTest, DoublingConfigUsesScheduledParameters) {
  const PrivacyParams pp{1.0, 0.0};
  const KnownKConfig cfg = doubling_instance_config(pp, 0.05, 1000, 3);
  const KnownKConfig expect =
      derive_known_k_config({6.0 / (kPi2 * 9)}, 8, 1000, 6.0 * 0.05 / (kPi2 * 9));
  EXPECT_EQ(cfg.max_rounds, expect.max_rounds);
  EXPECT_DOUBLE_EQ(cfg.threshold, expect.threshold);
  EXPECT_EQ(cfg.flippancy_bound, 8);
}

TEST(ErrorScaleTest, MonitorScale) {
  InstanceSchedule s;
  s.flippancy_guess = 16;
  s.privacy = {0.5, 0.0};
  s.beta = 0.01;
  // sqrt(16 ln(100 / 0.01) / 0.5)
  EXPECT_DOUBLE_EQ(monitor_error_scale(s, 100), std::sqrt(16.0 * std::log(1e4) / 0.5));
  s.privacy.delta = 1e-3;
  const double lt = std::log(1e4), ld = std::log(1e3);
  EXPECT_DOUBLE_EQ(monitor_error_scale(s, 100),
                   std::cbrt(16.0 * ld * lt * lt / 0.25) + std::sqrt(ld) * lt / 0.5);
}

TEST(ErrorScaleTest, BaselineScale) {
  EXPECT_DOUBLE_EQ(baseline_error_scale({2.0, 0.0}, 0.1, 50), 50.0 * std::log(500.0) / 2.0);
  EXPECT_DOUBLE_EQ(baseline_error_scale({0.5, 1e-4}, 0.1, 50),
                   std::sqrt(50.0 * std::log(1e4) * std::log(500.0)) / 0.5);
}

}  // namespace
}  // namespace dpcount
