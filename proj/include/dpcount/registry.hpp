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

// Name-based mechanism construction, as used by the command-line tool.

#ifndef DPCOUNT_REGISTRY_HPP_
#define DPCOUNT_REGISTRY_HPP_

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>

#include "dpcount/baselines.hpp"
#include "dpcount/config.hpp"
#include "dpcount/continual_counting.hpp"
#include "dpcount/errors.hpp"
#include "dpcount/known_k.hpp"
#include "dpcount/mechanism.hpp"
#include "dpcount/unknown_k.hpp"
#include "dpcount/unknown_k_all.hpp"

namespace dpcount {

enum class MechanismKind {
  kKnownK,
  kUnknownK,
  kUnknownKAll,
  kZero,
  kLaplaceT,
  kGaussianT,
  kContinualLikes,
};

inline constexpr MechanismKind kAllMechanismKinds[] = {
    MechanismKind::kKnownK,   MechanismKind::kUnknownK,  MechanismKind::kUnknownKAll,
    MechanismKind::kZero,     MechanismKind::kLaplaceT,  MechanismKind::kGaussianT,
    MechanismKind::kContinualLikes,
};

inline const char* mechanism_kind_name(MechanismKind k) {
  switch (k) {
    case MechanismKind::kKnownK: return "known-k";
    case MechanismKind::kUnknownK: return "unknown-k";
    case MechanismKind::kUnknownKAll: return "unknown-k-all";
    case MechanismKind::kZero: return "zero";
    case MechanismKind::kLaplaceT: return "laplace-T";
    case MechanismKind::kGaussianT: return "gaussian-T";
    case MechanismKind::kContinualLikes: return "continual-likes";
  }
  return "?";
}

inline MechanismKind parse_mechanism_kind(std::string_view name) {
  for (MechanismKind k : kAllMechanismKinds) {
    if (name == mechanism_kind_name(k)) return k;
  }
  throw ParameterError("unknown mechanism '" + std::string(name) + "'");
}

// Whether the mechanism rejects streams outside the likes model.
inline bool requires_likes_model(MechanismKind k) { return k == MechanismKind::kContinualLikes; }

struct MechanismSpec {
  MechanismKind kind = MechanismKind::kKnownK;
  PrivacyParams privacy;
  double beta = 0.05;
  std::optional<std::int64_t> flippancy_bound;  // required by known-k
  std::int64_t horizon = 1;
  std::size_t dimension = 1;
};

// Checks every precondition the chosen mechanism places on `spec`.
inline void check_mechanism_spec(const MechanismSpec& spec) {
  check_privacy_params(spec.privacy);
  internal::require_parameter(spec.horizon >= 1, "T must be >= 1");
  internal::require_parameter(spec.dimension >= 1, "d must be >= 1");
  internal::require_parameter(spec.beta > 0.0 && spec.beta < 1.0, "beta must lie in (0, 1)");
  switch (spec.kind) {
    case MechanismKind::kKnownK:
      internal::require_parameter(spec.flippancy_bound.has_value(), "known-k requires --K");
      internal::require_parameter(*spec.flippancy_bound >= 0, "K must be >= 0");
      break;
    case MechanismKind::kGaussianT:
      internal::require_parameter(spec.privacy.delta > 0.0, "gaussian-T requires --delta > 0");
      break;
    default:
      break;
  }
}

inline std::unique_ptr<Mechanism> make_mechanism(const MechanismSpec& spec, RandomSource src) {
  check_mechanism_spec(spec);
  const DistinctCountQuery query(spec.dimension);
  switch (spec.kind) {
    case MechanismKind::kKnownK:
      return std::make_unique<KnownKMechanism<>>(
          derive_known_k_config(spec.privacy, *spec.flippancy_bound, spec.horizon, spec.beta), query,
          std::move(src));
    case MechanismKind::kUnknownK:
      return std::make_unique<UnknownKMechanism<>>(spec.privacy, spec.beta, spec.horizon, query,
                                                   std::move(src));
    case MechanismKind::kUnknownKAll:
      return std::make_unique<UnknownKAllBoundsMechanism<>>(spec.privacy, spec.beta, spec.horizon,
                                                            spec.dimension, query, std::move(src));
    case MechanismKind::kZero:
      return std::make_unique<ZeroMechanism>(std::move(src));
    case MechanismKind::kLaplaceT:
      return std::make_unique<LaplaceBaseline<>>(spec.privacy, spec.horizon, query, std::move(src));
    case MechanismKind::kGaussianT:
      return std::make_unique<GaussianBaseline<>>(spec.privacy, spec.horizon, query,
                                                  std::move(src));
    case MechanismKind::kContinualLikes:
      return std::make_unique<ContinualCountingLikes>(spec.dimension, spec.horizon,
                                                      spec.privacy.epsilon, std::move(src));
  }
  throw ParameterError("unknown mechanism");
}

// Validates `spec` once and returns a factory for it.
inline MechanismFactory make_factory(const MechanismSpec& spec) {
  check_mechanism_spec(spec);
  return [spec](RandomSource src) { return make_mechanism(spec, std::move(src)); };
}

}  // namespace dpcount

#endif  // DPCOUNT_REGISTRY_HPP_
