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

// Umbrella header.

#ifndef DPCOUNT_DPCOUNT_HPP_
#define DPCOUNT_DPCOUNT_HPP_

#include "dpcount/adapter.hpp"
#include "dpcount/baselines.hpp"
#include "dpcount/bench.hpp"
#include "dpcount/bounds.hpp"
#include "dpcount/config.hpp"
#include "dpcount/continual_counting.hpp"
#include "dpcount/errors.hpp"
#include "dpcount/generators.hpp"
#include "dpcount/harness.hpp"
#include "dpcount/known_k.hpp"
#include "dpcount/mechanism.hpp"
#include "dpcount/noise.hpp"
#include "dpcount/probe.hpp"
#include "dpcount/query.hpp"
#include "dpcount/registry.hpp"
#include "dpcount/stream.hpp"
#include "dpcount/stream_io.hpp"
#include "dpcount/svt.hpp"
#include "dpcount/unknown_k.hpp"
#include "dpcount/unknown_k_all.hpp"

#endif  // DPCOUNT_DPCOUNT_HPP_
