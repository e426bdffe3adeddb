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

// Empirical privacy auditing. The probe estimates a lower-bound witness for
// epsilon from histograms of a projected output; a small estimate is a
// necessary condition for the privacy guarantee, never a proof of it.

#ifndef DPCOUNT_PROBE_HPP_
#define DPCOUNT_PROBE_HPP_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <span>
#include <vector>

#include "dpcount/errors.hpp"
#include "dpcount/harness.hpp"
#include "dpcount/mechanism.hpp"
#include "dpcount/noise.hpp"
#include "dpcount/stream.hpp"

namespace dpcount {

// Bins (-inf, e_0), [e_0, e_1), ..., [e_{n-1}, +inf) for sorted edges e.
struct Binning {
  std::vector<double> edges;

  std::size_t bins() const { return edges.size() + 1; }
  std::size_t locate(double v) const {
    return static_cast<std::size_t>(std::upper_bound(edges.begin(), edges.end(), v) -
                                    edges.begin());
  }
};

// Width-`width` bins centred on the integers lo, lo + width, ..., hi, with
// open tails on both sides.
inline Binning integer_bins(double lo, double hi, double width = 1.0) {
  internal::require_parameter(width > 0.0 && hi >= lo, "bad bin range");
  Binning b;
  for (double e = lo - width / 2.0; e <= hi + width / 2.0 + 1e-9; e += width) b.edges.push_back(e);
  return b;
}

using Projection = std::function<double(std::span<const double>)>;

inline Projection output_at(std::size_t step) {
  internal::require_parameter(step >= 1, "projection step is 1-based");
  return [step](std::span<const double> out) { return out[step - 1]; };
}

// Step of maximum |Q_x - Q_y| (earliest on ties; step 1 when identical).
inline std::size_t most_separated_step(const Stream& x, const Stream& y) {
  const std::vector<std::int64_t> qx = count_sequence(x);
  const std::vector<std::int64_t> qy = count_sequence(y);
  internal::require_parameter(qx.size() == qy.size(), "neighbors must have equal length");
  std::size_t best = 0;
  std::int64_t gap = -1;
  for (std::size_t k = 0; k < qx.size(); ++k) {
    const std::int64_t g = qx[k] > qy[k] ? qx[k] - qy[k] : qy[k] - qx[k];
    if (g > gap) gap = g, best = k;
  }
  return best + 1;
}

inline Projection default_projection(const Stream& x, const Stream& y) {
  return output_at(most_separated_step(x, y));
}

struct ProbeOptions {
  std::size_t samples = 1'000'000;
  std::uint64_t base_seed = 0;
  double delta = 0.0;
  double floor = 1e-4;
  unsigned jobs = 1;
};

struct ProbeResult {
  bool conclusive = false;
  double epsilon_hat = std::numeric_limits<double>::quiet_NaN();
  std::size_t witness_bin = 0;
  Binning binning;
  std::vector<std::uint64_t> counts_x;
  std::vector<std::uint64_t> counts_y;
};

// Sample s on x uses child seed 2s and on y child seed 2s + 1. Counts are
// smoothed by +1; bins where either raw mass is below `floor` are skipped.
inline ProbeResult privacy_probe(const MechanismFactory& factory, const Stream& x, const Stream& y,
                                 const Projection& projection, const Binning& binning,
                                 const ProbeOptions& opts) {
  internal::require_parameter(opts.samples >= 1, "need at least one sample");
  internal::require_parameter(x.length() == y.length() && x.dimension() == y.dimension(),
                              "neighbors must share d and T");
  internal::require_parameter(opts.delta >= 0.0 && opts.delta < 1.0, "delta must lie in [0, 1)");
  require_valid(x);
  require_valid(y);

  const std::size_t nb = binning.bins();
  const unsigned jobs = std::max(1u, opts.jobs);
  std::vector<std::vector<std::uint64_t>> part_x(jobs, std::vector<std::uint64_t>(nb, 0));
  std::vector<std::vector<std::uint64_t>> part_y(jobs, std::vector<std::uint64_t>(nb, 0));
  const RandomSource root(opts.base_seed);

  auto run_one = [&](const Stream& s, std::uint64_t index) {
    auto mech = factory(root.child(index));
    std::vector<double> out(s.length());
    for (std::size_t t = 1; t <= s.length(); ++t) out[t - 1] = mech->step(s.batch(t)).value;
    return binning.locate(projection(out));
  };
  const std::size_t chunk = (opts.samples + jobs - 1) / jobs;
  internal::parallel_for(jobs, jobs, [&](std::size_t w) {
    const std::size_t lo = w * chunk;
    const std::size_t hi = std::min(opts.samples, lo + chunk);
    for (std::size_t i = lo; i < hi; ++i) {
      ++part_x[w][run_one(x, 2 * i)];
      ++part_y[w][run_one(y, 2 * i + 1)];
    }
  });

  ProbeResult r;
  r.binning = binning;
  r.counts_x.assign(nb, 0);
  r.counts_y.assign(nb, 0);
  for (unsigned w = 0; w < jobs; ++w) {
    for (std::size_t b = 0; b < nb; ++b) {
      r.counts_x[b] += part_x[w][b];
      r.counts_y[b] += part_y[w][b];
    }
  }

  const double n = static_cast<double>(opts.samples);
  const double smooth_n = n + static_cast<double>(nb);
  double best = -std::numeric_limits<double>::infinity();
  for (std::size_t b = 0; b < nb; ++b) {
    const double mx = static_cast<double>(r.counts_x[b]) / n;
    const double my = static_cast<double>(r.counts_y[b]) / n;
    if (std::min(mx, my) < opts.floor) continue;
    const double px = (static_cast<double>(r.counts_x[b]) + 1.0) / smooth_n;
    const double py = (static_cast<double>(r.counts_y[b]) + 1.0) / smooth_n;
    double e = 0.0;
    if (px - opts.delta > 0.0) e = std::max(e, std::log((px - opts.delta) / py));
    if (py - opts.delta > 0.0) e = std::max(e, std::log((py - opts.delta) / px));
    r.conclusive = true;
    if (e > best) best = e, r.witness_bin = b;
  }
  if (r.conclusive) r.epsilon_hat = best;
  return r;
}

}  // namespace dpcount

#endif  // DPCOUNT_PROBE_HPP_
