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

// dpcount: generate streams, run mechanisms, and audit them.
//
// Exit codes: 0 success, 1 parameter error, 2 input or validation error.

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "dpcount/dpcount.hpp"

namespace dpcount {
namespace {

struct NoiseFlags {
  std::uint64_t seed = 0;
  std::string noise = "live";

  void add(CLI::App* cmd) {
    cmd->add_option("--seed", seed, "Base seed");
    cmd->add_option("--noise", noise, "Noise mode")->check(CLI::IsMember({"live", "zero"}));
  }
  NoiseMode mode() const { return noise == "zero" ? NoiseMode::kZero : NoiseMode::kLive; }
  RandomSource source() const { return RandomSource(seed, mode()); }
};

struct MechanismFlags {
  std::string mechanism = "known-k";
  double eps = 1.0;
  double delta = 0.0;
  double beta = 0.05;
  std::optional<std::int64_t> k;
  std::optional<std::int64_t> horizon;

  void add(CLI::App* cmd) {
    std::vector<std::string> names;
    for (MechanismKind kind : kAllMechanismKinds) names.emplace_back(mechanism_kind_name(kind));
    cmd->add_option("--mechanism", mechanism, "Mechanism")->check(CLI::IsMember(names));
    cmd->add_option("--eps", eps, "Privacy parameter epsilon");
    cmd->add_option("--delta", delta, "Privacy parameter delta");
    cmd->add_option("--beta", beta, "Failure probability");
    cmd->add_option("--K", k, "Flippancy bound (known-k)");
    cmd->add_option("--T", horizon, "Horizon; defaults to the stream length");
  }

  // Spec for `stream`, checked against the mechanism's model requirement.
  MechanismSpec spec(const Stream& stream) const {
    MechanismSpec s = spec(stream.dimension(), static_cast<std::int64_t>(stream.length()));
    internal::require_parameter(s.horizon >= static_cast<std::int64_t>(stream.length()),
                                "--T must be >= the stream length");
    if (requires_likes_model(s.kind) && stream.model() != Model::kLikes) {
      throw ValidationError(std::string(mechanism_kind_name(s.kind)) +
                            " requires a likes-model stream");
    }
    require_valid(stream);
    return s;
  }

  MechanismSpec spec(std::size_t d, std::int64_t default_horizon) const {
    MechanismSpec s;
    s.kind = parse_mechanism_kind(mechanism);
    s.privacy = {eps, delta};
    s.beta = beta;
    s.flippancy_bound = k;
    s.horizon = horizon.value_or(default_horizon);
    s.dimension = d;
    check_mechanism_spec(s);
    return s;
  }
};

void PrintKeyValue(const char* key, double v) {
  std::printf("%s=%s\n", key, format_number(v).c_str());
}

void Emit(const Stream& stream, const std::string& out) {
  const std::int64_t k = total_flippancy(stream).total;
  if (out.empty()) {
    write_dstream(std::cout, stream);
    std::cerr << "K=" << k << "\n";
  } else {
    save_dstream(out, stream);
    std::cout << "K=" << k << "\n";
  }
}

int Main(int argc, char** argv) {
  CLI::App app{"Private distinct counting over turnstile streams"};
  app.require_subcommand(1);

  // generate
  CLI::App* generate = app.add_subcommand("generate", "Write a .dstream file");
  generate->require_subcommand(1);
  std::string gen_out;
  std::size_t gen_d = 0, gen_m = 1, gen_length = 0;
  std::vector<std::size_t> gen_steps;
  std::int64_t gen_k = 0;
  std::uint64_t gen_seed = 0;
  std::string gen_model = "likes", gen_file, gen_variant = "singleton";
  bool gen_singleton = false;

  CLI::App* blocks = generate->add_subcommand("blocks", "Blocked singleton insert/delete waves");
  blocks->add_option("--m", gen_m, "Items per wave")->required();
  blocks->add_option("--J", gen_steps, "Chosen blocks (1-based, increasing)")
      ->delimiter(',')
      ->required();
  blocks->add_option("--Tprime", gen_length, "Stream length, divisible by m")->required();
  blocks->add_option("--d", gen_d, "Dimension; defaults to m");

  CLI::App* multi = generate->add_subcommand("multi", "Whole-wave insert/delete steps");
  multi->add_option("--m", gen_m, "Items per wave")->required();
  multi->add_option("--I", gen_steps, "Chosen steps (1-based, increasing)")
      ->delimiter(',')
      ->required();
  multi->add_option("--Tprime", gen_length, "Stream length")->required();
  multi->add_option("--d", gen_d, "Dimension; defaults to m");

  CLI::App* random = generate->add_subcommand("random", "Random stream with flippancy near K");
  random->add_option("--d", gen_d, "Dimension")->required();
  random->add_option("--T", gen_length, "Stream length")->required();
  random->add_option("--K", gen_k, "Target total flippancy")->required();
  random->add_option("--model", gen_model)->check(CLI::IsMember({"general", "likes"}));
  random->add_flag("--singleton", gen_singleton, "At most one update per step");
  random->add_option("--seed", gen_seed, "Seed");

  CLI::App* marginals = generate->add_subcommand("marginals", "Stream encoding a 0/1 table");
  marginals->add_option("--file", gen_file, "Marginals table file")->required();
  marginals->add_option("--variant", gen_variant)->check(CLI::IsMember({"singleton", "multi"}));

  for (CLI::App* sub : {blocks, multi, random, marginals}) {
    sub->add_option("--out", gen_out, "Output path; stdout when omitted");
  }

  // run
  CLI::App* run = app.add_subcommand("run", "Run one mechanism and write the result CSV");
  std::string in_path, out_path;
  NoiseFlags run_noise;
  MechanismFlags run_mech;
  run->add_option("--in", in_path, "Input .dstream")->required();
  run->add_option("--out", out_path, "Output CSV; stdout when omitted");
  run_noise.add(run);
  run_mech.add(run);

  // trials
  CLI::App* trials = app.add_subcommand("trials", "Repeat a mechanism over seeded trials");
  NoiseFlags trial_noise;
  MechanismFlags trial_mech;
  TrialOptions trial_opts;
  std::optional<double> trial_bound;
  trials->add_option("--in", in_path, "Input .dstream")->required();
  trials->add_option("--trials", trial_opts.trials, "Number of trials");
  trials->add_option("--jobs", trial_opts.jobs, "Worker threads");
  trials->add_option("--bound", trial_bound, "Error bound for the pass fraction");
  trial_noise.add(trials);
  trial_mech.add(trials);

  // bounds
  CLI::App* bounds = app.add_subcommand("bounds", "Print the theoretical error bounds");
  double b_eps = 1.0, b_delta = 0.0, b_beta = 0.05;
  std::int64_t b_k = 0, b_t = 0;
  std::size_t b_d = 0;
  bounds->add_option("--eps", b_eps);
  bounds->add_option("--delta", b_delta);
  bounds->add_option("--beta", b_beta);
  bounds->add_option("--K", b_k)->required();
  bounds->add_option("--T", b_t)->required();
  bounds->add_option("--d", b_d)->required();

  // probe
  CLI::App* probe = app.add_subcommand("probe", "Empirical privacy-loss witness on x and y");
  std::string y_path;
  NoiseFlags probe_noise;
  MechanismFlags probe_mech;
  ProbeOptions probe_opts;
  std::optional<std::size_t> probe_step;
  double lo = -10, hi = 10, width = 1;
  probe->add_option("--x", in_path, "First .dstream")->required();
  probe->add_option("--y", y_path, "Second .dstream; defaults to x");
  probe->add_option("--samples", probe_opts.samples, "Samples per side");
  probe->add_option("--floor", probe_opts.floor, "Minimum raw bin mass on both sides");
  probe->add_option("--jobs", probe_opts.jobs, "Worker threads");
  probe->add_option("--step", probe_step, "Output step to project on");
  probe->add_option("--lo", lo, "Lowest bin center");
  probe->add_option("--hi", hi, "Highest bin center");
  probe->add_option("--width", width, "Bin width");
  probe_noise.add(probe);
  probe_mech.add(probe);

  // bench
  CLI::App* bench = app.add_subcommand("bench", "Time a mechanism on a cyclic toggle stream");
  NoiseFlags bench_noise;
  MechanismFlags bench_mech;
  std::size_t bench_d = 10000, bench_length = 1000000;
  bench->add_option("--d", bench_d, "Dimension");
  bench->add_option("--length", bench_length, "Number of single-update steps");
  bench_noise.add(bench);
  bench_mech.add(bench);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }

  try {
    if (*generate) {
      if (*blocks) {
        Emit(blocks_stream(gen_d ? gen_d : gen_m, gen_m, gen_steps, gen_length), gen_out);
      } else if (*multi) {
        Emit(multiupdate_stream(gen_d ? gen_d : gen_m, gen_m, gen_steps, gen_length), gen_out);
      } else if (*random) {
        Emit(random_stream(gen_d, gen_length, gen_model == "likes" ? Model::kLikes : Model::kGeneral,
                           gen_singleton, gen_k, gen_seed),
             gen_out);
      } else {
        Emit(marginals_to_stream(load_marginals(gen_file), gen_variant == "multi"
                                                               ? MarginalsVariant::kMulti
                                                               : MarginalsVariant::kSingleton),
             gen_out);
      }
    } else if (*run) {
      const Stream x = load_dstream(in_path);
      const auto mech = make_mechanism(run_mech.spec(x), run_noise.source());
      const TrialReport r = evaluate(*mech, x);
      if (out_path.empty()) {
        write_result_csv(std::cout, r);
      } else {
        std::ofstream out(out_path);
        if (!out) throw InputError("cannot open " + out_path);
        write_result_csv(out, r);
      }
    } else if (*trials) {
      const Stream x = load_dstream(in_path);
      trial_opts.base_seed = trial_noise.seed;
      trial_opts.mode = trial_noise.mode();
      if (trial_bound) trial_opts.bound = *trial_bound;
      const TrialSummary s = run_trials(make_factory(trial_mech.spec(x)), x, trial_opts);
      double instances = 0;
      for (std::int64_t i : s.instance_counts) instances += static_cast<double>(i);
      PrintKeyValue("trials", static_cast<double>(trial_opts.trials));
      PrintKeyValue("median_max_error", s.median);
      PrintKeyValue("p90_max_error", s.p90);
      PrintKeyValue("worst_max_error", s.worst);
      PrintKeyValue("mean_instances", instances / static_cast<double>(trial_opts.trials));
      if (trial_bound) PrintKeyValue("pass_fraction", s.pass_fraction);
    } else if (*bounds) {
      const BoundSpec s = theoretical_bound({b_eps, b_delta}, b_beta, b_t, b_k, b_d);
      PrintKeyValue("dimension", s.dimension);
      PrintKeyValue("flippancy", s.flippancy);
      PrintKeyValue("sparse_vector", s.sparse_vector);
      PrintKeyValue("output_perturbation", s.output_perturbation);
      PrintKeyValue("minimum", s.minimum);
      std::printf("argmin=%s\n", bound_branch_name(s.argmin));
      PrintKeyValue("unknown_sparse_vector", s.unknown_sparse_vector);
      PrintKeyValue("unknown_output_perturbation", s.unknown_output_perturbation);
      PrintKeyValue("unknown_additive", s.unknown_additive);
      PrintKeyValue("unknown_minimum", s.unknown_minimum);
    } else if (*probe) {
      const Stream x = load_dstream(in_path);
      const Stream y = y_path.empty() ? x : load_dstream(y_path);
      internal::require_parameter(x.dimension() == y.dimension() && x.length() == y.length(),
                                  "x and y must share d and T");
      probe_opts.base_seed = probe_noise.seed;
      probe_opts.delta = probe_mech.delta;
      const MechanismSpec spec = probe_mech.spec(x);
      probe_mech.spec(y);
      // Probe sources are children of the base seed, so the mode is applied here.
      const MechanismFactory inner = make_factory(spec);
      const NoiseMode mode = probe_noise.mode();
      const MechanismFactory factory = [&](RandomSource src) {
        return inner(RandomSource(src.seed(), mode));
      };
      const std::size_t step = probe_step.value_or(most_separated_step(x, y));
      internal::require_parameter(step >= 1 && step <= x.length(), "--step out of range");
      const ProbeResult r =
          privacy_probe(factory, x, y, output_at(step), integer_bins(lo, hi, width), probe_opts);
      PrintKeyValue("step", static_cast<double>(step));
      PrintKeyValue("samples", static_cast<double>(probe_opts.samples));
      std::printf("conclusive=%s\n", r.conclusive ? "true" : "false");
      PrintKeyValue("epsilon_hat", r.epsilon_hat);
      if (r.conclusive) PrintKeyValue("witness_bin", static_cast<double>(r.witness_bin));
    } else if (*bench) {
      const Stream x = cyclic_toggle_stream(bench_d, bench_length);
      MechanismFlags flags = bench_mech;
      if (!flags.k) flags.k = static_cast<std::int64_t>(bench_length);
      const MechanismSpec spec = flags.spec(x);
      const auto mech = make_mechanism(spec, bench_noise.source());
      std::optional<std::uint64_t> limit;
      if (spec.kind == MechanismKind::kKnownK) {
        limit = known_k_draw_limit(
            derive_known_k_config(spec.privacy, *spec.flippancy_bound, spec.horizon, spec.beta),
            x.length());
      }
      const BenchResult r = throughput_bench(*mech, x, limit);
      std::printf("mechanism=%s\n", mech->name().c_str());
      PrintKeyValue("updates", static_cast<double>(r.updates));
      PrintKeyValue("seconds", r.seconds);
      PrintKeyValue("updates_per_second", r.updates_per_second);
      PrintKeyValue("draws", static_cast<double>(r.effective_draws));
      PrintKeyValue("sampler_calls", static_cast<double>(r.laplace_draws + r.gaussian_draws));
      if (limit) {
        PrintKeyValue("draw_limit", static_cast<double>(*limit));
        std::printf("within_limit=%s\n", r.within_limit ? "true" : "false");
      }
      PrintKeyValue("state_words", static_cast<double>(r.state_words));
    }
  } catch (const ParameterError& e) {
    std::cerr << "parameter error: " << e.what() << "\n";
    return 1;
  } catch (const InputError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return 2;
  } catch (const ValidationError& e) {
    std::cerr << "validation error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}

}  // namespace
}  // namespace dpcount

int main(int argc, char** argv) { return dpcount::Main(argc, argv); }
