// Copyright 2026 The padp Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// padp: command-line front end for the pricing simulations.
//
// Exit codes: 0 success, 1 validation error, 2 runtime error.

#include "padp/errors.hpp"
#include "padp/harness.hpp"
#include "padp/smoothness.hpp"

#include "CLI11.hpp"
#include "json.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>

namespace {

void print_aggregates(const padp::ExperimentResult& result) {
  std::printf("%-24s %8s %5s %14s %14s\n", "policy", "T", "runs",
              "mean_simple", "std_simple");
  for (const padp::Aggregate& a : result.aggregate()) {
    std::printf("%-24s %8ld %5d %14.6g %14.6g\n", a.policy.c_str(), a.horizon,
                a.runs, a.mean_simple, a.std_simple);
  }
}

padp::ExperimentResult execute(const padp::ExperimentSpec& spec, int jobs,
                               const std::string& trace_path) {
  padp::RunOptions opt;
  opt.jobs = jobs;
  std::unique_ptr<std::ofstream> trace;
  if (!trace_path.empty()) {
    trace = std::make_unique<std::ofstream>(trace_path, std::ios::binary);
    if (!*trace) throw padp::IoError(trace_path, "cannot open for writing");
    opt.sink = [&trace](const padp::RunSummary& s, const padp::RunRecord& r) {
      padp::write_trace(*trace, s, r);
    };
  }
  padp::ExperimentResult result = padp::run_experiment(spec, opt);
  if (trace) {
    trace->flush();
    if (!*trace) throw padp::IoError(trace_path, "write failed");
  }
  return result;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Parameter-adaptive dynamic pricing simulator"};
  app.require_subcommand(1);

  std::string config_path, out_path, trace_path, format = "csv";
  int jobs = 0;
  int reps = 0;
  auto* run = app.add_subcommand("run", "Run an experiment file");
  run->add_option("--config", config_path, "Experiment JSON file")->required();
  run->add_option("--jobs", jobs, "Worker threads (default: PADP_JOBS or all cores)");
  run->add_option("--out", out_path, "Result file");
  run->add_option("--format", format, "csv or jsonl")->check(CLI::IsMember({"csv", "jsonl"}));
  run->add_option("--trace", trace_path, "Per-round json-lines trace");
  run->add_option("--reps", reps, "Override the replication count");

  std::string preset_name, out_dir;
  auto* sweep = app.add_subcommand("sweep", "Run a built-in preset");
  sweep->add_option("--preset", preset_name, "Preset name")->required();
  sweep->add_option("--out", out_dir, "Output directory")->required();
  sweep->add_option("--jobs", jobs, "Worker threads");
  sweep->add_option("--reps", reps, "Override the replication count");

  std::uint64_t seed = 1;
  long horizon = 0;
  auto* est = app.add_subcommand("estimate-beta", "Estimate the smoothness exponent");
  est->add_option("--config", config_path, "Experiment JSON file")->required();
  est->add_option("--seed", seed, "RNG seed");
  est->add_option("--horizon", horizon, "Horizon T (default: last horizon of the file)");

  std::string in_path, policy;
  auto* slope = app.add_subcommand("slope", "Fit ln(mean regret) against ln T");
  slope->add_option("--in", in_path, "Result CSV")->required();
  slope->add_option("--policy", policy, "Policy label")->required();

  std::string write_dir;
  auto* presets = app.add_subcommand("presets", "List presets or write them as JSON");
  presets->add_option("--write", write_dir, "Directory for <name>.json files");
  std::string show_name;
  presets->add_option("--show", show_name, "Print one preset as JSON");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (*run || *sweep) {
      padp::ExperimentSpec spec = *run ? padp::ExperimentSpec::from_file(config_path)
                                       : padp::preset(preset_name);
      if (reps > 0) spec.replications = reps;
      padp::ExperimentResult result = execute(spec, jobs, *run ? trace_path : "");
      print_aggregates(result);
      if (*run && !out_path.empty()) padp::export_results(result.runs, format, out_path);
      if (*sweep) {
        std::filesystem::create_directories(out_dir);
        const std::string base = (std::filesystem::path(out_dir) / spec.name).string();
        padp::export_results(result.runs, "csv", base + ".csv");
        std::ofstream f(base + ".json", std::ios::binary);
        if (!f) throw padp::IoError(base + ".json", "cannot open for writing");
        f << spec.to_json_text();
      }
    } else if (*est) {
      const padp::ExperimentSpec spec = padp::ExperimentSpec::from_file(config_path);
      const long t = horizon > 0 ? horizon : spec.horizons.back();
      const padp::DemandModel model = spec.demand.build();
      const padp::NoiseModel noise = spec.noise.build(model.p_min(), model.p_max());
      const padp::SmoothnessEstConfig cfg = padp::SmoothnessEstConfig::make(
          t, spec.beta_max, model.p_min(), model.p_max(), model.context_dim());
      std::optional<padp::ContextSampler> contexts;
      if (model.contextual()) contexts = spec.context.build();
      padp::Rng rng(seed);
      const padp::BetaEstimate b = padp::estimate_beta(
          cfg, model, noise, contexts ? &*contexts : nullptr, rng);
      nlohmann::ordered_json j;
      j["horizon"] = t;
      j["beta_max"] = spec.beta_max;
      j["degree"] = cfg.degree;
      j["cells"] = {cfg.cells1, cfg.cells2};
      j["trial_rounds"] = {cfg.trial1, cfg.trial2};
      j["gap"] = b.gap;
      j["raw_beta"] = b.zero_gap ? nlohmann::ordered_json(nullptr)
                                 : nlohmann::ordered_json(b.raw_beta);
      j["beta_hat"] = b.beta_hat;
      j["zero_gap"] = b.zero_gap;
      j["rounds_used"] = b.rounds_used;
      j["cum_regret"] = b.trace.cumulative_regret();
      std::cout << j.dump(2) << '\n';
    } else if (*slope) {
      const padp::SlopeFit f =
          padp::fit_regret_slope(padp::read_csv_file(in_path), policy);
      std::printf("slope %.6f\nintercept %.6f\nr2 %.6f\n", f.slope, f.intercept, f.r2);
    } else if (*presets && !show_name.empty()) {
      std::printf("%s", padp::preset(show_name).to_json_text().c_str());
    } else if (*presets) {
      for (const std::string& name : padp::preset_names()) {
        if (write_dir.empty()) {
          std::printf("%s\n", name.c_str());
          continue;
        }
        std::filesystem::create_directories(write_dir);
        const std::string path = (std::filesystem::path(write_dir) / (name + ".json")).string();
        std::ofstream f(path, std::ios::binary);
        if (!f) throw padp::IoError(path, "cannot open for writing");
        f << padp::preset(name).to_json_text();
      }
    }
  } catch (const padp::ValidationError& e) {
    std::fprintf(stderr, "validation error [%s]: %s\n", e.field().c_str(), e.what());
    return 1;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  return 0;
}
