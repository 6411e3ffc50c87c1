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

// Experiment orchestration: specs, seeded replications, aggregation,
// slope fits and flat-file export.
//
// Replication r of an experiment uses seed base_seed + r for every policy
// and horizon, so policies are compared on common random numbers.

#ifndef PADP_HARNESS_HPP_
#define PADP_HARNESS_HPP_

#include "padp/baselines.hpp"
#include "padp/contextual.hpp"
#include "padp/env.hpp"
#include "padp/padp.hpp"
#include "padp/record.hpp"
#include "padp/smoothness.hpp"

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace padp {

/// Smoothness input handed to a policy: a fixed value or ln T.
struct BetaSpec {
  double value = 2.0;
  bool ln_t = false;

  double resolve(long horizon) const;
  std::string text() const;
};

struct DemandSpec {
  /// holder-poly, normal-mix, polynomial, tabulated or self-similar.
  std::string kind = "holder-poly";
  double p_min = 2.6;
  double p_max = 3.8;
  double beta = 2.5;  // holder-poly and self-similar
  int ell = 2;  // self-similar
  double amplitude = 10.0;  // self-similar
  std::vector<double> coeffs;  // polynomial
  std::vector<double> knots;  // tabulated
  std::vector<double> values;  // tabulated
  std::vector<double> mu;  // linear context effect; empty for none

  DemandModel build() const;
  /// Short name used in result rows.
  std::string label() const;
};

struct NoiseSpec {
  /// gaussian, uniform, biased-cosine or biased-constant.
  std::string kind = "gaussian";
  double sigma = 0.1;
  double half_width = 0.1;
  double epsilon = 0.0;

  NoiseModel build(double p_min, double p_max) const;
};

struct ContextSpec {
  /// uniform-ball or uniform-sphere.
  std::string law = "uniform-ball";
  int dim = 0;

  ContextSampler build() const;
};

enum class PolicyKind { kPadp, kPadpAnytime, kContextual, kAdaptive, kBinnedUcb };

struct PolicySpec {
  PolicyKind kind = PolicyKind::kPadp;
  double lipschitz = 0.0;  // binned-ucb only
  /// Overrides ExperimentSpec::beta for this policy.
  std::optional<BetaSpec> beta;
  std::optional<int> n_intervals;

  /// padp, padp-anytime, contextual, adaptive-pipeline or binned-ucb(L=<L>).
  std::string label() const;
};

struct ExperimentSpec {
  std::string name = "experiment";
  std::vector<PolicySpec> policies;
  DemandSpec demand;
  NoiseSpec noise;
  ContextSpec context;
  std::vector<long> horizons;
  int replications = 1;
  std::uint64_t base_seed = 1;

  // Policy inputs shared by every policy unless overridden.
  BetaSpec beta;
  double delta = 0.05;
  std::optional<int> n_intervals;
  int sup_resolution = 64;
  int oracle_resolution = 4096;
  double beta_max = 3.0;
  double init_eig_threshold = 1.0;

  /// Throws ValidationError naming the offending field.
  void validate() const;

  static ExperimentSpec from_json_text(const std::string& text);
  static ExperimentSpec from_file(const std::string& path);
  std::string to_json_text() const;
};

/// Names accepted by preset().
std::vector<std::string> preset_names();
/// Built-in experiment. Throws ValidationError for an unknown name.
ExperimentSpec preset(const std::string& name);

struct RunSummary {
  std::string policy;
  std::string demand;
  long horizon = 0;
  int rep = 0;
  std::uint64_t seed = 0;
  double cum_regret = 0.0;
  double simple_regret = 0.0;
  double wall_seconds = 0.0;  // excluded from determinism checks
  std::uint64_t digest = 0;
};

struct Aggregate {
  std::string policy;
  long horizon = 0;
  int runs = 0;
  double mean_simple = 0.0;
  double std_simple = 0.0;  // sample standard deviation
  double mean_cum = 0.0;
};

/// Callback for a finished run. Invoked under the harness lock.
using RunSink = std::function<void(const RunSummary&, const RunRecord&)>;
/// Builds a per-run observer for layered policies; called once per run.
using ObserverFactory =
    std::function<StepObserver(const PolicySpec&, long horizon, int rep)>;

struct RunOptions {
  /// Worker count; 0 reads PADP_JOBS, then the hardware concurrency.
  int jobs = 0;
  RunSink sink;
  ObserverFactory observers;
};

struct ExperimentResult {
  std::string name;
  /// Sorted by (policy order in the spec, T, rep).
  std::vector<RunSummary> runs;

  std::vector<Aggregate> aggregate() const;
  std::optional<Aggregate> find(const std::string& policy, long horizon) const;
};

/// Default worker count: PADP_JOBS if set and positive, else the
/// hardware concurrency (at least 1).
int default_jobs();

/// One episode of `policy` at horizon T, replication rep.
RunRecord run_single(const ExperimentSpec& spec, const PolicySpec& policy,
                     long horizon, int rep,
                     const StepObserver* observer = nullptr);

ExperimentResult run_experiment(const ExperimentSpec& spec,
                                const RunOptions& options = {});

struct SlopeFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r2 = 0.0;
};

/// Least squares of ln(y) on ln(x). Throws DomainError for fewer than
/// three distinct x values or non-positive entries.
SlopeFit fit_log_log(const std::vector<double>& x, const std::vector<double>& y);

/// ln(mean cumulative regret) against ln T for one policy.
SlopeFit fit_regret_slope(const std::vector<RunSummary>& runs,
                          const std::string& policy);

/// Header of the result CSV.
inline constexpr const char* kCsvHeader =
    "policy,demand,T,rep,seed,cum_regret,simple_regret";

/// Checks simple_regret == cum_regret / T for every row; throws
/// InvariantViolation otherwise.
void check_accounting(const std::vector<RunSummary>& runs);

void write_csv(std::ostream& out, const std::vector<RunSummary>& runs);
void write_jsonl(std::ostream& out, const std::vector<RunSummary>& runs);
/// Writes to `path` in "csv" or "jsonl" format. Throws IoError.
void export_results(const std::vector<RunSummary>& runs,
                    const std::string& format, const std::string& path);
/// Parses a CSV written by write_csv. Throws IoError / ValidationError.
std::vector<RunSummary> read_csv(std::istream& in);
std::vector<RunSummary> read_csv_file(const std::string& path);

/// One json-lines record per round of `record`.
void write_trace(std::ostream& out, const RunSummary& run,
                 const RunRecord& record);

}  // namespace padp

#endif  // PADP_HARNESS_HPP_
