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

// Parameter-adaptive dynamic pricing without context.

#ifndef PADP_PADP_HPP_
#define PADP_PADP_HPP_

#include "padp/env.hpp"
#include "padp/layers.hpp"
#include "padp/record.hpp"

#include <functional>
#include <optional>
#include <vector>

namespace padp {

/// ceil((p_max - p_min)^{2b/(2b+1)} * T^{1/(2b+1)}).
int recommended_n(double beta, double p_min, double p_max, long horizon);

/// S = ceil(log2 sqrt(T)), floored at one layer.
int layer_count(long horizon);

/// gamma = sqrt(ln(2 N S T / delta) / 2).
double confidence_gamma(int n_intervals, int n_layers, long horizon,
                        double delta);

struct PadpConfig {
  PriceGrid grid;
  SmoothnessParams smoothness;
  long horizon = 1;
  double delta = 0.05;
  int n_layers = 1;
  double gamma = 1.0;
  int sup_resolution = 64;
  bool refine = true;
  int oracle_resolution = 4096;

  /// Fills S and gamma from the formulas; N defaults to recommended_n.
  static PadpConfig make(double p_min, double p_max, double beta,
                         long horizon, double delta = 0.05,
                         std::optional<int> n_intervals = {});

  LayeredConfig layered(int context_dim = 0,
                        bool exploit_over_all = false) const;
  /// Rounds spent on initialization: N * (1 + degree).
  long init_rounds() const;
};

struct InitRound {
  long t = 0;
  int interval = 0;
  double price = 0.0;
};

/// Initialization schedule: round t visits interval ((t - 1) mod N) + 1,
/// and the k-th visit to interval j posts a_{j-1} + (k - 1/2) * width / (degree + 1).
std::vector<InitRound> init_prices(const PriceGrid& grid, int degree);

/// k-th (1-based) offset midpoint of interval j.
double offset_midpoint(const PriceGrid& grid, int j, int degree, int k);

/// Called after every round with the policy state and, for main rounds,
/// the decision that was played (null for initialization rounds).
using StepObserver =
    std::function<void(const LayeredPricer&, const StepDecision*, long t)>;

struct EpisodeOptions {
  /// Rounds to play; defaults to the configured horizon.
  std::optional<long> rounds;
  /// Offset added to t in the emitted records.
  long t_offset = 0;
  const StepObserver* observer = nullptr;
};

/// Initialization plus main rounds against a non-contextual model.
/// Per-round regret is measured against optimal_revenue.
RunRecord run_episode(const PadpConfig& config, const DemandModel& model,
                      const NoiseModel& noise, Rng& rng,
                      const EpisodeOptions& options = {});

/// Epoch lengths 2, 4, 8, ... with the last one truncated to reach total.
std::vector<long> doubling_epochs(long total);

/// Doubling-trick runner: epoch n restarts the policy with T = 2^n and
/// N = recommended_n(beta, ..., 2^n). `config_template` supplies beta,
/// delta and resolutions.
RunRecord run_anytime(const PadpConfig& config_template,
                      const DemandModel& model, const NoiseModel& noise,
                      Rng& rng, long total_rounds);

}  // namespace padp

#endif  // PADP_PADP_HPP_
