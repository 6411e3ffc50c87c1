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

// Bin-UCB comparison policy that needs the Lipschitz constant L.
//
// The price range is cut into N equal bins, each represented by its
// midpoint. Bin j carries the index
//   rbar_j + p_max * gamma / sqrt(max(n_j, 1)) + L * p_max * (range / N)^beta
// where rbar_j is the mean observed revenue; unvisited bins rank first.

#ifndef PADP_BASELINES_HPP_
#define PADP_BASELINES_HPP_

#include "padp/env.hpp"
#include "padp/features.hpp"
#include "padp/padp.hpp"
#include "padp/record.hpp"

#include <optional>
#include <vector>

namespace padp {

enum class BinRule {
  kLipschitzScaled,  // N grows with L, see baseline_bins()
  kRecommended,      // N = recommended_n(beta, ...)
};

/// ceil((1 + L)^{2/(2b+1)} * range^{2b/(2b+1)} * T^{1/(2b+1)}).
int baseline_bins(double beta, double lipschitz, double p_min, double p_max,
                  long horizon);

struct BinnedUcbConfig {
  PriceGrid grid;
  double lipschitz = 1.0;
  double beta = 2.0;
  double gamma = 1.0;
  long horizon = 1;
  double delta = 0.05;
  int oracle_resolution = 4096;

  /// gamma = sqrt(ln(2 N T / delta) / 2). Throws DomainError for L <= 0.
  static BinnedUcbConfig make(double p_min, double p_max, double beta,
                              double lipschitz, long horizon,
                              double delta = 0.05,
                              std::optional<int> n_bins = {},
                              BinRule rule = BinRule::kLipschitzScaled);

  /// L * p_max * (range / N)^beta.
  double bias_bonus() const;
};

class BinnedUcb {
 public:
  explicit BinnedUcb(BinnedUcbConfig config);

  const BinnedUcbConfig& config() const { return config_; }
  /// +inf for an unvisited bin.
  double index(int j) const;
  /// Argmax of the index, lowest j on ties.
  int select() const;
  double price(int j) const;
  void observe(int j, double demand);

  long rounds() const { return rounds_; }
  long count(int j) const { return counts_[static_cast<std::size_t>(j - 1)]; }
  double mean_revenue(int j) const;

 private:
  BinnedUcbConfig config_;
  std::vector<long> counts_;
  std::vector<double> revenue_;
  long rounds_ = 0;
};

RunRecord run_binned_episode(const BinnedUcbConfig& config,
                             const DemandModel& model, const NoiseModel& noise,
                             Rng& rng, const EpisodeOptions& options = {});

}  // namespace padp

#endif  // PADP_BASELINES_HPP_
