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

#include "padp/baselines.hpp"

#include "padp/errors.hpp"

#include <cmath>
#include <limits>

namespace padp {

int baseline_bins(double beta, double lipschitz, double p_min, double p_max,
                  long horizon) {
  if (!(beta > 0.0)) throw DomainError("baseline_bins: beta must be positive");
  if (!(lipschitz > 0.0)) throw DomainError("baseline_bins: L must be positive");
  if (horizon < 1) throw DomainError("baseline_bins: horizon must be >= 1");
  const double e = 2.0 * beta + 1.0;
  const double n = std::pow(1.0 + lipschitz, 2.0 / e) *
                   std::pow(p_max - p_min, 2.0 * beta / e) *
                   std::pow(static_cast<double>(horizon), 1.0 / e);
  return std::max(1, static_cast<int>(std::ceil(n)));
}

BinnedUcbConfig BinnedUcbConfig::make(double p_min, double p_max, double beta,
                                      double lipschitz, long horizon,
                                      double delta, std::optional<int> n_bins,
                                      BinRule rule) {
  if (!(lipschitz > 0.0)) throw DomainError("binned-ucb: L must be positive");
  if (!(delta > 0.0 && delta < 1.0)) throw DomainError("binned-ucb: delta must lie in (0, 1)");
  BinnedUcbConfig c;
  int n = 0;
  if (n_bins) {
    n = *n_bins;
  } else if (rule == BinRule::kRecommended) {
    n = recommended_n(beta, p_min, p_max, horizon);
  } else {
    n = baseline_bins(beta, lipschitz, p_min, p_max, horizon);
  }
  c.grid = PriceGrid(p_min, p_max, n);
  c.lipschitz = lipschitz;
  c.beta = beta;
  c.horizon = horizon;
  c.delta = delta;
  c.gamma = std::sqrt(0.5 * std::log(2.0 * n * static_cast<double>(horizon) / delta));
  return c;
}

double BinnedUcbConfig::bias_bonus() const {
  return lipschitz * grid.p_max() * std::pow(grid.width(), beta);
}

BinnedUcb::BinnedUcb(BinnedUcbConfig config)
    : config_(std::move(config)),
      counts_(static_cast<std::size_t>(config_.grid.size()), 0),
      revenue_(static_cast<std::size_t>(config_.grid.size()), 0.0) {}

double BinnedUcb::mean_revenue(int j) const {
  const long n = count(j);
  return n > 0 ? revenue_[static_cast<std::size_t>(j - 1)] / n : 0.0;
}

double BinnedUcb::index(int j) const {
  const long n = count(j);
  if (n == 0) return std::numeric_limits<double>::infinity();
  return mean_revenue(j) +
         config_.grid.p_max() * config_.gamma / std::sqrt(static_cast<double>(n)) +
         config_.bias_bonus();
}

int BinnedUcb::select() const {
  int best = 1;
  double best_v = index(1);
  for (int j = 2; j <= config_.grid.size(); ++j) {
    const double v = index(j);
    if (v > best_v) {
      best = j;
      best_v = v;
    }
  }
  return best;
}

double BinnedUcb::price(int j) const {
  return 0.5 * (config_.grid.lower(j) + config_.grid.upper(j));
}

void BinnedUcb::observe(int j, double demand) {
  counts_[static_cast<std::size_t>(j - 1)] += 1;
  revenue_[static_cast<std::size_t>(j - 1)] += price(j) * demand;
  ++rounds_;
}

RunRecord run_binned_episode(const BinnedUcbConfig& config,
                             const DemandModel& model, const NoiseModel& noise,
                             Rng& rng, const EpisodeOptions& options) {
  if (model.contextual()) throw DomainError("run_binned_episode: model is contextual");
  const long rounds = options.rounds.value_or(config.horizon);
  const double rev_star =
      optimal_revenue(model, nullptr, config.oracle_resolution).revenue;
  BinnedUcb policy(config);
  RunRecord rec;
  rec.rounds.reserve(static_cast<std::size_t>(std::max(rounds, 0L)));
  for (long t = 1; t <= rounds; ++t) {
    const int j = policy.select();
    const double p = policy.price(j);
    const double d = sample_demand(model, noise, p, nullptr, rng);
    policy.observe(j, d);
    RoundRecord r;
    r.t = t + options.t_offset;
    r.branch = Branch::kBinned;
    r.interval = j;
    r.price = p;
    r.demand = d;
    r.regret = rev_star - p * model.base_mean(p);
    rec.rounds.push_back(r);
  }
  return rec;
}

}  // namespace padp
