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

#include "padp/padp.hpp"

#include "padp/errors.hpp"

#include <cmath>

namespace padp {

int recommended_n(double beta, double p_min, double p_max, long horizon) {
  if (!(beta > 1.0)) throw DomainError("recommended_n: beta must be > 1");
  if (horizon < 1) throw DomainError("recommended_n: horizon must be >= 1");
  const double e = 2.0 * beta + 1.0;
  const double n = std::pow(p_max - p_min, 2.0 * beta / e) *
                   std::pow(static_cast<double>(horizon), 1.0 / e);
  return std::max(1, static_cast<int>(std::ceil(n)));
}

int layer_count(long horizon) {
  const double s = std::ceil(std::log2(std::sqrt(static_cast<double>(horizon))));
  return std::max(1, static_cast<int>(s));
}

double confidence_gamma(int n_intervals, int n_layers, long horizon,
                        double delta) {
  if (!(delta > 0.0 && delta < 1.0)) {
    throw DomainError("confidence_gamma: delta must lie in (0, 1)");
  }
  return std::sqrt(0.5 * std::log(2.0 * n_intervals * n_layers *
                                  static_cast<double>(horizon) / delta));
}

PadpConfig PadpConfig::make(double p_min, double p_max, double beta,
                            long horizon, double delta,
                            std::optional<int> n_intervals) {
  PadpConfig c;
  const int n = n_intervals.value_or(recommended_n(beta, p_min, p_max, horizon));
  c.grid = PriceGrid(p_min, p_max, n);
  c.smoothness = SmoothnessParams::from_beta(beta);
  c.horizon = horizon;
  c.delta = delta;
  c.n_layers = layer_count(horizon);
  c.gamma = confidence_gamma(n, c.n_layers, horizon, delta);
  return c;
}

LayeredConfig PadpConfig::layered(int context_dim,
                                  bool exploit_over_all) const {
  LayeredConfig l;
  l.grid = grid;
  l.degree = smoothness.degree;
  l.horizon = horizon;
  l.delta = delta;
  l.n_layers = n_layers;
  l.gamma = gamma;
  l.context_dim = context_dim;
  l.sup_resolution = sup_resolution;
  l.refine = refine;
  l.exploit_over_all = exploit_over_all;
  return l;
}

long PadpConfig::init_rounds() const {
  return static_cast<long>(grid.size()) * (1 + smoothness.degree);
}

double offset_midpoint(const PriceGrid& grid, int j, int degree, int k) {
  return grid.lower(j) + (k - 0.5) * (grid.upper(j) - grid.lower(j)) / (degree + 1);
}

std::vector<InitRound> init_prices(const PriceGrid& grid, int degree) {
  const int n = grid.size();
  const long total = static_cast<long>(n) * (degree + 1);
  std::vector<InitRound> out;
  out.reserve(static_cast<std::size_t>(total));
  for (long t = 1; t <= total; ++t) {
    const int j = static_cast<int>((t - 1) % n) + 1;
    const int k = static_cast<int>((t - 1) / n) + 1;
    out.push_back({t, j, offset_midpoint(grid, j, degree, k)});
  }
  return out;
}

namespace {

RoundRecord make_round(long t, Branch branch, int layer, int interval,
                       double price, double demand, double regret) {
  RoundRecord r;
  r.t = t;
  r.branch = branch;
  r.layer = layer;
  r.interval = interval;
  r.price = price;
  r.demand = demand;
  r.regret = regret;
  return r;
}

}  // namespace

RunRecord run_episode(const PadpConfig& config, const DemandModel& model,
                      const NoiseModel& noise, Rng& rng,
                      const EpisodeOptions& options) {
  if (model.contextual()) {
    throw DomainError("run_episode: model is contextual; use the contextual policy");
  }
  const long rounds = options.rounds.value_or(config.horizon);
  const double rev_star =
      optimal_revenue(model, nullptr, config.oracle_resolution).revenue;
  LayeredPricer pricer(config.layered());
  RunRecord rec;
  rec.rounds.reserve(static_cast<std::size_t>(std::max(rounds, 0L)));
  const Vector none;

  for (const InitRound& ir : init_prices(config.grid, config.smoothness.degree)) {
    if (ir.t > rounds) break;
    const double d = sample_demand(model, noise, ir.price, nullptr, rng);
    pricer.observe_init(ir.price, none, d);
    const double regret = rev_star - ir.price * model.base_mean(ir.price);
    rec.rounds.push_back(make_round(ir.t + options.t_offset, Branch::kInit, 0,
                                    ir.interval, ir.price, d, regret));
    if (options.observer) (*options.observer)(pricer, nullptr, ir.t);
  }
  for (long t = pricer.rounds() + 1; t <= rounds; ++t) {
    const StepDecision dec = pricer.decide();
    const double d = sample_demand(model, noise, dec.price, nullptr, rng);
    pricer.observe(dec, none, d);
    const double regret = rev_star - dec.price * model.base_mean(dec.price);
    rec.rounds.push_back(make_round(t + options.t_offset, dec.branch,
                                    dec.stopping_layer, dec.interval,
                                    dec.price, d, regret));
    if (options.observer) (*options.observer)(pricer, &dec, t);
  }
  return rec;
}

std::vector<long> doubling_epochs(long total) {
  if (total < 1) throw DomainError("doubling_epochs: total must be >= 1");
  std::vector<long> out;
  long used = 0;
  for (long len = 2; used < total; len *= 2) {
    out.push_back(std::min(len, total - used));
    used += out.back();
  }
  return out;
}

RunRecord run_anytime(const PadpConfig& config_template,
                      const DemandModel& model, const NoiseModel& noise,
                      Rng& rng, long total_rounds) {
  if (total_rounds < 2) throw DomainError("run_anytime: need at least 2 rounds");
  RunRecord out;
  long offset = 0;
  long nominal = 2;
  for (long len : doubling_epochs(total_rounds)) {
    PadpConfig c = PadpConfig::make(config_template.grid.p_min(),
                                    config_template.grid.p_max(),
                                    config_template.smoothness.beta, nominal,
                                    config_template.delta);
    c.sup_resolution = config_template.sup_resolution;
    c.refine = config_template.refine;
    c.oracle_resolution = config_template.oracle_resolution;
    EpisodeOptions opt;
    opt.rounds = len;
    opt.t_offset = offset;
    out.append(run_episode(c, model, noise, rng, opt));
    offset += len;
    nominal *= 2;
  }
  return out;
}

}  // namespace padp
