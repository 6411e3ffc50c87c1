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

#include "padp/layers.hpp"

#include "padp/errors.hpp"

#include <cmath>
#include <string>

namespace padp {

LayeredPricer::LayeredPricer(LayeredConfig config)
    : config_(std::move(config)) {
  const int n = config_.grid.size();
  const int s_count = config_.n_layers;
  if (s_count < 1) throw DomainError("LayeredPricer: need at least one layer");
  if (config_.degree < 0) throw DomainError("LayeredPricer: negative degree");
  if (config_.horizon < 1) throw DomainError("LayeredPricer: horizon < 1");
  if (config_.sup_resolution < 2) {
    throw DomainError("LayeredPricer: sup resolution must be >= 2");
  }
  models_.reserve(static_cast<std::size_t>(n) * s_count);
  for (int s = 1; s <= s_count; ++s) {
    for (int j = 1; j <= n; ++j) {
      models_.push_back(
          {LocalModel(PolyFeatureMap::for_interval(config_.grid, j,
                                                   config_.degree,
                                                   config_.basis),
                      config_.context_dim, j),
           false, std::nullopt});
    }
  }
  psi_.resize(static_cast<std::size_t>(s_count));
  visited_.assign(static_cast<std::size_t>(n) + 1, 0);
}

void LayeredPricer::add_to_layer(int s, double price, const Vector& context,
                                 double demand) {
  const PriceGrid& grid = config_.grid;
  const int j = grid.locate(price);
  auto push = [&](int jj) {
    Cell& cell = models_[index(s, jj)];
    cell.model.add(price, context, demand);
    cell.sups.reset();
  };
  push(j);
  if (j < grid.size() && price == grid.upper(j)) push(j + 1);
}

void LayeredPricer::observe_init(double price, const Vector& context,
                                 double demand) {
  if (!(price >= config_.grid.p_min() && price <= config_.grid.p_max())) {
    throw InvariantViolation("init price outside the price range");
  }
  history_.push_back({price, context, demand, -1});
  const long t = rounds();
  for (int s = 1; s <= config_.n_layers; ++s) {
    psi_[s - 1].push_back(t);
    add_to_layer(s, price, context, demand);
  }
  const int j = config_.grid.locate(price);
  visited_[j] = 1;
  if (j < config_.grid.size() && price == config_.grid.upper(j)) {
    visited_[j + 1] = 1;
  }
}

std::vector<int> LayeredPricer::visited() const {
  std::vector<int> out;
  for (int j = 1; j <= config_.grid.size(); ++j) {
    if (visited_[j]) out.push_back(j);
  }
  return out;
}

const LocalModel& LayeredPricer::model(int s, int j) {
  Cell& cell = models_[index(s, j)];
  if (!cell.model.fitted()) cell.model.fit();
  return cell.model;
}

const IntervalSups& LayeredPricer::sups(int s, int j, const Vector* context,
                                        IntervalSups& scratch) {
  const LocalModel& m = model(s, j);
  const double a = config_.grid.lower(j);
  const double b = config_.grid.upper(j);
  if (config_.context_dim > 0) {
    scratch = interval_sups(m, a, b, config_.gamma, config_.sup_resolution,
                            context, config_.refine);
    return scratch;
  }
  Cell& cell = models_[index(s, j)];
  if (!cell.sups) {
    cell.sups = interval_sups(m, a, b, config_.gamma, config_.sup_resolution,
                              nullptr, config_.refine);
  }
  return *cell.sups;
}

StepDecision LayeredPricer::decide(const Vector* context) {
  const Vector* ctx = nullptr;
  if (config_.context_dim > 0) {
    if (context == nullptr || context->size() != config_.context_dim) {
      throw DomainError("LayeredPricer::decide: expected a context of dimension " +
                        std::to_string(config_.context_dim));
    }
    ctx = context;
  }
  const int n = config_.grid.size();
  const double p_max = config_.grid.p_max();
  const double exploit_bar = p_max / std::sqrt(static_cast<double>(config_.horizon));

  std::vector<int> active = visited();
  std::vector<IntervalSups> scratch(static_cast<std::size_t>(n) + 1);
  std::vector<const IntervalSups*> cur(static_cast<std::size_t>(n) + 1, nullptr);

  StepDecision d;
  auto finish = [&](Branch branch, int s, int j, double price) {
    d.branch = branch;
    d.stopping_layer = s;
    d.interval = j;
    d.price = price;
    const LocalModel& m = model(s, j);
    const Vector phi = m.feature(price, ctx);
    d.predicted_mean = m.predict(phi);
    d.width = m.width(phi);
    return d;
  };

  for (int s = 1;; ++s) {
    if (s > config_.n_layers) {
      throw InvariantViolation("layer walk went past S = " +
                               std::to_string(config_.n_layers));
    }
    if (active.empty()) throw InvariantViolation("empty active interval set");
    d.active_sets.push_back(active);

    const double layer_bar = p_max * std::ldexp(1.0, -s);
    bool all_exploit = true;
    bool all_layer = true;
    for (int j : active) {
      cur[j] = &sups(s, j, ctx, scratch[j]);
      const double w = cur[j]->width.value;
      if (w > exploit_bar) all_exploit = false;
      if (w > layer_bar) all_layer = false;
    }

    if (all_exploit) {
      std::vector<int> candidates = active;
      if (config_.exploit_over_all) {
        candidates.clear();
        for (int j = 1; j <= n; ++j) {
          if (!visited_[j]) continue;
          if (cur[j] == nullptr) cur[j] = &sups(s, j, ctx, scratch[j]);
          candidates.push_back(j);
        }
      }
      int best = candidates.front();
      for (int j : candidates) {
        if (cur[j]->ucb.value > cur[best]->ucb.value) best = j;
      }
      return finish(Branch::kExploit, s, best, cur[best]->ucb.price);
    }

    if (all_layer) {
      double top = -INFINITY;
      for (int j : active) top = std::max(top, cur[j]->ucb.value);
      const double keep_bar = top - p_max * std::ldexp(1.0, 1 - s);
      std::vector<int> kept;
      for (int j : active) {
        if (cur[j]->ucb.value >= keep_bar) kept.push_back(j);
      }
      active = std::move(kept);
      continue;
    }

    int chosen = 0;
    for (int j : active) {
      if (config_.gamma * cur[j]->width.value > layer_bar) {
        chosen = j;
        break;
      }
    }
    if (chosen == 0) {
      // Only reachable with gamma < 1.
      for (int j : active) {
        if (cur[j]->width.value > layer_bar) {
          chosen = j;
          break;
        }
      }
    }
    return finish(Branch::kExplore, s, chosen, cur[chosen]->width.price);
  }
}

void LayeredPricer::observe(const StepDecision& decision,
                            const Vector& context, double demand) {
  const double price = decision.price;
  if (!(price >= config_.grid.p_min() && price <= config_.grid.p_max())) {
    throw InvariantViolation("decision price outside the price range");
  }
  const int s = decision.stopping_layer;
  const int assignment = decision.branch == Branch::kExplore ? s : 0;
  history_.push_back({price, config_.context_dim > 0 ? context : Vector(),
                      demand, assignment});
  if (assignment > 0) {
    psi_[s - 1].push_back(rounds());
    add_to_layer(s, price, context, demand);
  }
  const int j = config_.grid.locate(price);
  visited_[j] = 1;
  if (j < config_.grid.size() && price == config_.grid.upper(j)) {
    visited_[j + 1] = 1;
  }
}

std::vector<Sample> LayeredPricer::dataset(int s, int j) const {
  std::vector<Sample> out;
  for (long t : psi_[s - 1]) {
    const Observation& o = history_[static_cast<std::size_t>(t - 1)];
    if (config_.grid.contains(j, o.price)) {
      out.push_back({o.price, o.context, o.demand});
    }
  }
  return out;
}

}  // namespace padp
