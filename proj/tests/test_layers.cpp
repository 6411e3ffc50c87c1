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

#include "padp/env.hpp"
#include "padp/errors.hpp"
#include "padp/layers.hpp"
#include "padp/padp.hpp"

#include "doctest.h"

#include <algorithm>
#include <cmath>

using namespace padp;

namespace {

// Warm-starts a pricer with the standard initialization schedule.
LayeredPricer initialized(const LayeredConfig& cfg, const DemandModel& model,
                          const NoiseModel& noise, Rng& rng) {
  LayeredPricer pricer(cfg);
  for (const InitRound& ir : init_prices(cfg.grid, cfg.degree)) {
    pricer.observe_init(ir.price, Vector(), sample_demand(model, noise, ir.price, nullptr, rng));
  }
  return pricer;
}

}  // namespace

TEST_CASE("initialization leaves every layer invertible") {
  const PadpConfig c = PadpConfig::make(2.6, 3.8, 2.5, 10000);
  const DemandModel m = DemandModel::holder_poly(2.5, 2.6, 3.8);
  Rng rng(1);
  LayeredPricer p = initialized(c.layered(), m, NoiseModel::gaussian(0.1), rng);
  for (int s = 1; s <= c.n_layers; ++s) {
    CHECK(static_cast<long>(p.psi(s).size()) == c.init_rounds());
    for (int j = 1; j <= c.grid.size(); ++j) {
      CHECK(p.model(s, j).min_singular_value() > kSingularTolerance);
      CHECK(p.dataset(s, j).size() == static_cast<std::size_t>(c.smoothness.degree + 1));
    }
  }
  CHECK(p.visited().size() == static_cast<std::size_t>(c.grid.size()));
}

TEST_CASE("single interval starts in the else-branch at layer one") {
  const PadpConfig c = PadpConfig::make(2.6, 3.8, 2.5, 10000, 0.05, 1);
  const DemandModel m = DemandModel::holder_poly(2.5, 2.6, 3.8);
  Rng rng(2);
  LayeredPricer p = initialized(c.layered(), m, NoiseModel::gaussian(0.1), rng);
  const StepDecision d = p.decide();
  CHECK(d.branch == Branch::kExplore);
  CHECK(d.stopping_layer == 1);
  CHECK(d.interval == 1);
  CHECK(d.price >= 2.6);
  CHECK(d.price <= 3.8);
}

TEST_CASE("explore rounds join only the stopping layer") {
  const PadpConfig c = PadpConfig::make(2.6, 3.8, 2.5, 10000);
  const DemandModel m = DemandModel::holder_poly(2.5, 2.6, 3.8);
  const NoiseModel n = NoiseModel::gaussian(0.1);
  Rng rng(3);
  LayeredPricer p = initialized(c.layered(), m, n, rng);
  for (int k = 0; k < 200; ++k) {
    const StepDecision d = p.decide();
    p.observe(d, Vector(), sample_demand(m, n, d.price, nullptr, rng));
    const long t = p.rounds();
    for (int s = 1; s <= c.n_layers; ++s) {
      const bool in = std::binary_search(p.psi(s).begin(), p.psi(s).end(), t);
      CHECK(in == (d.branch == Branch::kExplore && d.stopping_layer == s));
    }
  }
}

TEST_CASE("zero-noise polynomial demand reaches step (a) at the optimum") {
  // Demand 1.6 - 0.4 p on [1.5, 2.5]; revenue peaks at p = 2 with value 1.6.
  // The step API is driven well past the nominal horizon T = 4000 so that
  // the last layer accumulates enough rounds for step (a).
  const DemandModel m = DemandModel::polynomial({1.6, -0.4}, 1.5, 2.5);
  const NoiseModel n = NoiseModel::gaussian(0.0);
  PadpConfig c = PadpConfig::make(1.5, 2.5, 2.0, 4000, 0.05, 2);
  Rng rng(4);
  LayeredPricer p = initialized(c.layered(), m, n, rng);
  int exploits = 0;
  double worst = 0.0;
  for (int k = 0; k < 60000; ++k) {
    const StepDecision d = p.decide();
    if (d.branch == Branch::kExploit) {
      ++exploits;
      worst = std::max(worst, 1.6 - d.price * mean_demand(m, d.price));
    }
    p.observe(d, Vector(), mean_demand(m, d.price));
  }
  CHECK(exploits > 0);
  CHECK(worst <= 1e-3);
}

TEST_CASE("elimination never drops the interval holding the optimum") {
  // Quadratic demand, zero noise: the local models are exact.
  const DemandModel m = DemandModel::polynomial({8.0 / 9.0, 2.0 / 9.0, -1.0 / 9.0}, 1.0, 4.0);
  const NoiseModel n = NoiseModel::gaussian(0.0);
  const OracleResult o = optimal_revenue(m, nullptr, 100000);
  PadpConfig c = PadpConfig::make(1.0, 4.0, 3.0, 1000, 0.05, 8);
  Rng rng(5);
  LayeredPricer p = initialized(c.layered(), m, n, rng);
  std::vector<int> holders;
  for (int j = 1; j <= c.grid.size(); ++j) {
    if (c.grid.contains(j, o.price)) holders.push_back(j);
  }
  REQUIRE(!holders.empty());
  int eliminations = 0;
  for (long t = p.rounds() + 1; t <= 20000; ++t) {
    const StepDecision d = p.decide();
    for (std::size_t s = 1; s < d.active_sets.size(); ++s) {
      const auto& a = d.active_sets[s];
      if (a.size() < d.active_sets[s - 1].size()) ++eliminations;
      const bool kept = std::any_of(holders.begin(), holders.end(), [&](int j) {
        return std::find(a.begin(), a.end(), j) != a.end();
      });
      CHECK(kept);
    }
    p.observe(d, Vector(), mean_demand(m, d.price));
  }
  CHECK(eliminations > 0);
}

TEST_CASE("walk rejects an exhausted layer budget") {
  LayeredConfig cfg;
  cfg.grid = PriceGrid(1.0, 2.0, 1);
  cfg.degree = 0;
  cfg.horizon = 4;
  cfg.n_layers = 1;
  cfg.gamma = 1.0;
  LayeredPricer p(cfg);
  CHECK_THROWS(p.decide());  // no interval has been visited yet
}
