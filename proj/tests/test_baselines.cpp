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
#include "padp/env.hpp"
#include "padp/errors.hpp"

#include "doctest.h"

#include <cmath>
#include <limits>

using namespace padp;

TEST_CASE("bin count rule") {
  CHECK(baseline_bins(2.5, 1.0, 2.6, 3.8, 16000) == 8);
  CHECK(baseline_bins(2.5, 3.0, 2.6, 3.8, 16000) == 10);
  CHECK(baseline_bins(2.5, 5.0, 2.6, 3.8, 16000) == 11);
  CHECK(baseline_bins(2.5, 6.0, 2.6, 3.8, 16000) == 12);
  CHECK(baseline_bins(2.5, 9.0, 2.6, 3.8, 16000) == 13);
  for (double L : {1.0, 3.0, 5.0, 9.0}) {
    CHECK(baseline_bins(std::log(16000.0), L, 2.6, 3.8, 16000) == 3);
  }
  int prev = 0;
  for (double L = 0.5; L < 50.0; L *= 1.3) {
    const int n = baseline_bins(2.5, L, 2.6, 3.8, 16000);
    CHECK(n >= prev);
    prev = n;
  }
  CHECK_THROWS_AS(baseline_bins(2.5, 0.0, 2.6, 3.8, 100), DomainError);
}

TEST_CASE("config") {
  const auto c = BinnedUcbConfig::make(2.6, 3.8, 2.5, 3.0, 10000);
  CHECK(c.grid.size() == baseline_bins(2.5, 3.0, 2.6, 3.8, 10000));
  const double n = c.grid.size();
  CHECK(c.gamma == doctest::Approx(std::sqrt(0.5 * std::log(2.0 * n * 1e4 / 0.05))));
  CHECK(c.bias_bonus() ==
        doctest::Approx(3.0 * 3.8 * std::pow(1.2 / n, 2.5)));

  const auto r = BinnedUcbConfig::make(2.6, 3.8, 2.5, 3.0, 10000, 0.05, {},
                                       BinRule::kRecommended);
  CHECK(r.grid.size() == 6);
  const auto f = BinnedUcbConfig::make(2.6, 3.8, 2.5, 3.0, 10000, 0.05, 4);
  CHECK(f.grid.size() == 4);

  // The bias bonus grows with L at a fixed grid.
  const auto a = BinnedUcbConfig::make(2.6, 3.8, 2.5, 1.0, 10000, 0.05, 6);
  const auto b = BinnedUcbConfig::make(2.6, 3.8, 2.5, 9.0, 10000, 0.05, 6);
  CHECK(b.bias_bonus() > a.bias_bonus());

  CHECK_THROWS_AS(BinnedUcbConfig::make(2.6, 3.8, 2.5, -1.0, 100), DomainError);
  CHECK_THROWS_AS(BinnedUcbConfig::make(2.6, 3.8, 2.5, 1.0, 100, 1.5), DomainError);
}

TEST_CASE("every bin is tried once, in order") {
  const auto c = BinnedUcbConfig::make(0.0, 1.0, 2.0, 1.0, 1000, 0.05, 5);
  BinnedUcb u(c);
  for (int j = 1; j <= 5; ++j) {
    CHECK(u.index(j) == std::numeric_limits<double>::infinity());
  }
  for (int j = 1; j <= 5; ++j) {
    CHECK(u.select() == j);
    CHECK(u.price(j) == doctest::Approx((j - 0.5) / 5.0));
    u.observe(j, 0.5);
  }
  CHECK(u.rounds() == 5);
  for (int j = 1; j <= 5; ++j) {
    CHECK(u.count(j) == 1);
    CHECK(u.mean_revenue(j) == doctest::Approx(0.5 * u.price(j)));
    CHECK(std::isfinite(u.index(j)));
  }
  // Equal counts: the highest mean revenue wins.
  CHECK(u.select() == 5);
}

TEST_CASE("constant demand concentrates on the top bin") {
  const auto model = DemandModel::polynomial({0.5}, 1.0, 2.0);
  const auto noise = NoiseModel::gaussian(0.0);
  const auto c = BinnedUcbConfig::make(1.0, 2.0, 2.0, 1e-6, 20000, 0.05, 4);
  Rng rng(1);
  const auto rec = run_binned_episode(c, model, noise, rng);
  long top = 0;
  for (const auto& r : rec.rounds) top += r.interval == 4;
  CHECK(top > 15000);
}

TEST_CASE("one bin has linear regret") {
  const auto model = DemandModel::holder_poly(2.5, 2.6, 3.8);
  const auto noise = NoiseModel::gaussian(0.1);
  const auto c = BinnedUcbConfig::make(2.6, 3.8, 2.5, 1.0, 500, 0.05, 1);
  Rng rng(4);
  const auto rec = run_binned_episode(c, model, noise, rng);
  const double per_round =
      optimal_revenue(model, nullptr, 4096).revenue - 3.2 * mean_demand(model, 3.2);
  CHECK(per_round > 0.0);
  CHECK(rec.cumulative_regret() == doctest::Approx(500 * per_round).epsilon(1e-12));
}

TEST_CASE("episode records and determinism") {
  const auto model = DemandModel::smooth_normal_mix(2.6, 3.8);
  const auto noise = NoiseModel::gaussian(0.1);
  const auto c = BinnedUcbConfig::make(2.6, 3.8, 2.5, 3.0, 3000);
  Rng r1(9), r2(9);
  const auto a = run_binned_episode(c, model, noise, r1);
  const auto b = run_binned_episode(c, model, noise, r2);
  CHECK(a.digest() == b.digest());
  REQUIRE(a.horizon() == 3000);
  for (long t = 0; t < a.horizon(); ++t) {
    const auto& r = a.rounds[static_cast<std::size_t>(t)];
    CHECK(r.t == t + 1);
    CHECK(r.branch == Branch::kBinned);
    CHECK(r.price == doctest::Approx(c.grid.lower(r.interval) + 0.5 * c.grid.width()));
    CHECK(r.regret >= -1e-9);
  }

  EpisodeOptions eo;
  eo.rounds = 10;
  eo.t_offset = 100;
  Rng r3(9);
  const auto s = run_binned_episode(c, model, noise, r3, eo);
  REQUIRE(s.horizon() == 10);
  CHECK(s.rounds.front().t == 101);

  const auto ctx = model.with_context(Vector::Constant(1, 0.01));
  Rng r4(1);
  CHECK_THROWS_AS(run_binned_episode(c, ctx, noise, r4), DomainError);
}
