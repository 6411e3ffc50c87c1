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
#include "padp/padp.hpp"
#include "padp/smoothness.hpp"

#include "doctest.h"

#include <cmath>
#include <random>

using namespace padp;

TEST_CASE("estimation config") {
  const auto a = SmoothnessEstConfig::make(100000, 3.0, 2.6, 3.8);
  CHECK(a.degree == 2);
  CHECK(a.cells1 == 4);
  CHECK(a.cells2 == 2);
  CHECK(a.trial1 == 1334);
  CHECK(a.trial2 == 720);

  const auto b = SmoothnessEstConfig::make(100000, 4.0, 2.6, 3.8);
  CHECK(b.degree == 3);
  CHECK(b.cells1 == 2);
  CHECK(b.cells2 == 1);
  CHECK(b.trial1 == 1000);  // 10^3 exactly
  CHECK(b.trial2 == 600);

  const auto c = SmoothnessEstConfig::make(16000, 3.0, 2.6, 3.8);
  CHECK(c.cells1 == 2);
  CHECK(c.cells2 == 1);
  CHECK(c.trial1 == 425);
  CHECK(c.trial2 == 253);

  CHECK(a.cells1 >= a.cells2);
  CHECK_THROWS_AS(SmoothnessEstConfig::make(10, 3.0, 0.0, 1.0), DomainError);
  CHECK_THROWS_AS(SmoothnessEstConfig::make(100000, 1.0, 0.0, 1.0), DomainError);
}

TEST_CASE("beta from gap") {
  // D = 1/T gives 1 - ln ln T / ln T.
  const auto r = beta_from_gap(1e-5, 100000, 3.0);
  CHECK(std::abs(r.raw - 0.78776286139290359687) < 1e-13);
  CHECK(r.beta_hat > 1.0);
  CHECK(r.beta_hat < 1.0 + 1e-5);
  CHECK_FALSE(r.zero_gap);

  const auto tiny = beta_from_gap(1e-40, 100000, 3.0);
  CHECK(tiny.beta_hat == 3.0);

  const auto z = beta_from_gap(0.0, 100000, 3.0);
  CHECK(z.zero_gap);
  CHECK(z.beta_hat == 3.0);

  // Monotone: a smaller gap never lowers the estimate.
  double prev = 0.0;
  for (double g = 1.0; g > 1e-30; g *= 0.1) {
    const double b = beta_from_gap(g, 100000, 5.0).beta_hat;
    CHECK(b >= prev);
    prev = b;
  }
}

TEST_CASE("L2 projection") {
  // Polynomials of degree <= ell are fixed points.
  const auto cubic = [](double u) { return 1.0 - 2.0 * u + 0.5 * u * u * u; };
  const auto p = l2_poly_projection(cubic, 0.25, 0.75, 3, 64);
  for (double u = 0.25; u <= 0.75; u += 0.01) {
    CHECK(std::abs(p(u) - cubic(u)) < 1e-12);
  }

  // An odd function projects to an odd polynomial.
  const auto odd = [](double u) { return std::sin(3.0 * u); };
  const auto q = l2_poly_projection(odd, -1.0, 1.0, 3, 256);
  for (double u = 0.0; u <= 1.0; u += 0.125) {
    CHECK(std::abs(q(u) + q(-u)) < 1e-12);
  }

  // u^1.5 on [0, 1], degree 1: sup error of the exact projection.
  const auto kink = [](double u) { return std::pow(u, 1.5); };
  const auto k = l2_poly_projection(kink, 0.0, 1.0, 1, 4096);
  double sup = 0.0;
  for (int i = 0; i <= 100000; ++i) {
    const double u = i / 100000.0;
    sup = std::max(sup, std::abs(k(u) - kink(u)));
  }
  CHECK(std::abs(sup - 0.11428571429962221) < 1e-4);

  CHECK_THROWS_AS(l2_poly_projection(cubic, 0.0, 1.0, 3, 8), DomainError);
}

TEST_CASE("self-similar test function values") {
  const auto f = SelfSimilarTestFunction::make(1.5, 2);
  CHECK(std::abs(f.bump(0.3) - (0.027 - 0.135 + 0.15)) < 1e-15);
  CHECK(std::abs(f(0.3) - -0.0022091389993231735936) < 1e-13);
  CHECK(std::abs(f(0.7) - 0.0022091389993231735936) < 1e-13);
  CHECK(std::abs(f(0.123456) - 0.016167868756380340867) < 1e-13);
  CHECK(f(0.0) == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(f.m2 > 0.0);
  CHECK_THROWS_AS(SelfSimilarTestFunction::make(1.7, 2), DomainError);
  CHECK_THROWS_AS(SelfSimilarTestFunction::make(0.9, 2), DomainError);
}

TEST_CASE("self-similarity verification") {
  const auto f = SelfSimilarTestFunction::make(1.5, 2);
  const auto r = verify_self_similarity(f, 8, 64);
  CHECK(r.holds);
  REQUIRE(r.levels.size() == 8);
  for (const auto& l : r.levels) CHECK(l.ratio >= 1.0);

  // Doubling the quadrature barely moves the measured errors.
  const auto fine = verify_self_similarity(f, 6, 128);
  for (int c = 0; c < 6; ++c) {
    const double a = r.levels[static_cast<std::size_t>(c)].sup_error;
    const double b = fine.levels[static_cast<std::size_t>(c)].sup_error;
    CHECK(std::abs(a - b) / a < 0.01);
  }

  // A degree-ell polynomial is reproduced exactly, so it is not self-similar.
  SelfSimilarTestFunction flat = f;
  flat.terms = 0;
  CHECK_FALSE(verify_self_similarity(flat, 4, 64).holds);
}

TEST_CASE("self-similar demand stays in range") {
  const auto f = SelfSimilarTestFunction::make(1.5, 2);
  const auto d = self_similar_demand(f, 1.0, 2.0);
  for (double p = 1.0; p <= 2.0; p += 0.01) {
    const double v = mean_demand(d, p);
    CHECK(v >= 0.0);
    CHECK(v <= 1.0);
  }
  CHECK_THROWS_AS(self_similar_demand(f, 1.0, 2.0, 100.0), DomainError);
}

TEST_CASE("piecewise fit reproduces a piecewise polynomial") {
  // Cell-wise quadratics with a jump at 0.5, sampled without noise.
  auto truth = [](double p) { return p < 0.5 ? 0.2 + p * p : 0.9 - 0.3 * p; };
  Rng rng(7);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<Sample> s;
  for (int i = 0; i < 400; ++i) {
    const double p = u(rng);
    s.push_back({p, Vector(), truth(p)});
  }
  const auto fit = fit_piecewise(s, 0.0, 1.0, 2, 2, 0, 1);
  REQUIRE(fit.size() == 2);
  CHECK(fit.cell_of(0.0) == 0);
  CHECK(fit.cell_of(0.5) == 1);
  CHECK(fit.cell_of(1.0) == 1);
  CHECK(fit.edge(1) == doctest::Approx(0.5));
  for (double p = 0.0; p <= 1.0; p += 0.01) {
    CHECK(std::abs(fit.evaluate(p) - truth(p)) < 1e-10);
  }

  // The gap against a one-cell fit is the jump-driven misfit, and zero
  // against itself.
  CHECK(max_fit_gap(fit, fit, 0, 256) == 0.0);
  const auto coarse = fit_piecewise(s, 0.0, 1.0, 1, 2, 0, 2);
  CHECK(max_fit_gap(fit, coarse, 0, 256) > 0.01);

  // All samples in one cell leave the other one empty.
  std::vector<Sample> left;
  for (const auto& x : s) {
    if (x.price < 0.5) left.push_back(x);
  }
  CHECK_THROWS_AS(fit_piecewise(left, 0.0, 1.0, 2, 2, 0, 1),
                  InsufficientSampleError);
}

TEST_CASE("contextual piecewise fit recovers mu") {
  Vector mu(2);
  mu << 0.05, -0.04;
  Rng rng(3);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  auto ctx = ContextSampler::uniform_ball(2);
  std::vector<Sample> s;
  for (int i = 0; i < 300; ++i) {
    const double p = u(rng);
    const Vector x = ctx.draw(rng);
    s.push_back({p, x, 0.6 - 0.2 * p + mu.dot(x)});
  }
  const auto fit = fit_piecewise(s, 0.0, 1.0, 2, 1, 2, 1);
  for (int m = 0; m < 2; ++m) {
    CHECK((fit.mu(m) - mu).norm() < 1e-10);
  }
}

TEST_CASE("estimation accounting") {
  const auto model = DemandModel::holder_poly(2.5, 2.6, 3.8);
  const auto noise = NoiseModel::gaussian(0.1);
  const auto cfg = SmoothnessEstConfig::make(100000, 3.0, 2.6, 3.8);
  Rng rng(11);
  const auto e = estimate_beta(cfg, model, noise, nullptr, rng);
  CHECK(e.rounds_used == cfg.trial1 + cfg.trial2);
  REQUIRE(e.trace.horizon() == e.rounds_used);
  for (long i = 0; i < e.trace.horizon(); ++i) {
    const auto& r = e.trace.rounds[static_cast<std::size_t>(i)];
    CHECK(r.t == i + 1);
    CHECK(r.branch == Branch::kEstimate);
    CHECK(r.price >= 2.6);
    CHECK(r.price <= 3.8);
    CHECK(r.regret >= -1e-9);
  }
  CHECK(e.fit1.size() == cfg.cells1);
  CHECK(e.fit2.size() == cfg.cells2);
  CHECK(e.beta_hat > 1.0);
  CHECK(e.beta_hat <= 3.0);

  auto ctx = ContextSampler::uniform_ball(2);
  Rng r2(1);
  CHECK_THROWS_AS(estimate_beta(cfg, model, noise, &ctx, r2), DomainError);
}

TEST_CASE("adaptive pipeline plumbing") {
  const auto model = DemandModel::holder_poly(2.5, 2.6, 3.8);
  const auto noise = NoiseModel::gaussian(0.1);
  const long T = 20000;
  const auto a = adaptive_pipeline(T, 3.0, model, noise, 5);
  CHECK(a.trace.horizon() == T);
  CHECK(a.policy.horizon == T - a.estimate.rounds_used);
  CHECK(a.policy.grid.size() ==
        recommended_n(a.estimate.beta_hat, 2.6, 3.8, a.policy.horizon));

  // The policy part equals a plain run on the residual horizon with the
  // policy stream seed.
  Rng rng(mix_seed(5, kPolicyStream));
  EpisodeOptions eo;
  eo.t_offset = a.estimate.rounds_used;
  const RunRecord plain = run_episode(a.policy, model, noise, rng, eo);
  RunRecord tail;
  tail.rounds.assign(a.trace.rounds.begin() + a.estimate.rounds_used,
                     a.trace.rounds.end());
  CHECK(tail.digest() == plain.digest());
  CHECK(tail.rounds.front().t == a.estimate.rounds_used + 1);

  const auto again = adaptive_pipeline(T, 3.0, model, noise, 5);
  CHECK(again.trace.digest() == a.trace.digest());
}
