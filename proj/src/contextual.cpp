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

#include "padp/contextual.hpp"

#include "padp/errors.hpp"

#include <algorithm>
#include <cmath>

namespace padp {

ContextualConfig ContextualConfig::make(double p_min, double p_max,
                                        double beta, long horizon,
                                        int context_dim, double delta,
                                        std::optional<int> n_intervals) {
  if (context_dim < 1) throw DomainError("ContextualConfig: context_dim < 1");
  ContextualConfig c;
  c.base = PadpConfig::make(p_min, p_max, beta, horizon, delta, n_intervals);
  c.context_dim = context_dim;
  c.init_round_cap = horizon;
  return c;
}

LayeredConfig ContextualConfig::layered() const {
  if (!(init_eig_threshold > 0.0)) {
    throw DomainError("ContextualConfig: init_eig_threshold must be > 0");
  }
  return base.layered(context_dim, /*exploit_over_all=*/true);
}

Vector extended_features(const PolyFeatureMap& map, double p, const Vector& x) {
  if (x.norm() > 1.0 + 1e-12) {
    throw DomainError("extended_features: context outside the unit ball");
  }
  Vector out(map.dim() + x.size());
  map.fill(p, out.data());
  out.tail(x.size()) = x;
  return out;
}

void write_context_digest(const Vector& x, RoundRecord& r) {
  r.context_norm = x.norm();
  r.context_len = static_cast<int>(std::min<Eigen::Index>(x.size(), 4));
  for (int i = 0; i < r.context_len; ++i) r.context_head[i] = x[i];
}

namespace {

double min_eigenvalue(const Matrix& gram) {
  Eigen::SelfAdjointEigenSolver<Matrix> eig(gram, Eigen::EigenvaluesOnly);
  return eig.eigenvalues().minCoeff();
}

RoundRecord context_round(long t, Branch branch, int layer, int interval,
                          double price, double demand, double regret,
                          const Vector& x) {
  RoundRecord r;
  r.t = t;
  r.branch = branch;
  r.layer = layer;
  r.interval = interval;
  r.price = price;
  r.demand = demand;
  r.regret = regret;
  write_context_digest(x, r);
  return r;
}

void check_setup(const ContextualConfig& config, const DemandModel& model,
                 const ContextSampler& contexts) {
  if (!model.contextual() || model.context_dim() != config.context_dim) {
    throw DomainError("contextual policy: model context dimension mismatch");
  }
  if (contexts.dim() != config.context_dim) {
    throw DomainError("contextual policy: sampler dimension mismatch");
  }
}

ContextualInit run_init(const ContextualConfig& config, const DemandModel& model,
                        const NoiseModel& noise, ContextSampler& contexts,
                        Rng& rng, long cap, long t_offset,
                        bool horizon_limited) {
  check_setup(config, model, contexts);
  ContextualInit out{{}, LayeredPricer(config.layered()), {}};
  const PriceGrid& grid = config.base.grid;
  const int degree = config.base.smoothness.degree;
  const int n = grid.size();
  out.report.rounds_per_interval.assign(static_cast<std::size_t>(n), 0);
  out.report.min_eigenvalues.assign(static_cast<std::size_t>(n), 0.0);

  for (int j = 1; j <= n; ++j) {
    long used = 0;
    double lambda = 0.0;
    while (lambda < config.init_eig_threshold && out.report.total_rounds < cap) {
      const Vector x = contexts.draw(rng);
      const int k = static_cast<int>(used % (degree + 1)) + 1;
      const double price = offset_midpoint(grid, j, degree, k);
      const double d = sample_demand(model, noise, price, &x, rng);
      out.pricer.observe_init(price, x, d);
      ++used;
      ++out.report.total_rounds;
      const double rev_star =
          optimal_revenue(model, &x, config.base.oracle_resolution).revenue;
      const double regret = rev_star - price * mean_demand(model, price, &x);
      out.trace.rounds.push_back(context_round(out.report.total_rounds + t_offset,
                                               Branch::kInit, 0, j, price, d,
                                               regret, x));
      lambda = min_eigenvalue(out.pricer.raw_model(1, j).gram());
    }
    out.report.rounds_per_interval[j - 1] = used;
    if (horizon_limited && out.report.total_rounds >= cap) {
      // The horizon ended inside initialization.
      out.report.min_eigenvalues[j - 1] = lambda;
      out.report.cap_hit = lambda < config.init_eig_threshold;
      break;
    }
    out.report.min_eigenvalues[j - 1] = lambda;
    if (lambda < config.init_eig_threshold) {
      out.report.cap_hit = true;
      if (lambda < kSingularTolerance) {
        throw DegenerateContextError(j, static_cast<int>(out.report.total_rounds));
      }
    }
  }
  return out;
}

}  // namespace

ContextualInit init_until_invertible(const ContextualConfig& config,
                                     const DemandModel& model,
                                     const NoiseModel& noise,
                                     ContextSampler& contexts, Rng& rng) {
  return run_init(config, model, noise, contexts, rng, config.init_round_cap, 0,
                  false);
}

StepDecision step_contextual(LayeredPricer& pricer, const Vector& x) {
  if (x.norm() > 1.0 + 1e-12) {
    throw DomainError("step_contextual: context outside the unit ball");
  }
  return pricer.decide(&x);
}

RunRecord run_contextual_episode(const ContextualConfig& config,
                                 const DemandModel& model,
                                 const NoiseModel& noise,
                                 ContextSampler& contexts, Rng& rng,
                                 const EpisodeOptions& options) {
  const long rounds = options.rounds.value_or(config.base.horizon);
  const long cap = std::min(config.init_round_cap, rounds);
  ContextualInit init =
      run_init(config, model, noise, contexts, rng, cap, options.t_offset,
               rounds < config.init_round_cap);
  RunRecord rec = std::move(init.trace);
  LayeredPricer& pricer = init.pricer;
  if (options.observer) {
    for (long t = 1; t <= pricer.rounds(); ++t) {
      (*options.observer)(pricer, nullptr, t);
    }
  }
  for (long t = pricer.rounds() + 1; t <= rounds; ++t) {
    const Vector x = contexts.draw(rng);
    const StepDecision dec = step_contextual(pricer, x);
    const double d = sample_demand(model, noise, dec.price, &x, rng);
    pricer.observe(dec, x, d);
    const double rev_star =
        optimal_revenue(model, &x, config.base.oracle_resolution).revenue;
    const double regret = rev_star - dec.price * mean_demand(model, dec.price, &x);
    rec.rounds.push_back(context_round(t + options.t_offset, dec.branch,
                                       dec.stopping_layer, dec.interval,
                                       dec.price, d, regret, x));
    if (options.observer) (*options.observer)(pricer, &dec, t);
  }
  return rec;
}

}  // namespace padp
