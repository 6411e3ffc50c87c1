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

// Pricing with a linear contextual effect: demand f(p) + mu' x.
//
// The local models use the extended feature (phi_j(p), x). Initialization
// keeps posting prices in each interval until its Gram matrix clears an
// eigenvalue threshold; the main rounds reuse the layered walk with every
// supremum taken at the observed context.

#ifndef PADP_CONTEXTUAL_HPP_
#define PADP_CONTEXTUAL_HPP_

#include "padp/env.hpp"
#include "padp/layers.hpp"
#include "padp/padp.hpp"
#include "padp/record.hpp"

#include <optional>
#include <vector>

namespace padp {

struct ContextualConfig {
  PadpConfig base;
  int context_dim = 1;
  double init_eig_threshold = 1.0;
  long init_round_cap = 1;

  static ContextualConfig make(double p_min, double p_max, double beta,
                               long horizon, int context_dim,
                               double delta = 0.05,
                               std::optional<int> n_intervals = {});

  /// Extended feature dimension degree + 1 + context_dim.
  int feature_dim() const {
    return base.smoothness.degree + 1 + context_dim;
  }
  LayeredConfig layered() const;
};

/// (phi(p), x). Throws DomainError when |x| > 1.
Vector extended_features(const PolyFeatureMap& map, double p, const Vector& x);

struct InitReport {
  long total_rounds = 0;
  std::vector<long> rounds_per_interval;
  std::vector<double> min_eigenvalues;
  bool cap_hit = false;
};

struct ContextualInit {
  InitReport report;
  LayeredPricer pricer;
  RunRecord trace;
};

/// Initialization phase. For each interval in turn, cycles the offset
/// midpoints under fresh contexts until lambda_min(Lambda^j) reaches the
/// threshold or the round cap is spent. Throws DegenerateContextError
/// when the cap leaves an interval singular.
ContextualInit init_until_invertible(const ContextualConfig& config,
                                     const DemandModel& model,
                                     const NoiseModel& noise,
                                     ContextSampler& contexts, Rng& rng);

/// One main round at context x.
StepDecision step_contextual(LayeredPricer& pricer, const Vector& x);

/// Context digest stored in traces: norm plus up to four components.
void write_context_digest(const Vector& x, RoundRecord& r);

/// Full episode; per-round regret is measured against
/// optimal_revenue(model, x_t).
RunRecord run_contextual_episode(const ContextualConfig& config,
                                 const DemandModel& model,
                                 const NoiseModel& noise,
                                 ContextSampler& contexts, Rng& rng,
                                 const EpisodeOptions& options = {});

}  // namespace padp

#endif  // PADP_CONTEXTUAL_HPP_
