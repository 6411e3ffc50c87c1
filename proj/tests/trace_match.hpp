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

// Zero-context-effect alignment between the contextual and the plain
// layered policy, shared by the unit tests and acceptance.

#ifndef PADP_TESTS_TRACE_MATCH_HPP_
#define PADP_TESTS_TRACE_MATCH_HPP_

#include "padp/contextual.hpp"
#include "padp/env.hpp"
#include "padp/padp.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <cstdint>
#include <sstream>
#include <string>
#include <vector>

namespace padp::testing {

struct TraceMatch {
  long main_rounds = 0;
  long mismatches = 0;
  bool init_aligned = false;
  std::string first;  // description of the first mismatch
};

/// Contexts cycle through +-e_i, each held for degree + 1 rounds, so that
/// every interval sees each (price, context) pair once per cycle and the
/// price/context cross block of the Gram matrix is zero. Main rounds use
/// x = 0. The plain policy is warm-started with the same rounds. Prices
/// agree up to the golden-section resolution of the argmax, hence the
/// 1e-6 price tolerance.
inline TraceMatch zero_context_trace_match(int dim, long main_rounds,
                                           std::uint64_t seed) {
  const DemandModel base = DemandModel::holder_poly(2.5, 2.6, 3.8);
  const DemandModel m = base.with_context(Vector::Zero(dim));
  const NoiseModel noise = NoiseModel::gaussian(0.1);
  ContextualConfig c = ContextualConfig::make(2.6, 3.8, 2.5, 16000, dim);
  const int degree = c.base.smoothness.degree;
  const int cycle = 2 * dim * (degree + 1);

  std::vector<Vector> points;
  for (int i = 0; i < dim; ++i) {
    for (double sign : {1.0, -1.0}) {
      Vector e = Vector::Zero(dim);
      e[i] = sign;
      for (int k = 0; k <= degree; ++k) points.push_back(e);
    }
  }
  // lambda_min of one full cycle; lambda_min is monotone under rank-one
  // updates, so a threshold just below it forces exactly one cycle.
  const PriceGrid& grid = c.base.grid;
  const PolyFeatureMap map = PolyFeatureMap::for_interval(grid, 1, degree);
  Matrix gram = Matrix::Zero(degree + 1 + dim, degree + 1 + dim);
  for (int r = 0; r < cycle; ++r) {
    const double p = offset_midpoint(grid, 1, degree, r % (degree + 1) + 1);
    const Vector f = extended_features(map, p, points[static_cast<std::size_t>(r)]);
    gram += f * f.transpose();
  }
  Eigen::SelfAdjointEigenSolver<Matrix> eig(gram);
  c.init_eig_threshold = eig.eigenvalues().minCoeff() * (1.0 - 1e-9);

  ContextSampler s = ContextSampler::fixed_set(points);
  Rng rng(seed);
  ContextualInit init = init_until_invertible(c, m, noise, s, rng);
  TraceMatch out;
  out.init_aligned = true;
  for (long n : init.report.rounds_per_interval) out.init_aligned &= n == cycle;

  LayeredPricer plain(c.base.layered(0, /*exploit_over_all=*/true));
  for (const Observation& o : init.pricer.history()) {
    plain.observe_init(o.price, Vector(), o.demand);
  }
  const Vector zero = Vector::Zero(dim);
  for (long t = 0; t < main_rounds; ++t) {
    const StepDecision a = step_contextual(init.pricer, zero);
    const StepDecision b = plain.decide();
    if (a.branch != b.branch || a.stopping_layer != b.stopping_layer ||
        a.interval != b.interval || std::abs(a.price - b.price) > 1e-6) {
      if (out.mismatches == 0) {
        std::ostringstream os;
        os << "main round " << t << ": " << branch_name(a.branch) << " s=" << a.stopping_layer
           << " j=" << a.interval << " p=" << a.price << " vs " << branch_name(b.branch)
           << " s=" << b.stopping_layer << " j=" << b.interval << " p=" << b.price;
        out.first = os.str();
      }
      ++out.mismatches;
    }
    const double d = sample_demand(m, noise, a.price, &zero, rng);
    init.pricer.observe(a, zero, d);
    plain.observe(b, Vector(), d);
  }
  out.main_rounds = main_rounds;
  return out;
}

}  // namespace padp::testing

#endif  // PADP_TESTS_TRACE_MATCH_HPP_
