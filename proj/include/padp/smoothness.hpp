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

// Smoothness-parameter estimation under self-similarity.
//
// Two uniform-price trials are fitted with piecewise local polynomials on
// a fine and a coarse partition; the sup gap D between the two fits gives
//   beta_hat = -ln(D) / ln(T) - ln(ln T) / ln(T),
// clamped to (1, beta_max]. adaptive_pipeline() spends those rounds and
// then hands beta_hat to the non-contextual policy.

#ifndef PADP_SMOOTHNESS_HPP_
#define PADP_SMOOTHNESS_HPP_

#include "padp/env.hpp"
#include "padp/features.hpp"
#include "padp/padp.hpp"
#include "padp/record.hpp"

#include <cstdint>
#include <functional>
#include <vector>

namespace padp {

struct SmoothnessEstConfig {
  long horizon = 0;
  double beta_max = 2.0;
  double p_min = 0.0;
  double p_max = 1.0;
  int degree = 1;
  int context_dim = 0;
  double k1 = 0.0;
  double k2 = 0.0;
  int cells1 = 1;  // K_1, fine partition
  int cells2 = 1;  // K_2, coarse partition
  long trial1 = 0;  // T_1
  long trial2 = 0;  // T_2
  int eval_resolution = 512;
  int oracle_resolution = 4096;

  /// k_1 = 1/(2 b + 2), k_2 = 1/(4 b + 2), K_i = 2^floor(k_i log2 T),
  /// T_i = ceil(T^(1/2 + k_i)). Throws DomainError when T is too short for
  /// every cell to expect 2 * (degree + 1 + context_dim) samples.
  static SmoothnessEstConfig make(long horizon, double beta_max, double p_min,
                                  double p_max, int context_dim = 0);
};

/// Piecewise local-polynomial estimate on K equal cells of the price range.
class PiecewiseEstimate {
 public:
  PiecewiseEstimate() = default;
  PiecewiseEstimate(double p_min, double p_max, std::vector<LocalModel> cells);

  int size() const { return static_cast<int>(cells_.size()); }
  double edge(int m) const;
  /// 0-based cell holding p; cells are [e_m, e_{m+1}), the last one closed.
  int cell_of(double p) const;
  const LocalModel& cell(int m) const { return cells_[static_cast<std::size_t>(m)]; }
  /// f_hat(p) + mu_hat' x using the cell's own fit.
  double evaluate(double p, const Vector* x = nullptr) const;
  /// Context coefficients of cell m (empty without context).
  Vector mu(int m) const;

 private:
  double p_min_ = 0.0;
  double p_max_ = 1.0;
  std::vector<LocalModel> cells_;
};

/// Fits a piecewise estimate from samples. Throws InsufficientSampleError
/// for a cell with fewer than degree + 1 distinct prices.
PiecewiseEstimate fit_piecewise(const std::vector<Sample>& samples,
                                double p_min, double p_max, int cells,
                                int degree, int context_dim, int trial);

struct BetaFromGap {
  double beta_hat = 0.0;
  double raw = 0.0;
  bool zero_gap = false;
};

/// Applies the estimator formula and the clamp to [1 + 1e-6, beta_max].
BetaFromGap beta_from_gap(double gap, long horizon, double beta_max);

/// max over the evaluation design of |f2 + mu2' x - f1 - mu1' x|.
double max_fit_gap(const PiecewiseEstimate& fit1, const PiecewiseEstimate& fit2,
                   int context_dim, int resolution);

struct BetaEstimate {
  double beta_hat = 0.0;
  double raw_beta = 0.0;
  double gap = 0.0;
  bool zero_gap = false;
  PiecewiseEstimate fit1;
  PiecewiseEstimate fit2;
  long rounds_used = 0;
  RunRecord trace;  // the T_1 + T_2 uniform-price rounds
};

/// `contexts` must be non-null exactly when the model is contextual.
BetaEstimate estimate_beta(const SmoothnessEstConfig& config,
                           const DemandModel& model, const NoiseModel& noise,
                           ContextSampler* contexts, Rng& rng);

/// Polynomial on [lo, hi] in the monomial basis of z = (2x - lo - hi) / (hi - lo).
struct LocalPolynomial {
  double lo = 0.0;
  double hi = 1.0;
  Vector coeffs;

  double operator()(double x) const;
};

/// Discrete L2 projection onto degree-ell polynomials over [a, b] with a
/// `resolution`-point midpoint rule. Requires resolution >= 8 (ell + 1).
LocalPolynomial l2_poly_projection(const std::function<double(double)>& g,
                                   double a, double b, int ell,
                                   int resolution);

/// g(u) = sum_{m=1}^{terms} 2^{-m beta} w(frac(2^m u)) on [0, 1], where
/// w = B_{ell+1} - B_{ell+1}(0) is a Bernoulli-polynomial bump whose
/// periodic extension is C^{ell-1}.
struct SelfSimilarTestFunction {
  double beta = 1.5;
  int ell = 2;
  double m1 = 0.0;
  double m2 = 0.0;
  int terms = 40;

  /// Builds the function with M1 = 0 and the library's validated M2.
  static SelfSimilarTestFunction make(double beta, int ell);

  double bump(double v) const;
  double operator()(double u) const;
};

struct SelfSimilarityLevel {
  int c = 0;
  double sup_error = 0.0;
  double bound = 0.0;  // M2 * 2^{-c beta}
  double ratio = 0.0;
};

struct SelfSimilarityReport {
  std::vector<SelfSimilarityLevel> levels;
  /// True when ratio >= 1 at every checked level c > M1.
  bool holds = false;
};

/// Evaluates max_{V in V_c} sup_{x in V} |Gamma_ell^V g - g| for c = 1..c_max.
SelfSimilarityReport verify_self_similarity(const SelfSimilarTestFunction& fn,
                                            int c_max,
                                            int resolution_per_cell = 64);

/// Demand 0.5 + amplitude * g((p - p_min) / (p_max - p_min)).
DemandModel self_similar_demand(const SelfSimilarTestFunction& fn, double p_min,
                                double p_max, double amplitude = 10.0);

struct AdaptiveOptions {
  double delta = 0.05;
  int sup_resolution = 64;
  int oracle_resolution = 4096;
};

struct AdaptiveResult {
  BetaEstimate estimate;
  PadpConfig policy;
  RunRecord trace;  // estimation rounds followed by the policy rounds
};

/// Seed stream of the policy phase: mix_seed(seed, 1).
inline constexpr std::uint64_t kPolicyStream = 1;

/// Estimation with Rng(seed), then the non-contextual policy with
/// beta_hat, N = recommended_n(beta_hat, ..., T - T_1 - T_2) and
/// Rng(mix_seed(seed, kPolicyStream)) for the remaining rounds.
AdaptiveResult adaptive_pipeline(long horizon, double beta_max,
                                 const DemandModel& model,
                                 const NoiseModel& noise, std::uint64_t seed,
                                 const AdaptiveOptions& options = {});

}  // namespace padp

#endif  // PADP_SMOOTHNESS_HPP_
