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

// Synthetic demand environments and the brute-force revenue oracle.

#ifndef PADP_ENV_HPP_
#define PADP_ENV_HPP_

#include "padp/features.hpp"

#include <cstdint>
#include <functional>
#include <random>
#include <string>
#include <variant>
#include <vector>

namespace padp {

using Rng = std::mt19937_64;

/// Lipschitz constant quoted for the beta = 2.5 experiment demand.
inline constexpr double kQuotedLStar = 2.66;

/// f(p) = 1 - (1/beta) * u^beta, u = (p - p_min) / (p_max - p_min).
struct HolderPoly {
  double beta = 2.5;
};

/// f(p) = 1 - 0.5 Phi((p - p_min) / 2) - 0.5 Phi((p - p_max) / 2).
struct SmoothNormalMix {};

/// f(p) = sum_k coeffs[k] * p^k, in raw price units.
struct Polynomial {
  std::vector<double> coeffs;
};

/// Piecewise-linear interpolation through (knots, values); knots increasing.
struct Tabulated {
  std::vector<double> knots;
  std::vector<double> values;
};

/// Arbitrary mean-demand function, e.g. a constructed test function.
struct CustomDemand {
  std::string name;
  std::function<double(double)> fn;
};

/// Mean demand f(p), optionally plus a linear context effect mu' x.
///
/// Construction validates f(p) + mu' x in [0, 1] on a 10^4-point price
/// grid for every x in the unit ball (worst case x = +-mu / |mu|).
class DemandModel {
 public:
  using Base =
      std::variant<HolderPoly, SmoothNormalMix, Polynomial, Tabulated,
                   CustomDemand>;

  DemandModel(Base base, double p_min, double p_max, Vector mu = Vector());

  static DemandModel holder_poly(double beta, double p_min, double p_max);
  static DemandModel smooth_normal_mix(double p_min, double p_max);
  static DemandModel polynomial(std::vector<double> coeffs, double p_min,
                                double p_max);

  /// Same base with a linear context effect of dimension mu.size().
  DemandModel with_context(Vector mu) const;

  const Base& base() const { return base_; }
  double p_min() const { return p_min_; }
  double p_max() const { return p_max_; }
  const Vector& mu() const { return mu_; }
  int context_dim() const { return static_cast<int>(mu_.size()); }
  bool contextual() const { return mu_.size() > 0; }
  std::string name() const;

  /// f(p) without range or context checks.
  double base_mean(double p) const;

 private:
  Base base_;
  double p_min_;
  double p_max_;
  Vector mu_;
};

/// Mean demand at p (and x when the model is contextual).
/// Throws DomainError for p off-range or a context mismatch.
double mean_demand(const DemandModel& model, double p,
                   const Vector* x = nullptr);

struct GaussianNoise {
  double sigma = 0.1;
};
struct UniformNoise {
  double half_width = 0.1;
};
/// Gaussian noise plus a deterministic price-dependent bias,
/// sup |bias| <= epsilon.
struct BiasedGaussianNoise {
  double sigma = 0.1;
  double epsilon = 0.0;
  std::string shape;  // "constant" or "cosine"
  std::function<double(double)> bias;
};

class NoiseModel {
 public:
  using Variant = std::variant<GaussianNoise, UniformNoise, BiasedGaussianNoise>;

  explicit NoiseModel(Variant v);

  static NoiseModel gaussian(double sigma);
  static NoiseModel uniform(double half_width);
  /// bias(p) = epsilon * cos(pi * (p - p_min) / (p_max - p_min)).
  static NoiseModel biased_cosine(double sigma, double epsilon, double p_min,
                                  double p_max);
  /// bias(p) = epsilon.
  static NoiseModel biased_constant(double sigma, double epsilon);
  /// Custom bias, validated against epsilon on a 10^4 grid over the range.
  static NoiseModel biased(double sigma, double epsilon,
                           std::function<double(double)> bias, double p_min,
                           double p_max);

  const Variant& variant() const { return v_; }
  double draw(double p, Rng& rng) const;
  /// Mean of the noise at p (zero unless biased).
  double bias(double p) const;
  std::string name() const;

 private:
  Variant v_;
};

/// mean_demand + one noise draw. Not clipped to [0, 1].
double sample_demand(const DemandModel& model, const NoiseModel& noise,
                     double p, const Vector* x, Rng& rng);

/// Context law for the linear-contextual environments.
class ContextSampler {
 public:
  enum class Law { kUniformBall, kUniformSphere, kFixedSet };

  static ContextSampler uniform_ball(int dim);
  static ContextSampler uniform_sphere(int dim);
  /// Cycles through `points` in order. Each must have norm <= 1.
  static ContextSampler fixed_set(std::vector<Vector> points);

  int dim() const { return dim_; }
  Law law() const { return law_; }
  Vector draw(Rng& rng);

 private:
  ContextSampler(Law law, int dim) : law_(law), dim_(dim) {}

  Law law_;
  int dim_;
  std::vector<Vector> points_;
  std::size_t cursor_ = 0;
};

struct OracleResult {
  double price = 0.0;
  double revenue = 0.0;
};

/// argmax_p p * mean_demand(p, x) by uniform grid plus golden refinement.
/// Requires resolution >= 1000.
OracleResult optimal_revenue(const DemandModel& model, const Vector* x,
                             int resolution);

/// Largest |f^(order)| over the price grid, by order-th finite differences.
double tight_lipschitz(const DemandModel& model, int order, int resolution);

/// Standard normal CDF.
double normal_cdf(double z);

/// splitmix64 finalizer; used to derive independent stream seeds.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream);

}  // namespace padp

#endif  // PADP_ENV_HPP_
