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

// Local polynomial features, per-interval least squares and UCB widths.
//
// Every policy in the library reduces to the same numeric kernel: a price
// interval [a_{j-1}, a_j], a polynomial feature map anchored at a_j, an OLS
// fit over the samples that landed in the interval, and the confidence
// width sqrt(phi' Lambda^{-1} phi). Predictions and widths are invariant
// under any invertible linear change of feature basis, so the basis is
// picked for conditioning only.

#ifndef PADP_FEATURES_HPP_
#define PADP_FEATURES_HPP_

#include <Eigen/Dense>

#include <functional>
#include <optional>
#include <span>
#include <vector>

namespace padp {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Minimum singular value below which a Gram matrix counts as singular.
inline constexpr double kSingularTolerance = 1e-10;

/// Derivative order of a Hölder exponent: ceil(beta) - 1, so that
/// 0 < beta - degree <= 1. Throws DomainError for beta <= 1.
int holder_degree(double beta);

struct SmoothnessParams {
  double beta = 2.0;
  int degree = 1;
  std::optional<double> lipschitz;

  static SmoothnessParams from_beta(double beta,
                                    std::optional<double> lipschitz = {});
};

/// Uniform partition of [p_min, p_max] into N closed intervals.
/// Intervals are 1-based: interval j is [knot(j-1), knot(j)].
class PriceGrid {
 public:
  PriceGrid() = default;
  PriceGrid(double p_min, double p_max, int n_intervals);

  double p_min() const { return knots_.front(); }
  double p_max() const { return knots_.back(); }
  int size() const { return static_cast<int>(knots_.size()) - 1; }
  double width() const { return (p_max() - p_min()) / size(); }

  double knot(int j) const { return knots_[static_cast<std::size_t>(j)]; }
  double lower(int j) const { return knot(j - 1); }
  double upper(int j) const { return knot(j); }
  std::span<const double> knots() const { return knots_; }

  /// Closed-interval membership; a knot belongs to both neighbours.
  bool contains(int j, double p) const {
    return p >= lower(j) && p <= upper(j);
  }
  /// Smallest j whose closed interval holds p. Throws DomainError off-grid.
  int locate(double p) const;

 private:
  std::vector<double> knots_{0.0, 1.0};
};

enum class Basis {
  kMonomial,  // u^k with u = (p - anchor) / scale
  kLegendre,  // P_k(2u + 1): orthogonal on [anchor - scale, anchor]
};

/// phi_j(p) in normalized coordinates. With the monomial basis,
/// component k is ((p - anchor) / scale)^k.
struct PolyFeatureMap {
  double anchor = 0.0;
  int degree = 0;
  double scale = 1.0;
  Basis basis = Basis::kMonomial;

  int dim() const { return degree + 1; }
  void fill(double p, double* out) const;
  Vector operator()(double p) const;

  /// Map for interval j of `grid`, anchored at its right knot.
  static PolyFeatureMap for_interval(const PriceGrid& grid, int j, int degree,
                                     Basis basis = Basis::kLegendre);
};

Vector features(const PolyFeatureMap& map, double p);

struct Sample {
  double price = 0.0;
  Vector context;  // empty when the model is not contextual
  double demand = 0.0;
};

/// OLS state for one (interval, layer) dataset: samples, Gram matrix,
/// moment vector sum(phi * d) and, once fitted, the coefficients.
///
/// The feature vector is the polynomial map followed by the raw context
/// (context_dim may be zero). Samples are accumulated incrementally;
/// fit() solves the normal equations and caches a Cholesky factor for
/// width queries.
class LocalModel {
 public:
  LocalModel() = default;
  LocalModel(PolyFeatureMap map, int context_dim = 0, int interval = 0);

  const PolyFeatureMap& map() const { return map_; }
  int context_dim() const { return context_dim_; }
  int dim() const { return map_.dim() + context_dim_; }
  int interval() const { return interval_; }

  void add(double price, const Vector& context, double demand);
  void add(const Sample& s) { add(s.price, s.context, s.demand); }

  std::size_t size() const { return samples_.size(); }
  const std::vector<Sample>& samples() const { return samples_; }
  int distinct_prices() const;

  const Matrix& gram() const { return gram_; }
  const Vector& moment() const { return moment_; }
  /// Sum of outer products rebuilt from the stored samples.
  Matrix recompute_gram() const;

  /// Solves the normal equations. Throws SingularModelError when the
  /// Gram matrix has minimum singular value below kSingularTolerance.
  void fit();
  bool fitted() const { return fitted_; }
  const Vector& coeffs() const { return coeffs_; }
  double min_singular_value() const { return min_singular_value_; }
  /// max-norm of gram * coeffs - moment.
  double normal_residual() const;

  /// Extended feature vector (phi(p), x). `context` may be null only
  /// when context_dim is zero; a null context is read as x = 0.
  Vector feature(double p, const Vector* context = nullptr) const;
  void feature_into(double p, const Vector* context, Vector& out) const;

  double predict(const Vector& phi) const { return phi.dot(coeffs_); }
  /// sqrt(phi' Lambda^{-1} phi) via the cached factor.
  double width(const Vector& phi) const;

 private:
  PolyFeatureMap map_;
  int context_dim_ = 0;
  int interval_ = 0;
  std::vector<Sample> samples_;
  Matrix gram_;
  Vector moment_;
  Vector coeffs_;
  Eigen::LLT<Matrix> llt_;
  double min_singular_value_ = 0.0;
  bool fitted_ = false;
};

/// Builds and fits a model from a sample list.
LocalModel fit_ols(std::span<const Sample> samples, const PolyFeatureMap& map,
                   int context_dim = 0, int interval = 0);

/// sqrt(phi' Lambda^{-1} phi). Throws SingularModelError if the model
/// could not be fitted.
double ucb_width(const LocalModel& model, const Vector& phi);

enum class Objective {
  kUcb,    // p * (phi' theta + gamma * width)
  kWidth,  // p * gamma * width
  kValue,  // p * phi' theta
};

struct SupResult {
  double price = 0.0;
  double value = 0.0;
};

/// Maximizes f on [a, b]: uniform grid of `resolution` points including
/// both ends, then one golden-section pass on the bracket around the best
/// grid point. Never returns a value below the grid maximum.
SupResult maximize_on_interval(const std::function<double(double)>& f,
                               double a, double b, int resolution,
                               bool refine = true);

SupResult sup_price_objective(const LocalModel& model, double a, double b,
                              Objective objective, double gamma,
                              int resolution, const Vector* context = nullptr,
                              bool refine = true);

/// Both suprema the layered policies need, sharing one grid pass:
/// sup p * width (gamma-free) and sup p * U(p).
struct IntervalSups {
  SupResult width;
  SupResult ucb;
};

IntervalSups interval_sups(const LocalModel& model, double a, double b,
                           double gamma, int resolution,
                           const Vector* context = nullptr,
                           bool refine = true);

}  // namespace padp

#endif  // PADP_FEATURES_HPP_
