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

#include "padp/features.hpp"

#include "padp/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace padp {

int holder_degree(double beta) {
  if (!(beta > 1.0) || !std::isfinite(beta)) {
    throw DomainError("holder_degree: beta must be a finite value > 1, got " +
                      std::to_string(beta));
  }
  return static_cast<int>(std::ceil(beta)) - 1;
}

SmoothnessParams SmoothnessParams::from_beta(double beta,
                                             std::optional<double> lipschitz) {
  if (lipschitz && *lipschitz < 0.0) {
    throw DomainError("SmoothnessParams: lipschitz constant must be >= 0");
  }
  return {beta, holder_degree(beta), lipschitz};
}

PriceGrid::PriceGrid(double p_min, double p_max, int n_intervals) {
  if (!(p_min < p_max)) {
    throw DomainError("PriceGrid: p_min must be below p_max");
  }
  if (n_intervals < 1) {
    throw DomainError("PriceGrid: need at least one interval");
  }
  knots_.resize(static_cast<std::size_t>(n_intervals) + 1);
  const double step = (p_max - p_min) / n_intervals;
  for (int j = 0; j <= n_intervals; ++j) knots_[j] = p_min + j * step;
  knots_.back() = p_max;
}

int PriceGrid::locate(double p) const {
  if (!(p >= p_min() && p <= p_max())) {
    throw DomainError("PriceGrid::locate: price " + std::to_string(p) +
                      " outside the grid");
  }
  auto it = std::lower_bound(knots_.begin() + 1, knots_.end(), p);
  return static_cast<int>(it - knots_.begin());
}

void PolyFeatureMap::fill(double p, double* out) const {
  const double u = (p - anchor) / scale;
  if (basis == Basis::kMonomial) {
    double power = 1.0;
    for (int k = 0; k <= degree; ++k) {
      out[k] = power;
      power *= u;
    }
    return;
  }
  const double x = 2.0 * u + 1.0;
  out[0] = 1.0;
  if (degree >= 1) out[1] = x;
  for (int k = 1; k < degree; ++k) {
    out[k + 1] = ((2.0 * k + 1.0) * x * out[k] - k * out[k - 1]) / (k + 1.0);
  }
}

Vector PolyFeatureMap::operator()(double p) const {
  Vector out(dim());
  fill(p, out.data());
  return out;
}

PolyFeatureMap PolyFeatureMap::for_interval(const PriceGrid& grid, int j,
                                            int degree, Basis basis) {
  return {grid.upper(j), degree, grid.upper(j) - grid.lower(j), basis};
}

Vector features(const PolyFeatureMap& map, double p) { return map(p); }

LocalModel::LocalModel(PolyFeatureMap map, int context_dim, int interval)
    : map_(map), context_dim_(context_dim), interval_(interval) {
  if (map.degree < 0) throw DomainError("LocalModel: negative degree");
  if (!(map.scale > 0.0)) throw DomainError("LocalModel: scale must be > 0");
  if (context_dim < 0) throw DomainError("LocalModel: negative context dim");
  gram_ = Matrix::Zero(dim(), dim());
  moment_ = Vector::Zero(dim());
}

void LocalModel::feature_into(double p, const Vector* context,
                              Vector& out) const {
  out.resize(dim());
  map_.fill(p, out.data());
  if (context_dim_ == 0) return;
  if (context == nullptr || context->size() == 0) {
    out.tail(context_dim_).setZero();
    return;
  }
  if (context->size() != context_dim_) {
    throw DomainError("LocalModel: context has dimension " +
                      std::to_string(context->size()) + ", expected " +
                      std::to_string(context_dim_));
  }
  out.tail(context_dim_) = *context;
}

Vector LocalModel::feature(double p, const Vector* context) const {
  Vector out;
  feature_into(p, context, out);
  return out;
}

void LocalModel::add(double price, const Vector& context, double demand) {
  if (context_dim_ > 0 && context.size() != context_dim_) {
    throw DomainError("LocalModel::add: context dimension mismatch");
  }
  Vector phi;
  feature_into(price, &context, phi);
  gram_.noalias() += phi * phi.transpose();
  moment_ += demand * phi;
  samples_.push_back({price, context_dim_ > 0 ? context : Vector(), demand});
  fitted_ = false;
}

int LocalModel::distinct_prices() const {
  std::vector<double> prices;
  prices.reserve(samples_.size());
  for (const auto& s : samples_) prices.push_back(s.price);
  std::sort(prices.begin(), prices.end());
  return static_cast<int>(std::unique(prices.begin(), prices.end()) -
                          prices.begin());
}

Matrix LocalModel::recompute_gram() const {
  Matrix g = Matrix::Zero(dim(), dim());
  for (const auto& s : samples_) {
    const Vector phi = feature(s.price, &s.context);
    g += phi * phi.transpose();
  }
  return g;
}

void LocalModel::fit() {
  Eigen::SelfAdjointEigenSolver<Matrix> eig(gram_, Eigen::EigenvaluesOnly);
  min_singular_value_ = eig.eigenvalues().cwiseAbs().minCoeff();
  if (!(min_singular_value_ >= kSingularTolerance)) {
    fitted_ = false;
    throw SingularModelError(interval_, min_singular_value_);
  }
  llt_.compute(gram_);
  if (llt_.info() != Eigen::Success) {
    fitted_ = false;
    throw SingularModelError(interval_, min_singular_value_);
  }
  coeffs_ = llt_.solve(moment_);
  fitted_ = true;
}

double LocalModel::normal_residual() const {
  return (gram_ * coeffs_ - moment_).cwiseAbs().maxCoeff();
}

double LocalModel::width(const Vector& phi) const {
  if (!fitted_) throw SingularModelError(interval_, min_singular_value_);
  Vector z = phi;
  llt_.matrixL().solveInPlace(z);
  return z.norm();
}

LocalModel fit_ols(std::span<const Sample> samples, const PolyFeatureMap& map,
                   int context_dim, int interval) {
  LocalModel model(map, context_dim, interval);
  for (const auto& s : samples) model.add(s);
  model.fit();
  return model;
}

double ucb_width(const LocalModel& model, const Vector& phi) {
  return model.width(phi);
}

namespace {

constexpr double kInvPhi = 0.6180339887498949;

// Golden-section maximization of f on [lo, hi]; returns the best point seen.
SupResult golden_max(const std::function<double(double)>& f, double lo,
                     double hi, SupResult best) {
  const double tol = 1e-12 * std::max(1.0, std::abs(hi) + std::abs(lo));
  double x1 = hi - kInvPhi * (hi - lo);
  double x2 = lo + kInvPhi * (hi - lo);
  double f1 = f(x1);
  double f2 = f(x2);
  for (int it = 0; it < 100 && hi - lo > tol; ++it) {
    if (f1 >= f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - kInvPhi * (hi - lo);
      f1 = f(x1);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + kInvPhi * (hi - lo);
      f2 = f(x2);
    }
  }
  if (f1 > best.value) best = {x1, f1};
  if (f2 > best.value) best = {x2, f2};
  return best;
}

void check_interval(double a, double b, int resolution) {
  if (!(a < b)) throw DomainError("sup: interval must satisfy a < b");
  if (resolution < 2) throw DomainError("sup: resolution must be >= 2");
}

double grid_point(double a, double b, int i, int n) {
  return i == n - 1 ? b : a + (b - a) * i / (n - 1);
}

}  // namespace

SupResult maximize_on_interval(const std::function<double(double)>& f,
                               double a, double b, int resolution,
                               bool refine) {
  check_interval(a, b, resolution);
  SupResult best{a, -std::numeric_limits<double>::infinity()};
  int best_i = 0;
  for (int i = 0; i < resolution; ++i) {
    const double p = grid_point(a, b, i, resolution);
    const double v = f(p);
    if (v > best.value) {
      best = {p, v};
      best_i = i;
    }
  }
  if (!refine) return best;
  const double lo = grid_point(a, b, std::max(best_i - 1, 0), resolution);
  const double hi =
      grid_point(a, b, std::min(best_i + 1, resolution - 1), resolution);
  return golden_max(f, lo, hi, best);
}

SupResult sup_price_objective(const LocalModel& model, double a, double b,
                              Objective objective, double gamma,
                              int resolution, const Vector* context,
                              bool refine) {
  Vector phi;
  auto f = [&](double p) {
    model.feature_into(p, context, phi);
    switch (objective) {
      case Objective::kUcb:
        return p * (model.predict(phi) + gamma * model.width(phi));
      case Objective::kWidth:
        return p * gamma * model.width(phi);
      case Objective::kValue:
        return p * model.predict(phi);
    }
    return 0.0;
  };
  return maximize_on_interval(f, a, b, resolution, refine);
}

IntervalSups interval_sups(const LocalModel& model, double a, double b,
                           double gamma, int resolution, const Vector* context,
                           bool refine) {
  check_interval(a, b, resolution);
  Vector phi;
  IntervalSups out{{a, -std::numeric_limits<double>::infinity()},
                   {a, -std::numeric_limits<double>::infinity()}};
  int wi = 0;
  int ui = 0;
  for (int i = 0; i < resolution; ++i) {
    const double p = grid_point(a, b, i, resolution);
    model.feature_into(p, context, phi);
    const double w = model.width(phi);
    const double w_val = p * w;
    const double u_val = p * (model.predict(phi) + gamma * w);
    if (w_val > out.width.value) {
      out.width = {p, w_val};
      wi = i;
    }
    if (u_val > out.ucb.value) {
      out.ucb = {p, u_val};
      ui = i;
    }
  }
  if (!refine) return out;
  auto bracket = [&](int i) {
    return std::pair{grid_point(a, b, std::max(i - 1, 0), resolution),
                     grid_point(a, b, std::min(i + 1, resolution - 1),
                                resolution)};
  };
  auto width_fn = [&](double p) {
    model.feature_into(p, context, phi);
    return p * model.width(phi);
  };
  auto ucb_fn = [&](double p) {
    model.feature_into(p, context, phi);
    return p * (model.predict(phi) + gamma * model.width(phi));
  };
  auto [wlo, whi] = bracket(wi);
  out.width = golden_max(width_fn, wlo, whi, out.width);
  auto [ulo, uhi] = bracket(ui);
  out.ucb = golden_max(ucb_fn, ulo, uhi, out.ucb);
  return out;
}

}  // namespace padp
