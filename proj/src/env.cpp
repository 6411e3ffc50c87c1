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

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace padp {

namespace {

constexpr int kValidationPoints = 10000;
constexpr double kRangeSlack = 1e-12;

struct BaseEval {
  double p_min;
  double p_max;
  double p;

  double operator()(const HolderPoly& h) const {
    const double u = std::clamp((p - p_min) / (p_max - p_min), 0.0, 1.0);
    return 1.0 - std::pow(u, h.beta) / h.beta;
  }
  double operator()(const SmoothNormalMix&) const {
    return 1.0 - 0.5 * normal_cdf((p - p_min) / 2.0) -
           0.5 * normal_cdf((p - p_max) / 2.0);
  }
  double operator()(const Polynomial& poly) const {
    double acc = 0.0;
    for (auto it = poly.coeffs.rbegin(); it != poly.coeffs.rend(); ++it) {
      acc = acc * p + *it;
    }
    return acc;
  }
  double operator()(const Tabulated& tab) const {
    const auto& k = tab.knots;
    if (p <= k.front()) return tab.values.front();
    if (p >= k.back()) return tab.values.back();
    const auto hi = static_cast<std::size_t>(
        std::upper_bound(k.begin(), k.end(), p) - k.begin());
    const std::size_t lo = hi - 1;
    const double w = (p - k[lo]) / (k[hi] - k[lo]);
    return (1.0 - w) * tab.values[lo] + w * tab.values[hi];
  }
  double operator()(const CustomDemand& c) const { return c.fn(p); }
};

void validate_base(const DemandModel::Base& base) {
  if (const auto* h = std::get_if<HolderPoly>(&base)) {
    if (!(h->beta > 0.0)) throw DomainError("HolderPoly: beta must be > 0");
  } else if (const auto* poly = std::get_if<Polynomial>(&base)) {
    if (poly->coeffs.empty()) {
      throw DomainError("Polynomial: need at least one coefficient");
    }
  } else if (const auto* tab = std::get_if<Tabulated>(&base)) {
    if (tab->knots.size() < 2 || tab->knots.size() != tab->values.size()) {
      throw DomainError("Tabulated: need >= 2 knots and matching values");
    }
    for (std::size_t i = 1; i < tab->knots.size(); ++i) {
      if (!(tab->knots[i] > tab->knots[i - 1])) {
        throw DomainError("Tabulated: knots must be strictly increasing");
      }
    }
  } else if (const auto* c = std::get_if<CustomDemand>(&base)) {
    if (!c->fn) throw DomainError("CustomDemand: empty function");
  }
}

std::string format_double(double v) {
  std::ostringstream os;
  os << v;
  return os.str();
}

}  // namespace

double normal_cdf(double z) {
  return 0.5 * std::erfc(-z / std::numbers::sqrt2);
}

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

DemandModel::DemandModel(Base base, double p_min, double p_max, Vector mu)
    : base_(std::move(base)), p_min_(p_min), p_max_(p_max), mu_(std::move(mu)) {
  if (!(p_min_ < p_max_)) {
    throw DomainError("DemandModel: p_min must be below p_max");
  }
  validate_base(base_);
  const double reach = mu_.size() > 0 ? mu_.norm() : 0.0;
  for (int i = 0; i < kValidationPoints; ++i) {
    const double p =
        p_min_ + (p_max_ - p_min_) * i / (kValidationPoints - 1);
    const double f = base_mean(p);
    if (!(f - reach >= -kRangeSlack && f + reach <= 1.0 + kRangeSlack)) {
      throw DomainError("DemandModel " + name() + ": mean demand " +
                        format_double(f) + (reach > 0 ? " +- |mu|" : "") +
                        " leaves [0, 1] at p = " + format_double(p));
    }
  }
}

DemandModel DemandModel::holder_poly(double beta, double p_min, double p_max) {
  return DemandModel(HolderPoly{beta}, p_min, p_max);
}

DemandModel DemandModel::smooth_normal_mix(double p_min, double p_max) {
  return DemandModel(SmoothNormalMix{}, p_min, p_max);
}

DemandModel DemandModel::polynomial(std::vector<double> coeffs, double p_min,
                                    double p_max) {
  return DemandModel(Polynomial{std::move(coeffs)}, p_min, p_max);
}

DemandModel DemandModel::with_context(Vector mu) const {
  return DemandModel(base_, p_min_, p_max_, std::move(mu));
}

double DemandModel::base_mean(double p) const {
  return std::visit(BaseEval{p_min_, p_max_, p}, base_);
}

std::string DemandModel::name() const {
  std::string out;
  if (const auto* h = std::get_if<HolderPoly>(&base_)) {
    out = "holder-poly(beta=" + format_double(h->beta) + ")";
  } else if (std::holds_alternative<SmoothNormalMix>(base_)) {
    out = "normal-mix";
  } else if (const auto* poly = std::get_if<Polynomial>(&base_)) {
    out = "poly(";
    for (std::size_t k = 0; k < poly->coeffs.size(); ++k) {
      out += (k ? ";" : "") + format_double(poly->coeffs[k]);
    }
    out += ")";
  } else if (std::holds_alternative<Tabulated>(base_)) {
    out = "tabulated";
  } else {
    out = std::get<CustomDemand>(base_).name;
  }
  if (contextual()) out += "+ctx" + std::to_string(context_dim());
  return out;
}

double mean_demand(const DemandModel& model, double p, const Vector* x) {
  if (!(p >= model.p_min() && p <= model.p_max())) {
    throw DomainError("mean_demand: price " + format_double(p) +
                      " outside [" + format_double(model.p_min()) + ", " +
                      format_double(model.p_max()) + "]");
  }
  double f = model.base_mean(p);
  if (model.contextual()) {
    if (x == nullptr || x->size() != model.context_dim()) {
      throw DomainError("mean_demand: model expects a context of dimension " +
                        std::to_string(model.context_dim()));
    }
    f += model.mu().dot(*x);
  } else if (x != nullptr && x->size() != 0) {
    throw DomainError("mean_demand: context supplied to a non-contextual model");
  }
  return f;
}

NoiseModel::NoiseModel(Variant v) : v_(std::move(v)) {
  if (const auto* g = std::get_if<GaussianNoise>(&v_)) {
    if (!(g->sigma >= 0.0)) throw DomainError("GaussianNoise: sigma < 0");
  } else if (const auto* u = std::get_if<UniformNoise>(&v_)) {
    if (!(u->half_width >= 0.0)) {
      throw DomainError("UniformNoise: half width < 0");
    }
  } else {
    const auto& b = std::get<BiasedGaussianNoise>(v_);
    if (!(b.sigma >= 0.0) || !(b.epsilon >= 0.0) || !b.bias) {
      throw DomainError("BiasedGaussianNoise: need sigma, epsilon >= 0 and a bias");
    }
  }
}

NoiseModel NoiseModel::gaussian(double sigma) {
  return NoiseModel(GaussianNoise{sigma});
}

NoiseModel NoiseModel::uniform(double half_width) {
  return NoiseModel(UniformNoise{half_width});
}

NoiseModel NoiseModel::biased(double sigma, double epsilon,
                              std::function<double(double)> bias,
                              double p_min, double p_max) {
  for (int i = 0; i < kValidationPoints; ++i) {
    const double p = p_min + (p_max - p_min) * i / (kValidationPoints - 1);
    if (!(std::abs(bias(p)) <= epsilon + kRangeSlack)) {
      throw DomainError("BiasedGaussianNoise: |bias| exceeds epsilon at p = " +
                        format_double(p));
    }
  }
  return NoiseModel(
      BiasedGaussianNoise{sigma, epsilon, "custom", std::move(bias)});
}

NoiseModel NoiseModel::biased_cosine(double sigma, double epsilon,
                                     double p_min, double p_max) {
  auto bias = [=](double p) {
    return epsilon * std::cos(std::numbers::pi * (p - p_min) / (p_max - p_min));
  };
  NoiseModel out = biased(sigma, epsilon, bias, p_min, p_max);
  std::get<BiasedGaussianNoise>(out.v_).shape = "cosine";
  return out;
}

NoiseModel NoiseModel::biased_constant(double sigma, double epsilon) {
  return NoiseModel(BiasedGaussianNoise{sigma, epsilon, "constant",
                                        [=](double) { return epsilon; }});
}

double NoiseModel::draw(double p, Rng& rng) const {
  if (const auto* g = std::get_if<GaussianNoise>(&v_)) {
    if (g->sigma == 0.0) return 0.0;
    return std::normal_distribution<double>(0.0, g->sigma)(rng);
  }
  if (const auto* u = std::get_if<UniformNoise>(&v_)) {
    if (u->half_width == 0.0) return 0.0;
    return std::uniform_real_distribution<double>(-u->half_width,
                                                  u->half_width)(rng);
  }
  const auto& b = std::get<BiasedGaussianNoise>(v_);
  const double z =
      b.sigma == 0.0 ? 0.0 : std::normal_distribution<double>(0.0, b.sigma)(rng);
  return b.bias(p) + z;
}

double NoiseModel::bias(double p) const {
  if (const auto* b = std::get_if<BiasedGaussianNoise>(&v_)) return b->bias(p);
  return 0.0;
}

std::string NoiseModel::name() const {
  if (const auto* g = std::get_if<GaussianNoise>(&v_)) {
    return "gaussian(" + format_double(g->sigma) + ")";
  }
  if (const auto* u = std::get_if<UniformNoise>(&v_)) {
    return "uniform(" + format_double(u->half_width) + ")";
  }
  const auto& b = std::get<BiasedGaussianNoise>(v_);
  return "biased-gaussian(" + format_double(b.sigma) + "," +
         format_double(b.epsilon) + "," + b.shape + ")";
}

double sample_demand(const DemandModel& model, const NoiseModel& noise,
                     double p, const Vector* x, Rng& rng) {
  return mean_demand(model, p, x) + noise.draw(p, rng);
}

ContextSampler ContextSampler::uniform_ball(int dim) {
  if (dim < 1) throw DomainError("ContextSampler: dim must be >= 1");
  return ContextSampler(Law::kUniformBall, dim);
}

ContextSampler ContextSampler::uniform_sphere(int dim) {
  if (dim < 1) throw DomainError("ContextSampler: dim must be >= 1");
  return ContextSampler(Law::kUniformSphere, dim);
}

ContextSampler ContextSampler::fixed_set(std::vector<Vector> points) {
  if (points.empty()) throw DomainError("ContextSampler: empty fixed set");
  const auto dim = points.front().size();
  for (const auto& x : points) {
    if (x.size() != dim) {
      throw DomainError("ContextSampler: fixed set dimensions differ");
    }
    if (x.norm() > 1.0 + 1e-12) {
      throw DomainError("ContextSampler: fixed-set point outside unit ball");
    }
  }
  ContextSampler out(Law::kFixedSet, static_cast<int>(dim));
  out.points_ = std::move(points);
  return out;
}

Vector ContextSampler::draw(Rng& rng) {
  if (law_ == Law::kFixedSet) {
    Vector x = points_[cursor_];
    cursor_ = (cursor_ + 1) % points_.size();
    return x;
  }
  std::normal_distribution<double> normal(0.0, 1.0);
  Vector x(dim_);
  double norm = 0.0;
  while (norm == 0.0) {
    for (int i = 0; i < dim_; ++i) x[i] = normal(rng);
    norm = x.norm();
  }
  x /= norm;
  if (law_ == Law::kUniformBall) {
    const double r = std::pow(
        std::uniform_real_distribution<double>(0.0, 1.0)(rng), 1.0 / dim_);
    x *= r;
  }
  return x;
}

OracleResult optimal_revenue(const DemandModel& model, const Vector* x,
                             int resolution) {
  if (resolution < 1000) {
    throw DomainError("optimal_revenue: resolution must be >= 1000");
  }
  auto rev = [&](double p) { return p * mean_demand(model, p, x); };
  const SupResult best =
      maximize_on_interval(rev, model.p_min(), model.p_max(), resolution);
  return {best.price, best.value};
}

double tight_lipschitz(const DemandModel& model, int order, int resolution) {
  if (order < 1) throw DomainError("tight_lipschitz: order must be >= 1");
  if (resolution < order + 2) {
    throw DomainError("tight_lipschitz: resolution too small for the order");
  }
  const double a = model.p_min();
  const double b = model.p_max();
  const double h = (b - a) / (resolution - 1);
  std::vector<double> f(static_cast<std::size_t>(resolution));
  for (int i = 0; i < resolution; ++i) {
    f[i] = model.base_mean(i == resolution - 1 ? b : a + i * h);
  }
  std::vector<double> binom(static_cast<std::size_t>(order) + 1, 1.0);
  for (int m = 1; m <= order; ++m) binom[m] = binom[m - 1] * (order - m + 1) / m;
  double best = 0.0;
  for (int i = 0; i + order < resolution; ++i) {
    double diff = 0.0;
    for (int m = 0; m <= order; ++m) {
      const double sign = ((order - m) % 2 == 0) ? 1.0 : -1.0;
      diff += sign * binom[m] * f[i + m];
    }
    best = std::max(best, std::abs(diff) / std::pow(h, order));
  }
  return best;
}

}  // namespace padp
