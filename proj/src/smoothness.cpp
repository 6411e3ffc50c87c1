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

#include "padp/smoothness.hpp"

#include "padp/errors.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

namespace padp {

SmoothnessEstConfig SmoothnessEstConfig::make(long horizon, double beta_max,
                                              double p_min, double p_max,
                                              int context_dim) {
  if (horizon < 2) throw DomainError("smoothness estimation: horizon must be >= 2");
  if (!(p_max > p_min)) throw DomainError("smoothness estimation: empty price range");
  if (context_dim < 0) throw DomainError("smoothness estimation: negative context_dim");
  SmoothnessEstConfig c;
  c.horizon = horizon;
  c.beta_max = beta_max;
  c.p_min = p_min;
  c.p_max = p_max;
  c.degree = holder_degree(beta_max);
  c.context_dim = context_dim;
  c.k1 = 1.0 / (2.0 * beta_max + 2.0);
  c.k2 = 1.0 / (4.0 * beta_max + 2.0);
  const double lt = std::log2(static_cast<double>(horizon));
  c.cells1 = 1 << static_cast<int>(std::floor(c.k1 * lt));
  c.cells2 = 1 << static_cast<int>(std::floor(c.k2 * lt));
  const double th = static_cast<double>(horizon);
  c.trial1 = static_cast<long>(std::ceil(std::pow(th, 0.5 + c.k1)));
  c.trial2 = static_cast<long>(std::ceil(std::pow(th, 0.5 + c.k2)));
  if (c.trial1 + c.trial2 > horizon) {
    throw DomainError("smoothness estimation: T_1 + T_2 exceeds the horizon");
  }
  const double need = 2.0 * (c.degree + 1 + context_dim);
  if (static_cast<double>(c.trial1) / c.cells1 < need ||
      static_cast<double>(c.trial2) / c.cells2 < need) {
    throw DomainError("smoothness estimation: horizon too short for the cell count");
  }
  return c;
}

PiecewiseEstimate::PiecewiseEstimate(double p_min, double p_max,
                                     std::vector<LocalModel> cells)
    : p_min_(p_min), p_max_(p_max), cells_(std::move(cells)) {}

double PiecewiseEstimate::edge(int m) const {
  return p_min_ + (p_max_ - p_min_) * m / size();
}

int PiecewiseEstimate::cell_of(double p) const {
  if (p < p_min_ || p > p_max_) throw DomainError("cell_of: price off-range");
  const int k = size();
  int m = static_cast<int>(std::floor((p - p_min_) / (p_max_ - p_min_) * k));
  m = std::clamp(m, 0, k - 1);
  // Guard the floor against rounding at the edges.
  while (m > 0 && p < edge(m)) --m;
  while (m < k - 1 && p >= edge(m + 1)) ++m;
  return m;
}

double PiecewiseEstimate::evaluate(double p, const Vector* x) const {
  const LocalModel& c = cell(cell_of(p));
  return c.predict(c.feature(p, x));
}

Vector PiecewiseEstimate::mu(int m) const {
  const LocalModel& c = cell(m);
  return c.coeffs().tail(c.context_dim());
}

PiecewiseEstimate fit_piecewise(const std::vector<Sample>& samples,
                                double p_min, double p_max, int cells,
                                int degree, int context_dim, int trial) {
  const double w = (p_max - p_min) / cells;
  std::vector<LocalModel> models;
  models.reserve(static_cast<std::size_t>(cells));
  for (int m = 0; m < cells; ++m) {
    PolyFeatureMap map{p_min + w * (m + 1), degree, w, Basis::kLegendre};
    models.emplace_back(map, context_dim, m + 1);
  }
  PiecewiseEstimate locator(p_min, p_max, models);
  for (const Sample& s : samples) models[static_cast<std::size_t>(locator.cell_of(s.price))].add(s);
  for (int m = 0; m < cells; ++m) {
    LocalModel& lm = models[static_cast<std::size_t>(m)];
    if (lm.distinct_prices() < degree + 1) {
      throw InsufficientSampleError(trial, m + 1, lm.distinct_prices(), degree + 1);
    }
    lm.fit();
  }
  return PiecewiseEstimate(p_min, p_max, std::move(models));
}

BetaFromGap beta_from_gap(double gap, long horizon, double beta_max) {
  BetaFromGap out;
  if (!(gap > 0.0)) {
    out.zero_gap = true;
    out.raw = std::numeric_limits<double>::infinity();
    out.beta_hat = beta_max;
    return out;
  }
  const double lt = std::log(static_cast<double>(horizon));
  out.raw = -std::log(gap) / lt - std::log(lt) / lt;
  out.beta_hat = std::clamp(out.raw, 1.0 + 1e-6, beta_max);
  return out;
}

double max_fit_gap(const PiecewiseEstimate& fit1, const PiecewiseEstimate& fit2,
                   int context_dim, int resolution) {
  if (resolution < 2) throw DomainError("max_fit_gap: resolution must be >= 2");
  std::vector<Vector> xs{Vector::Zero(context_dim)};
  for (int k = 0; k < context_dim; ++k) {
    for (double sgn : {1.0, -1.0}) {
      Vector e = Vector::Zero(context_dim);
      e[k] = sgn;
      xs.push_back(e);
    }
  }
  const double lo = fit1.edge(0);
  const double hi = fit1.edge(fit1.size());
  double gap = 0.0;
  for (int i = 0; i < resolution; ++i) {
    const double p = lo + (hi - lo) * i / (resolution - 1);
    for (const Vector& x : xs) {
      const Vector* px = context_dim > 0 ? &x : nullptr;
      gap = std::max(gap, std::abs(fit2.evaluate(p, px) - fit1.evaluate(p, px)));
    }
  }
  return gap;
}

BetaEstimate estimate_beta(const SmoothnessEstConfig& config,
                           const DemandModel& model, const NoiseModel& noise,
                           ContextSampler* contexts, Rng& rng) {
  if (model.contextual() != (contexts != nullptr) ||
      model.context_dim() != config.context_dim ||
      (contexts && contexts->dim() != config.context_dim)) {
    throw DomainError("estimate_beta: context configuration mismatch");
  }
  BetaEstimate out;
  std::uniform_real_distribution<double> unif(config.p_min, config.p_max);
  const double static_rev =
      model.contextual()
          ? 0.0
          : optimal_revenue(model, nullptr, config.oracle_resolution).revenue;

  auto trial = [&](long rounds, int cells, int index) {
    std::vector<Sample> samples;
    samples.reserve(static_cast<std::size_t>(rounds));
    const PiecewiseEstimate locator(config.p_min, config.p_max,
                                    std::vector<LocalModel>(static_cast<std::size_t>(cells)));
    for (long r = 0; r < rounds; ++r) {
      const double p = unif(rng);
      Vector x;
      if (contexts) x = contexts->draw(rng);
      const Vector* px = contexts ? &x : nullptr;
      const double d = sample_demand(model, noise, p, px, rng);
      const double rev_star =
          contexts ? optimal_revenue(model, px, config.oracle_resolution).revenue
                   : static_rev;
      RoundRecord rec;
      rec.t = ++out.rounds_used;
      rec.branch = Branch::kEstimate;
      rec.layer = 0;
      rec.interval = locator.cell_of(p) + 1;
      rec.price = p;
      rec.demand = d;
      rec.regret = rev_star - p * mean_demand(model, p, px);
      rec.context_len = static_cast<int>(x.size());
      if (x.size() > 0) {
        rec.context_norm = x.norm();
        for (int k = 0; k < std::min<int>(4, static_cast<int>(x.size())); ++k) {
          rec.context_head[static_cast<std::size_t>(k)] = x[k];
        }
      }
      out.trace.rounds.push_back(rec);
      samples.push_back({p, x, d});
    }
    return fit_piecewise(samples, config.p_min, config.p_max, cells,
                         config.degree, config.context_dim, index);
  };

  out.fit1 = trial(config.trial1, config.cells1, 1);
  out.fit2 = trial(config.trial2, config.cells2, 2);
  out.gap = max_fit_gap(out.fit1, out.fit2, config.context_dim,
                        config.eval_resolution);
  const BetaFromGap b = beta_from_gap(out.gap, config.horizon, config.beta_max);
  out.beta_hat = b.beta_hat;
  out.raw_beta = b.raw;
  out.zero_gap = b.zero_gap;
  return out;
}

double LocalPolynomial::operator()(double x) const {
  const double z = (2.0 * x - lo - hi) / (hi - lo);
  double acc = 0.0;
  for (Eigen::Index k = coeffs.size() - 1; k >= 0; --k) acc = acc * z + coeffs[k];
  return acc;
}

LocalPolynomial l2_poly_projection(const std::function<double(double)>& g,
                                   double a, double b, int ell,
                                   int resolution) {
  if (ell < 0) throw DomainError("l2_poly_projection: negative degree");
  if (!(b > a)) throw DomainError("l2_poly_projection: empty interval");
  if (resolution < 8 * (ell + 1)) {
    throw DomainError("l2_poly_projection: resolution must be >= 8 (ell + 1)");
  }
  Matrix v(resolution, ell + 1);
  Vector y(resolution);
  for (int i = 0; i < resolution; ++i) {
    const double z = -1.0 + (2.0 * i + 1.0) / resolution;
    double zk = 1.0;
    for (int k = 0; k <= ell; ++k) {
      v(i, k) = zk;
      zk *= z;
    }
    y[i] = g(0.5 * (a + b) + 0.5 * (b - a) * z);
  }
  LocalPolynomial out;
  out.lo = a;
  out.hi = b;
  out.coeffs = v.colPivHouseholderQr().solve(y);
  return out;
}

namespace {

// Bernoulli numbers B_0..B_6 (B_1 = -1/2).
constexpr double kBernoulli[] = {1.0, -0.5, 1.0 / 6.0, 0.0, -1.0 / 30.0, 0.0,
                                 1.0 / 42.0};

double binomial(int n, int k) {
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

// M2 frozen from verify_self_similarity with 64 nodes per cell.
// Each entry is 0.9 times the smallest 2^{c beta} * error seen for c = 1..8.
double validated_m2(double beta, int ell) {
  struct Entry {
    double beta;
    int ell;
    double m2;
  };
  static constexpr Entry kTable[] = {
      {1.5, 1, 0.232}, {1.5, 2, 0.0547}, {2.5, 2, 0.0494},
      {2.5, 3, 0.00843}, {3.5, 3, 0.0109}, {3.5, 4, 0.00111},
  };
  for (const Entry& e : kTable) {
    if (e.ell == ell && std::abs(e.beta - beta) < 1e-12) return e.m2;
  }
  throw DomainError("self-similar function: no validated M2 for this (beta, ell)");
}

}  // namespace

SelfSimilarTestFunction SelfSimilarTestFunction::make(double beta, int ell) {
  if (!(beta > 1.0)) throw DomainError("self-similar function: beta must be > 1");
  if (ell < 1 || ell > 5) throw DomainError("self-similar function: ell must be in [1, 5]");
  SelfSimilarTestFunction f;
  f.beta = beta;
  f.ell = ell;
  f.m1 = 0.0;
  f.m2 = validated_m2(beta, ell);
  f.terms = std::min(60, static_cast<int>(std::ceil(60.0 / beta)));
  return f;
}

double SelfSimilarTestFunction::bump(double v) const {
  const int n = ell + 1;
  double acc = 0.0;
  for (int k = 0; k < n; ++k) {
    acc += binomial(n, k) * kBernoulli[k] * std::pow(v, n - k);
  }
  return acc;  // the k = n term B_n(0) is dropped
}

double SelfSimilarTestFunction::operator()(double u) const {
  double acc = 0.0;
  double scale = 1.0;
  for (int m = 1; m <= terms; ++m) {
    scale *= 2.0;
    const double v = scale * u;
    acc += std::pow(2.0, -m * beta) * bump(v - std::floor(v));
  }
  return acc;
}

SelfSimilarityReport verify_self_similarity(const SelfSimilarTestFunction& fn,
                                            int c_max,
                                            int resolution_per_cell) {
  if (c_max < 1) throw DomainError("verify_self_similarity: c_max must be >= 1");
  SelfSimilarityReport rep;
  rep.holds = true;
  const std::function<double(double)> g = [&fn](double u) { return fn(u); };
  const int eval_points = 2 * resolution_per_cell + 1;
  for (int c = 1; c <= c_max; ++c) {
    const int cells = 1 << c;
    double sup = 0.0;
    for (int v = 0; v < cells; ++v) {
      const double a = static_cast<double>(v) / cells;
      const double b = static_cast<double>(v + 1) / cells;
      const LocalPolynomial proj =
          l2_poly_projection(g, a, b, fn.ell, resolution_per_cell);
      for (int i = 0; i < eval_points; ++i) {
        const double x = a + (b - a) * i / (eval_points - 1);
        sup = std::max(sup, std::abs(proj(x) - fn(x)));
      }
    }
    SelfSimilarityLevel lvl;
    lvl.c = c;
    lvl.sup_error = sup;
    lvl.bound = fn.m2 * std::pow(2.0, -c * fn.beta);
    lvl.ratio = lvl.bound > 0.0 ? sup / lvl.bound
                                : std::numeric_limits<double>::infinity();
    if (c > fn.m1 && lvl.ratio < 1.0) rep.holds = false;
    rep.levels.push_back(lvl);
  }
  return rep;
}

DemandModel self_similar_demand(const SelfSimilarTestFunction& fn, double p_min,
                                double p_max, double amplitude) {
  char name[96];
  std::snprintf(name, sizeof(name), "self-similar(beta=%g,ell=%d)", fn.beta,
                fn.ell);
  const double range = p_max - p_min;
  double peak = 0.0;
  for (int i = 0; i <= 4096; ++i) peak = std::max(peak, std::abs(fn(i / 4096.0)));
  if (!(amplitude >= 0.0) || amplitude * peak > 0.5) {
    throw DomainError("self_similar_demand: amplitude pushes demand outside [0, 1]");
  }
  CustomDemand cd{name, [fn, p_min, range, amplitude](double p) {
                    const double u = std::clamp((p - p_min) / range, 0.0, 1.0);
                    return 0.5 + amplitude * fn(u);
                  }};
  return DemandModel(std::move(cd), p_min, p_max);
}

AdaptiveResult adaptive_pipeline(long horizon, double beta_max,
                                 const DemandModel& model,
                                 const NoiseModel& noise, std::uint64_t seed,
                                 const AdaptiveOptions& options) {
  if (model.contextual()) {
    throw DomainError("adaptive_pipeline: contextual models are not supported");
  }
  SmoothnessEstConfig ec = SmoothnessEstConfig::make(
      horizon, beta_max, model.p_min(), model.p_max());
  ec.oracle_resolution = options.oracle_resolution;
  AdaptiveResult out;
  Rng rng(seed);
  out.estimate = estimate_beta(ec, model, noise, nullptr, rng);
  const long residual = horizon - out.estimate.rounds_used;
  out.policy = PadpConfig::make(model.p_min(), model.p_max(),
                                out.estimate.beta_hat, residual, options.delta);
  out.policy.sup_resolution = options.sup_resolution;
  out.policy.oracle_resolution = options.oracle_resolution;
  Rng policy_rng(mix_seed(seed, kPolicyStream));
  EpisodeOptions eo;
  eo.t_offset = out.estimate.rounds_used;
  out.trace = out.estimate.trace;
  out.trace.append(run_episode(out.policy, model, noise, policy_rng, eo));
  return out;
}

}  // namespace padp
