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

#include "padp/harness.hpp"

#include "padp/errors.hpp"

#include "json.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>

namespace padp {

double BetaSpec::resolve(long horizon) const {
  return ln_t ? std::log(static_cast<double>(horizon)) : value;
}

std::string BetaSpec::text() const {
  if (ln_t) return "ln-T";
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%g", value);
  return buf;
}

DemandModel DemandSpec::build() const {
  std::optional<DemandModel> m;
  if (kind == "holder-poly") {
    m = DemandModel::holder_poly(beta, p_min, p_max);
  } else if (kind == "normal-mix") {
    m = DemandModel::smooth_normal_mix(p_min, p_max);
  } else if (kind == "polynomial") {
    m = DemandModel::polynomial(coeffs, p_min, p_max);
  } else if (kind == "tabulated") {
    m = DemandModel(Tabulated{knots, values}, p_min, p_max);
  } else if (kind == "self-similar") {
    m = self_similar_demand(SelfSimilarTestFunction::make(beta, ell), p_min,
                            p_max, amplitude);
  } else {
    throw ValidationError("demand.kind", "unknown demand kind '" + kind + "'");
  }
  if (mu.empty()) return *m;
  return m->with_context(Eigen::Map<const Vector>(mu.data(), static_cast<Eigen::Index>(mu.size())));
}

std::string DemandSpec::label() const {
  char buf[64];
  std::string out;
  if (kind == "holder-poly" || kind == "self-similar") {
    std::snprintf(buf, sizeof(buf), "%s(beta=%g)", kind.c_str(), beta);
    out = buf;
  } else {
    out = kind;
  }
  if (!mu.empty()) out += "+linear(" + std::to_string(mu.size()) + ")";
  return out;
}

NoiseModel NoiseSpec::build(double p_min, double p_max) const {
  if (kind == "gaussian") return NoiseModel::gaussian(sigma);
  if (kind == "uniform") return NoiseModel::uniform(half_width);
  if (kind == "biased-cosine") return NoiseModel::biased_cosine(sigma, epsilon, p_min, p_max);
  if (kind == "biased-constant") return NoiseModel::biased_constant(sigma, epsilon);
  throw ValidationError("noise.kind", "unknown noise kind '" + kind + "'");
}

ContextSampler ContextSpec::build() const {
  if (law == "uniform-ball") return ContextSampler::uniform_ball(dim);
  if (law == "uniform-sphere") return ContextSampler::uniform_sphere(dim);
  throw ValidationError("context.law", "unknown context law '" + law + "'");
}

std::string PolicySpec::label() const {
  switch (kind) {
    case PolicyKind::kPadp:
      return "padp";
    case PolicyKind::kPadpAnytime:
      return "padp-anytime";
    case PolicyKind::kContextual:
      return "contextual";
    case PolicyKind::kAdaptive:
      return "adaptive-pipeline";
    case PolicyKind::kBinnedUcb: {
      char buf[48];
      std::snprintf(buf, sizeof(buf), "binned-ucb(L=%g)", lipschitz);
      return buf;
    }
  }
  return "unknown";
}

int default_jobs() {
  if (const char* env = std::getenv("PADP_JOBS")) {
    const int j = std::atoi(env);
    if (j > 0) return j;
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

RunRecord run_single(const ExperimentSpec& spec, const PolicySpec& policy,
                     long horizon, int rep, const StepObserver* observer) {
  const DemandModel model = spec.demand.build();
  const NoiseModel noise = spec.noise.build(model.p_min(), model.p_max());
  const std::uint64_t seed = spec.base_seed + static_cast<std::uint64_t>(rep);
  Rng rng(seed);
  const double beta = policy.beta.value_or(spec.beta).resolve(horizon);
  const std::optional<int> n = policy.n_intervals ? policy.n_intervals : spec.n_intervals;
  EpisodeOptions eo;
  eo.observer = observer;

  switch (policy.kind) {
    case PolicyKind::kPadp:
    case PolicyKind::kPadpAnytime: {
      PadpConfig c = PadpConfig::make(model.p_min(), model.p_max(), beta,
                                      horizon, spec.delta, n);
      c.sup_resolution = spec.sup_resolution;
      c.oracle_resolution = spec.oracle_resolution;
      if (policy.kind == PolicyKind::kPadp) return run_episode(c, model, noise, rng, eo);
      return run_anytime(c, model, noise, rng, horizon);
    }
    case PolicyKind::kContextual: {
      ContextualConfig c = ContextualConfig::make(
          model.p_min(), model.p_max(), beta, horizon, spec.context.dim,
          spec.delta, n);
      c.base.sup_resolution = spec.sup_resolution;
      c.base.oracle_resolution = spec.oracle_resolution;
      c.init_eig_threshold = spec.init_eig_threshold;
      ContextSampler contexts = spec.context.build();
      return run_contextual_episode(c, model, noise, contexts, rng, eo);
    }
    case PolicyKind::kAdaptive: {
      AdaptiveOptions ao;
      ao.delta = spec.delta;
      ao.sup_resolution = spec.sup_resolution;
      ao.oracle_resolution = spec.oracle_resolution;
      return adaptive_pipeline(horizon, spec.beta_max, model, noise, seed, ao).trace;
    }
    case PolicyKind::kBinnedUcb: {
      BinnedUcbConfig c = BinnedUcbConfig::make(model.p_min(), model.p_max(),
                                                beta, policy.lipschitz,
                                                horizon, spec.delta,
                                                policy.n_intervals);
      c.oracle_resolution = spec.oracle_resolution;
      return run_binned_episode(c, model, noise, rng);
    }
  }
  throw InvariantViolation("run_single: unhandled policy kind");
}

ExperimentResult run_experiment(const ExperimentSpec& spec,
                                const RunOptions& options) {
  spec.validate();
  struct Task {
    std::size_t policy;
    long horizon;
    int rep;
  };
  std::vector<Task> tasks;
  for (std::size_t p = 0; p < spec.policies.size(); ++p) {
    for (long t : spec.horizons) {
      for (int r = 0; r < spec.replications; ++r) tasks.push_back({p, t, r});
    }
  }
  ExperimentResult result;
  result.name = spec.name;
  result.runs.resize(tasks.size());
  const std::string demand = spec.demand.label();

  std::atomic<std::size_t> next{0};
  std::mutex lock;
  std::exception_ptr failure;
  auto worker = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= tasks.size()) return;
      {
        std::lock_guard<std::mutex> g(lock);
        if (failure) return;
      }
      try {
        const Task& task = tasks[i];
        const PolicySpec& ps = spec.policies[task.policy];
        StepObserver obs;
        if (options.observers) obs = options.observers(ps, task.horizon, task.rep);
        const auto start = std::chrono::steady_clock::now();
        const RunRecord rec = run_single(spec, ps, task.horizon, task.rep,
                                         obs ? &obs : nullptr);
        const auto stop = std::chrono::steady_clock::now();
        if (rec.horizon() != task.horizon) {
          throw InvariantViolation("run_experiment: trace length differs from T");
        }
        RunSummary s;
        s.policy = ps.label();
        s.demand = demand;
        s.horizon = task.horizon;
        s.rep = task.rep;
        s.seed = spec.base_seed + static_cast<std::uint64_t>(task.rep);
        s.cum_regret = rec.cumulative_regret();
        s.simple_regret = s.cum_regret / static_cast<double>(s.horizon);
        s.wall_seconds = std::chrono::duration<double>(stop - start).count();
        s.digest = rec.digest();
        result.runs[i] = s;
        if (options.sink) {
          std::lock_guard<std::mutex> g(lock);
          options.sink(s, rec);
        }
      } catch (...) {
        std::lock_guard<std::mutex> g(lock);
        if (!failure) failure = std::current_exception();
        return;
      }
    }
  };
  const int jobs = std::max(1, std::min<int>(options.jobs > 0 ? options.jobs : default_jobs(),
                                             static_cast<int>(tasks.size())));
  if (jobs == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int k = 0; k < jobs; ++k) pool.emplace_back(worker);
    for (std::thread& th : pool) th.join();
  }
  if (failure) std::rethrow_exception(failure);
  return result;
}

std::vector<Aggregate> ExperimentResult::aggregate() const {
  std::vector<Aggregate> out;
  std::map<std::pair<std::string, long>, std::size_t> slot;
  std::vector<std::vector<const RunSummary*>> groups;
  for (const RunSummary& r : runs) {
    auto key = std::make_pair(r.policy, r.horizon);
    auto it = slot.find(key);
    if (it == slot.end()) {
      it = slot.emplace(key, out.size()).first;
      Aggregate a;
      a.policy = r.policy;
      a.horizon = r.horizon;
      out.push_back(a);
      groups.emplace_back();
    }
    groups[it->second].push_back(&r);
  }
  for (std::size_t g = 0; g < out.size(); ++g) {
    const auto& rows = groups[g];
    Aggregate& a = out[g];
    a.runs = static_cast<int>(rows.size());
    double sum = 0.0;
    double cum = 0.0;
    for (const RunSummary* r : rows) {
      sum += r->simple_regret;
      cum += r->cum_regret;
    }
    a.mean_simple = sum / a.runs;
    a.mean_cum = cum / a.runs;
    double ss = 0.0;
    for (const RunSummary* r : rows) ss += (r->simple_regret - a.mean_simple) * (r->simple_regret - a.mean_simple);
    a.std_simple = a.runs > 1 ? std::sqrt(ss / (a.runs - 1)) : 0.0;
  }
  return out;
}

std::optional<Aggregate> ExperimentResult::find(const std::string& policy,
                                               long horizon) const {
  for (const Aggregate& a : aggregate()) {
    if (a.policy == policy && a.horizon == horizon) return a;
  }
  return std::nullopt;
}

SlopeFit fit_log_log(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size()) throw DomainError("fit_log_log: size mismatch");
  std::vector<double> xs = x;
  std::sort(xs.begin(), xs.end());
  if (std::unique(xs.begin(), xs.end()) - xs.begin() < 3) {
    throw DomainError("fit_log_log: need at least 3 distinct horizons");
  }
  const std::size_t n = x.size();
  double mx = 0.0, my = 0.0;
  std::vector<double> lx(n), ly(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (!(x[i] > 0.0) || !(y[i] > 0.0)) throw DomainError("fit_log_log: non-positive value");
    lx[i] = std::log(x[i]);
    ly[i] = std::log(y[i]);
    mx += lx[i];
    my += ly[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (lx[i] - mx) * (lx[i] - mx);
    sxy += (lx[i] - mx) * (ly[i] - my);
    syy += (ly[i] - my) * (ly[i] - my);
  }
  SlopeFit f;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  f.r2 = syy > 0.0 ? (sxy * sxy) / (sxx * syy) : 1.0;
  return f;
}

SlopeFit fit_regret_slope(const std::vector<RunSummary>& runs,
                          const std::string& policy) {
  std::map<long, std::pair<double, int>> by_t;
  for (const RunSummary& r : runs) {
    if (r.policy != policy) continue;
    auto& e = by_t[r.horizon];
    e.first += r.cum_regret;
    e.second += 1;
  }
  std::vector<double> x, y;
  for (const auto& [t, e] : by_t) {
    x.push_back(static_cast<double>(t));
    y.push_back(e.first / e.second);
  }
  return fit_log_log(x, y);
}

void check_accounting(const std::vector<RunSummary>& runs) {
  for (const RunSummary& r : runs) {
    if (r.horizon < 1 || r.simple_regret != r.cum_regret / static_cast<double>(r.horizon)) {
      throw InvariantViolation("accounting identity broken for " + r.policy +
                               " T=" + std::to_string(r.horizon) +
                               " rep=" + std::to_string(r.rep));
    }
  }
}

namespace {

std::string g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void check_field(const std::string& s, const char* field) {
  if (s.find_first_of(",\"\n") != std::string::npos) {
    throw ValidationError(field, "value '" + s + "' cannot be written to CSV");
  }
}

}  // namespace

void write_csv(std::ostream& out, const std::vector<RunSummary>& runs) {
  check_accounting(runs);
  out << kCsvHeader << '\n';
  for (const RunSummary& r : runs) {
    check_field(r.policy, "policy");
    check_field(r.demand, "demand");
    out << r.policy << ',' << r.demand << ',' << r.horizon << ',' << r.rep
        << ',' << r.seed << ',' << g17(r.cum_regret) << ','
        << g17(r.simple_regret) << '\n';
  }
}

void write_jsonl(std::ostream& out, const std::vector<RunSummary>& runs) {
  check_accounting(runs);
  for (const RunSummary& r : runs) {
    nlohmann::ordered_json j;
    j["policy"] = r.policy;
    j["demand"] = r.demand;
    j["T"] = r.horizon;
    j["rep"] = r.rep;
    j["seed"] = r.seed;
    j["cum_regret"] = r.cum_regret;
    j["simple_regret"] = r.simple_regret;
    out << j.dump() << '\n';
  }
}

void export_results(const std::vector<RunSummary>& runs,
                    const std::string& format, const std::string& path) {
  if (format != "csv" && format != "jsonl") {
    throw ValidationError("format", "expected csv or jsonl");
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw IoError(path, "cannot open for writing");
  if (format == "csv") {
    write_csv(f, runs);
  } else {
    write_jsonl(f, runs);
  }
  f.flush();
  if (!f) throw IoError(path, "write failed");
}

std::vector<RunSummary> read_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw ValidationError("csv", "missing header");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != kCsvHeader) throw ValidationError("csv", "unexpected header '" + line + "'");
  std::vector<RunSummary> out;
  long lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string> f;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) f.push_back(cell);
    if (f.size() != 7) {
      throw ValidationError("csv", "line " + std::to_string(lineno) + ": expected 7 fields");
    }
    try {
      RunSummary r;
      r.policy = f[0];
      r.demand = f[1];
      r.horizon = std::stol(f[2]);
      r.rep = std::stoi(f[3]);
      r.seed = std::stoull(f[4]);
      r.cum_regret = std::strtod(f[5].c_str(), nullptr);
      r.simple_regret = std::strtod(f[6].c_str(), nullptr);
      out.push_back(r);
    } catch (const std::logic_error&) {
      throw ValidationError("csv", "line " + std::to_string(lineno) + ": malformed number");
    }
  }
  return out;
}

std::vector<RunSummary> read_csv_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw IoError(path, "cannot open for reading");
  return read_csv(f);
}

void write_trace(std::ostream& out, const RunSummary& run,
                 const RunRecord& record) {
  for (const RoundRecord& r : record.rounds) {
    nlohmann::ordered_json j;
    j["policy"] = run.policy;
    j["T"] = run.horizon;
    j["rep"] = run.rep;
    j["t"] = r.t;
    j["branch"] = branch_name(r.branch);
    j["layer"] = r.layer;
    j["interval"] = r.interval;
    j["price"] = r.price;
    j["demand"] = r.demand;
    j["regret"] = r.regret;
    if (r.context_len > 0) j["context_norm"] = r.context_norm;
    out << j.dump() << '\n';
  }
}

}  // namespace padp
