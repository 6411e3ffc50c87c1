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

// JSON experiment files, validation and the built-in presets.

#include "padp/errors.hpp"
#include "padp/harness.hpp"

#include "json.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace padp {

using nlohmann::json;
using nlohmann::ordered_json;

namespace {

void reject_unknown(const json& obj, const std::string& path,
                    const std::set<std::string>& allowed) {
  if (!obj.is_object()) throw ValidationError(path, "expected an object");
  for (const auto& item : obj.items()) {
    if (!allowed.count(item.key())) {
      throw ValidationError(path.empty() ? item.key() : path + "." + item.key(),
                            "unknown field");
    }
  }
}

std::string join(const std::string& path, const std::string& key) {
  return path.empty() ? key : path + "." + key;
}

double get_number(const json& obj, const std::string& path,
                  const std::string& key, double fallback) {
  if (!obj.contains(key)) return fallback;
  const json& v = obj.at(key);
  if (!v.is_number()) throw ValidationError(join(path, key), "expected a number");
  return v.get<double>();
}

long get_integer(const json& obj, const std::string& path,
                 const std::string& key, long fallback) {
  if (!obj.contains(key)) return fallback;
  const json& v = obj.at(key);
  if (!v.is_number_integer()) throw ValidationError(join(path, key), "expected an integer");
  return v.get<long>();
}

std::string get_string(const json& obj, const std::string& path,
                       const std::string& key, const std::string& fallback) {
  if (!obj.contains(key)) return fallback;
  const json& v = obj.at(key);
  if (!v.is_string()) throw ValidationError(join(path, key), "expected a string");
  return v.get<std::string>();
}

std::vector<double> get_numbers(const json& obj, const std::string& path,
                                const std::string& key) {
  if (!obj.contains(key)) return {};
  const json& v = obj.at(key);
  if (!v.is_array()) throw ValidationError(join(path, key), "expected an array");
  std::vector<double> out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!v[i].is_number()) {
      throw ValidationError(join(path, key) + "[" + std::to_string(i) + "]",
                            "expected a number");
    }
    out.push_back(v[i].get<double>());
  }
  return out;
}

BetaSpec parse_beta(const json& v, const std::string& path) {
  BetaSpec b;
  if (v.is_string()) {
    if (v.get<std::string>() != "ln-T") throw ValidationError(path, "expected a number or \"ln-T\"");
    b.ln_t = true;
  } else if (v.is_number()) {
    b.value = v.get<double>();
  } else {
    throw ValidationError(path, "expected a number or \"ln-T\"");
  }
  return b;
}

json beta_json(const BetaSpec& b) {
  if (b.ln_t) return "ln-T";
  return b.value;
}

PolicyKind parse_kind(const std::string& s, const std::string& path) {
  if (s == "padp") return PolicyKind::kPadp;
  if (s == "padp-anytime") return PolicyKind::kPadpAnytime;
  if (s == "contextual") return PolicyKind::kContextual;
  if (s == "adaptive-pipeline") return PolicyKind::kAdaptive;
  if (s == "binned-ucb") return PolicyKind::kBinnedUcb;
  throw ValidationError(path, "unknown policy '" + s + "'");
}

const char* kind_name(PolicyKind k) {
  switch (k) {
    case PolicyKind::kPadp: return "padp";
    case PolicyKind::kPadpAnytime: return "padp-anytime";
    case PolicyKind::kContextual: return "contextual";
    case PolicyKind::kAdaptive: return "adaptive-pipeline";
    case PolicyKind::kBinnedUcb: return "binned-ucb";
  }
  return "padp";
}

bool is_contextual(PolicyKind k) { return k == PolicyKind::kContextual; }

}  // namespace

void ExperimentSpec::validate() const {
  if (name.empty()) throw ValidationError("name", "must not be empty");
  if (policies.empty()) throw ValidationError("policies", "at least one policy is required");
  if (horizons.empty()) throw ValidationError("horizons", "at least one horizon is required");
  for (std::size_t i = 0; i < horizons.size(); ++i) {
    if (horizons[i] < 2) throw ValidationError("horizons", "every horizon must be >= 2");
    if (i > 0 && horizons[i] <= horizons[i - 1]) {
      throw ValidationError("horizons", "must be strictly increasing");
    }
  }
  if (replications < 1) throw ValidationError("replications", "must be >= 1");
  if (!(delta > 0.0 && delta < 1.0)) throw ValidationError("delta", "must lie in (0, 1)");
  if (sup_resolution < 2) throw ValidationError("sup_resolution", "must be >= 2");
  if (oracle_resolution < 1000) throw ValidationError("oracle_resolution", "must be >= 1000");
  if (!(beta_max > 1.0)) throw ValidationError("beta_max", "must be > 1");
  if (!(init_eig_threshold > 0.0)) throw ValidationError("init_eig_threshold", "must be > 0");
  if (n_intervals && *n_intervals < 1) throw ValidationError("n_intervals", "must be >= 1");

  auto check_beta = [&](const BetaSpec& b, const std::string& field) {
    if (b.ln_t) {
      if (!(std::log(static_cast<double>(horizons.front())) > 1.0)) {
        throw ValidationError(field, "ln-T needs every horizon above e");
      }
    } else if (!(b.value > 1.0)) {
      throw ValidationError(field, "must be > 1");
    }
  };
  check_beta(beta, "beta");

  if (!(demand.p_max > demand.p_min)) throw ValidationError("demand.p_max", "must exceed p_min");
  if (demand.p_min < 0.0) throw ValidationError("demand.p_min", "prices must be non-negative");
  std::optional<DemandModel> model;
  try {
    model = demand.build();
  } catch (const ValidationError&) {
    throw;
  } catch (const std::exception& e) {
    throw ValidationError("demand", e.what());
  }
  if (noise.sigma < 0.0) throw ValidationError("noise.sigma", "must be >= 0");
  if (noise.half_width < 0.0) throw ValidationError("noise.half_width", "must be >= 0");
  if (noise.epsilon < 0.0) throw ValidationError("noise.epsilon", "must be >= 0");
  try {
    (void)noise.build(demand.p_min, demand.p_max);
  } catch (const ValidationError&) {
    throw;
  } catch (const std::exception& e) {
    throw ValidationError("noise", e.what());
  }

  for (std::size_t i = 0; i < policies.size(); ++i) {
    const PolicySpec& p = policies[i];
    const std::string path = "policies[" + std::to_string(i) + "]";
    if (p.beta) check_beta(*p.beta, path + ".beta");
    if (p.n_intervals && *p.n_intervals < 1) {
      throw ValidationError(path + ".n_intervals", "must be >= 1");
    }
    if (p.kind == PolicyKind::kBinnedUcb && !(p.lipschitz > 0.0)) {
      throw ValidationError(path + ".lipschitz", "must be > 0");
    }
    if (is_contextual(p.kind)) {
      if (context.dim < 1) throw ValidationError("context.dim", "contextual policy needs dim >= 1");
      if (static_cast<int>(demand.mu.size()) != context.dim) {
        throw ValidationError("demand.mu", "length must equal context.dim");
      }
      try {
        (void)context.build();
      } catch (const ValidationError&) {
        throw;
      } catch (const std::exception& e) {
        throw ValidationError("context", e.what());
      }
    } else if (!demand.mu.empty()) {
      throw ValidationError(path + ".kind", "policy ignores contexts but demand.mu is set");
    }
    if (p.kind == PolicyKind::kAdaptive) {
      for (long t : horizons) {
        try {
          (void)SmoothnessEstConfig::make(t, beta_max, demand.p_min, demand.p_max);
        } catch (const std::exception& e) {
          throw ValidationError("horizons", e.what());
        }
      }
    }
  }
  for (std::size_t i = 0; i < policies.size(); ++i) {
    for (std::size_t k = 0; k < i; ++k) {
      if (policies[i].label() == policies[k].label()) {
        throw ValidationError("policies[" + std::to_string(i) + "]",
                              "duplicate policy label " + policies[i].label());
      }
    }
  }
}

ExperimentSpec ExperimentSpec::from_json_text(const std::string& text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ValidationError("<document>", e.what());
  }
  reject_unknown(root, "",
                 {"name", "policies", "demand", "noise", "context", "horizons",
                  "replications", "base_seed", "beta", "delta", "n_intervals",
                  "sup_resolution", "oracle_resolution", "beta_max",
                  "init_eig_threshold"});
  ExperimentSpec s;
  s.name = get_string(root, "", "name", s.name);

  if (root.contains("demand")) {
    const json& d = root.at("demand");
    reject_unknown(d, "demand",
                   {"kind", "p_min", "p_max", "beta", "ell", "amplitude",
                    "coeffs", "knots", "values", "mu"});
    s.demand.kind = get_string(d, "demand", "kind", s.demand.kind);
    s.demand.p_min = get_number(d, "demand", "p_min", s.demand.p_min);
    s.demand.p_max = get_number(d, "demand", "p_max", s.demand.p_max);
    s.demand.beta = get_number(d, "demand", "beta", s.demand.beta);
    s.demand.ell = static_cast<int>(get_integer(d, "demand", "ell", s.demand.ell));
    s.demand.amplitude = get_number(d, "demand", "amplitude", s.demand.amplitude);
    s.demand.coeffs = get_numbers(d, "demand", "coeffs");
    s.demand.knots = get_numbers(d, "demand", "knots");
    s.demand.values = get_numbers(d, "demand", "values");
    s.demand.mu = get_numbers(d, "demand", "mu");
  }
  if (root.contains("noise")) {
    const json& n = root.at("noise");
    reject_unknown(n, "noise", {"kind", "sigma", "half_width", "epsilon"});
    s.noise.kind = get_string(n, "noise", "kind", s.noise.kind);
    s.noise.sigma = get_number(n, "noise", "sigma", s.noise.sigma);
    s.noise.half_width = get_number(n, "noise", "half_width", s.noise.half_width);
    s.noise.epsilon = get_number(n, "noise", "epsilon", s.noise.epsilon);
  }
  if (root.contains("context")) {
    const json& c = root.at("context");
    reject_unknown(c, "context", {"law", "dim"});
    s.context.law = get_string(c, "context", "law", s.context.law);
    s.context.dim = static_cast<int>(get_integer(c, "context", "dim", s.context.dim));
  }
  if (root.contains("horizons")) {
    for (double t : get_numbers(root, "", "horizons")) {
      if (t != std::floor(t)) throw ValidationError("horizons", "expected integers");
      s.horizons.push_back(static_cast<long>(t));
    }
  }
  s.replications = static_cast<int>(get_integer(root, "", "replications", s.replications));
  if (root.contains("base_seed")) {
    const json& v = root.at("base_seed");
    if (!v.is_number_unsigned()) throw ValidationError("base_seed", "expected a non-negative integer");
    s.base_seed = v.get<std::uint64_t>();
  }
  if (root.contains("beta")) {
    s.beta = parse_beta(root.at("beta"), "beta");
  } else {
    s.beta.value = s.demand.beta;
  }
  s.delta = get_number(root, "", "delta", s.delta);
  if (root.contains("n_intervals")) {
    s.n_intervals = static_cast<int>(get_integer(root, "", "n_intervals", 0));
  }
  s.sup_resolution = static_cast<int>(get_integer(root, "", "sup_resolution", s.sup_resolution));
  s.oracle_resolution =
      static_cast<int>(get_integer(root, "", "oracle_resolution", s.oracle_resolution));
  s.beta_max = get_number(root, "", "beta_max", s.beta_max);
  s.init_eig_threshold = get_number(root, "", "init_eig_threshold", s.init_eig_threshold);

  if (!root.contains("policies") || !root.at("policies").is_array()) {
    throw ValidationError("policies", "expected an array");
  }
  const json& ps = root.at("policies");
  for (std::size_t i = 0; i < ps.size(); ++i) {
    const std::string path = "policies[" + std::to_string(i) + "]";
    const json& pj = ps[i];
    reject_unknown(pj, path, {"kind", "lipschitz", "beta", "n_intervals"});
    PolicySpec p;
    p.kind = parse_kind(get_string(pj, path, "kind", "padp"), path + ".kind");
    if (pj.contains("lipschitz")) {
      const json& l = pj.at("lipschitz");
      if (l.is_number()) {
        p.lipschitz = l.get<double>();
      } else if (l.is_string() && l.get<std::string>() == "l-star") {
        p.lipschitz = kQuotedLStar;
      } else if (l.is_string() && l.get<std::string>() == "tight") {
        try {
          p.lipschitz = tight_lipschitz(s.demand.build(), 1, 100000);
        } catch (const std::exception& e) {
          throw ValidationError(path + ".lipschitz", e.what());
        }
      } else {
        throw ValidationError(path + ".lipschitz",
                              "expected a number, \"l-star\" or \"tight\"");
      }
    } else if (p.kind == PolicyKind::kBinnedUcb) {
      throw ValidationError(path + ".lipschitz", "binned-ucb needs a Lipschitz input");
    }
    if (pj.contains("beta")) p.beta = parse_beta(pj.at("beta"), path + ".beta");
    if (pj.contains("n_intervals")) {
      p.n_intervals = static_cast<int>(get_integer(pj, path, "n_intervals", 0));
    }
    s.policies.push_back(p);
  }
  s.validate();
  return s;
}

ExperimentSpec ExperimentSpec::from_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw IoError(path, "cannot open for reading");
  std::stringstream ss;
  ss << f.rdbuf();
  return from_json_text(ss.str());
}

std::string ExperimentSpec::to_json_text() const {
  ordered_json j;
  j["name"] = name;
  ordered_json d;
  d["kind"] = demand.kind;
  d["p_min"] = demand.p_min;
  d["p_max"] = demand.p_max;
  if (demand.kind == "holder-poly" || demand.kind == "self-similar") d["beta"] = demand.beta;
  if (demand.kind == "self-similar") {
    d["ell"] = demand.ell;
    d["amplitude"] = demand.amplitude;
  }
  if (!demand.coeffs.empty()) d["coeffs"] = demand.coeffs;
  if (!demand.knots.empty()) d["knots"] = demand.knots;
  if (!demand.values.empty()) d["values"] = demand.values;
  if (!demand.mu.empty()) d["mu"] = demand.mu;
  j["demand"] = d;
  ordered_json n;
  n["kind"] = noise.kind;
  if (noise.kind == "uniform") {
    n["half_width"] = noise.half_width;
  } else {
    n["sigma"] = noise.sigma;
  }
  if (noise.kind.rfind("biased", 0) == 0) n["epsilon"] = noise.epsilon;
  j["noise"] = n;
  if (context.dim > 0) j["context"] = {{"law", context.law}, {"dim", context.dim}};
  j["horizons"] = horizons;
  j["replications"] = replications;
  j["base_seed"] = base_seed;
  j["beta"] = beta_json(beta);
  j["delta"] = delta;
  if (n_intervals) j["n_intervals"] = *n_intervals;
  j["sup_resolution"] = sup_resolution;
  j["oracle_resolution"] = oracle_resolution;
  j["beta_max"] = beta_max;
  j["init_eig_threshold"] = init_eig_threshold;
  ordered_json ps = ordered_json::array();
  for (const PolicySpec& p : policies) {
    ordered_json pj;
    pj["kind"] = kind_name(p.kind);
    if (p.kind == PolicyKind::kBinnedUcb) pj["lipschitz"] = p.lipschitz;
    if (p.beta) pj["beta"] = beta_json(*p.beta);
    if (p.n_intervals) pj["n_intervals"] = *p.n_intervals;
    ps.push_back(pj);
  }
  j["policies"] = ps;
  return j.dump(2) + "\n";
}

std::vector<std::string> preset_names() {
  return {"experiment-1", "experiment-1-lstar", "experiment-1-misspec",
          "experiment-2", "contextual-linear", "adaptive"};
}

namespace {

PolicySpec binned(double l) {
  PolicySpec p;
  p.kind = PolicyKind::kBinnedUcb;
  p.lipschitz = l;
  return p;
}

PolicySpec simple(PolicyKind k) {
  PolicySpec p;
  p.kind = k;
  return p;
}

ExperimentSpec experiment_one() {
  ExperimentSpec s;
  s.demand.kind = "holder-poly";
  s.demand.beta = 2.5;
  s.demand.p_min = 2.6;
  s.demand.p_max = 3.8;
  s.noise.kind = "gaussian";
  s.noise.sigma = 0.1;
  s.horizons = {8000, 10000, 12000, 14000, 16000};
  s.replications = 50;
  s.base_seed = 1;
  s.beta.value = 2.5;
  return s;
}

}  // namespace

ExperimentSpec preset(const std::string& name) {
  ExperimentSpec s;
  if (name == "experiment-1") {
    s = experiment_one();
    s.policies = {simple(PolicyKind::kPadp), binned(3), binned(6), binned(9)};
  } else if (name == "experiment-1-lstar") {
    s = experiment_one();
    s.policies = {simple(PolicyKind::kPadp), binned(kQuotedLStar), binned(4),
                  binned(6), binned(8), binned(10)};
  } else if (name == "experiment-1-misspec") {
    s = experiment_one();
    s.noise.kind = "biased-cosine";
    s.noise.epsilon = 0.02;
    s.policies = {simple(PolicyKind::kPadp)};
  } else if (name == "experiment-2") {
    s = experiment_one();
    s.demand.kind = "normal-mix";
    s.beta.ln_t = true;
    s.policies = {simple(PolicyKind::kPadp), binned(1), binned(3), binned(5),
                  binned(9)};
  } else if (name == "contextual-linear") {
    s.demand.kind = "polynomial";
    s.demand.p_min = 2.0;
    s.demand.p_max = 6.0;
    s.demand.coeffs = {0.9, -0.1};
    s.demand.mu = {0.1, -0.1, 0.05};
    s.noise.kind = "gaussian";
    s.noise.sigma = 0.1;
    s.context.law = "uniform-ball";
    s.context.dim = 3;
    s.horizons = {1000, 2000, 4000, 8000};
    s.replications = 20;
    s.base_seed = 1;
    s.beta.value = 2.0;
    s.policies = {simple(PolicyKind::kContextual)};
  } else if (name == "adaptive") {
    s = experiment_one();
    s.replications = 20;
    s.beta_max = 3.0;
    s.policies = {simple(PolicyKind::kPadp), simple(PolicyKind::kAdaptive)};
  } else {
    throw ValidationError("preset", "unknown preset '" + name + "'");
  }
  s.name = name;
  s.validate();
  return s;
}

}  // namespace padp
