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

#include "padp/errors.hpp"
#include "padp/harness.hpp"

#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <sstream>

using namespace padp;

namespace {

ExperimentSpec small_spec() {
  ExperimentSpec s = preset("experiment-1");
  s.name = "small";
  s.horizons = {300, 600, 1200};
  s.replications = 3;
  return s;
}

std::string csv_of(const ExperimentResult& r) {
  std::ostringstream os;
  write_csv(os, r.runs);
  return os.str();
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("presets roundtrip through JSON") {
  for (const auto& name : preset_names()) {
    CAPTURE(name);
    const ExperimentSpec a = preset(name);
    a.validate();
    const std::string text = a.to_json_text();
    const ExperimentSpec b = ExperimentSpec::from_json_text(text);
    CHECK(b.to_json_text() == text);
  }
  CHECK_THROWS_AS(preset("nope"), ValidationError);
}

TEST_CASE("shipped configs match the presets") {
  for (const auto& name : preset_names()) {
    CAPTURE(name);
    const std::string path = std::string(PADP_SOURCE_DIR) + "/configs/" + name + ".json";
    const ExperimentSpec s = ExperimentSpec::from_file(path);
    CHECK(s.to_json_text() == preset(name).to_json_text());
  }
}

TEST_CASE("preset contents") {
  const auto e1 = preset("experiment-1");
  CHECK(e1.demand.kind == "holder-poly");
  CHECK(e1.demand.p_min == 2.6);
  CHECK(e1.demand.p_max == 3.8);
  CHECK(e1.noise.sigma == 0.1);
  CHECK(e1.replications == 50);
  CHECK(e1.horizons == std::vector<long>{8000, 10000, 12000, 14000, 16000});
  REQUIRE(e1.policies.size() == 4);
  CHECK(e1.policies[0].label() == "padp");
  CHECK(e1.policies[3].label() == "binned-ucb(L=9)");

  const auto e2 = preset("experiment-2");
  CHECK(e2.beta.ln_t);
  CHECK(e2.beta.resolve(16000) == doctest::Approx(std::log(16000.0)));
}

TEST_CASE("validation names the field") {
  auto field_of = [](const std::string& text) {
    try {
      ExperimentSpec::from_json_text(text);
    } catch (const ValidationError& e) {
      return e.field();
    }
    return std::string("<none>");
  };
  const std::string base = preset("experiment-1").to_json_text();
  auto with = [&](const std::string& from, const std::string& to) {
    std::string t = base;
    const auto pos = t.find(from);
    REQUIRE(pos != std::string::npos);
    t.replace(pos, from.size(), to);
    return t;
  };
  CHECK(field_of(with("\"kind\": \"holder-poly\"", "\"kind\": \"holder-poly\", \"colour\": 1")) == "demand.colour");
  CHECK(field_of(with("\"replications\": 50", "\"replications\": 0")) == "replications");
  CHECK(field_of(with("\"replications\": 50", "\"replications\": \"many\"")) == "replications");
  CHECK(field_of(with("8000,", "20000,")) == "horizons");
  CHECK(field_of(with("\"delta\": 0.05", "\"delta\": 2")) == "delta");
  CHECK(field_of(with("\"p_max\": 3.8", "\"p_max\": 2.0")) == "demand.p_max");
  CHECK(field_of(with("\"kind\": \"padp\"", "\"kind\": \"thompson\"")) == "policies[0].kind");
  CHECK(field_of("{not json") == "<document>");
  CHECK(field_of(base) == "<none>");
}

TEST_CASE("CSV roundtrip is exact") {
  std::vector<RunSummary> runs;
  for (int i = 0; i < 5; ++i) {
    RunSummary r;
    r.policy = i % 2 ? "padp" : "binned-ucb(L=3)";
    r.demand = "holder-poly(beta=2.5)";
    r.horizon = 1000 * (i + 1);
    r.rep = i;
    r.seed = 18446744073709551615ull - static_cast<std::uint64_t>(i);
    r.cum_regret = std::sqrt(2.0) * 1e3 * (i + 1) / 3.0;
    r.simple_regret = r.cum_regret / static_cast<double>(r.horizon);
    runs.push_back(r);
  }
  std::ostringstream os;
  write_csv(os, runs);
  CHECK(os.str().rfind(std::string(kCsvHeader) + "\n", 0) == 0);
  std::istringstream is(os.str());
  const auto back = read_csv(is);
  REQUIRE(back.size() == runs.size());
  for (std::size_t i = 0; i < runs.size(); ++i) {
    CHECK(back[i].policy == runs[i].policy);
    CHECK(back[i].demand == runs[i].demand);
    CHECK(back[i].horizon == runs[i].horizon);
    CHECK(back[i].rep == runs[i].rep);
    CHECK(back[i].seed == runs[i].seed);
    CHECK(back[i].cum_regret == runs[i].cum_regret);
    CHECK(back[i].simple_regret == runs[i].simple_regret);
  }
  check_accounting(back);

  std::istringstream header_only(std::string(kCsvHeader) + "\n");
  CHECK(read_csv(header_only).empty());
  std::istringstream wrong("policy,T\n");
  CHECK_THROWS(read_csv(wrong));

  runs[0].policy = "a,b";
  std::ostringstream bad;
  CHECK_THROWS(write_csv(bad, runs));

  runs[0].policy = "padp";
  runs[1].simple_regret += 1e-12;
  CHECK_THROWS(check_accounting(runs));
}

TEST_CASE("slope fit") {
  const std::vector<double> x{8000, 10000, 12000, 14000, 16000};
  std::vector<double> y;
  for (double t : x) y.push_back(3.0 * std::pow(t, 0.6));
  const auto f = fit_log_log(x, y);
  CHECK(f.slope == doctest::Approx(0.6).epsilon(1e-12));
  CHECK(f.intercept == doctest::Approx(std::log(3.0)).epsilon(1e-10));
  CHECK(f.r2 == doctest::Approx(1.0));

  const auto flat = fit_log_log(x, std::vector<double>(5, 2.0));
  CHECK(std::abs(flat.slope) < 1e-12);

  CHECK_THROWS(fit_log_log({1.0, 2.0}, {1.0, 2.0}));

  // Via run summaries: mean cumulative regret per T.
  std::vector<RunSummary> runs;
  for (double t : x) {
    for (int rep = 0; rep < 2; ++rep) {
      RunSummary r;
      r.policy = "padp";
      r.horizon = static_cast<long>(t);
      r.cum_regret = 3.0 * std::pow(t, 0.6) * (rep ? 1.1 : 0.9);
      runs.push_back(r);
    }
  }
  CHECK(fit_regret_slope(runs, "padp").slope == doctest::Approx(0.6).epsilon(1e-12));
  CHECK_THROWS(fit_regret_slope(runs, "other"));
}

TEST_CASE("experiments are deterministic and job-count invariant") {
  const ExperimentSpec s = small_spec();
  RunOptions one;
  one.jobs = 1;
  RunOptions three;
  three.jobs = 3;
  const auto a = run_experiment(s, one);
  const auto b = run_experiment(s, one);
  const auto c = run_experiment(s, three);
  CHECK(csv_of(a) == csv_of(b));
  CHECK(csv_of(a) == csv_of(c));
  REQUIRE(a.runs.size() == 4 * 3 * 3);
  for (std::size_t i = 0; i < a.runs.size(); ++i) {
    CHECK(a.runs[i].digest == c.runs[i].digest);
  }
  // Task order: policy, then T, then rep.
  CHECK(a.runs[0].policy == "padp");
  CHECK(a.runs[0].horizon == 300);
  CHECK(a.runs[1].rep == 1);
  CHECK(a.runs[3].horizon == 600);
  CHECK(a.runs[9].policy == "binned-ucb(L=3)");
  CHECK(a.runs[0].seed == s.base_seed);
  check_accounting(a.runs);

  const auto agg = a.find("padp", 600);
  REQUIRE(agg);
  CHECK(agg->runs == 3);
  double mean = 0.0;
  for (int k = 3; k < 6; ++k) mean += a.runs[static_cast<std::size_t>(k)].simple_regret / 3.0;
  CHECK(agg->mean_simple == doctest::Approx(mean).epsilon(1e-14));
  CHECK_FALSE(a.find("padp", 123));
}

TEST_CASE("sink sees every run") {
  ExperimentSpec s = small_spec();
  s.horizons = {200, 400, 800};
  s.replications = 2;
  int seen = 0;
  RunOptions o;
  o.jobs = 2;
  o.sink = [&](const RunSummary& r, const RunRecord& rec) {
    CHECK(rec.horizon() == r.horizon);
    CHECK(rec.cumulative_regret() == r.cum_regret);
    ++seen;
  };
  run_experiment(s, o);
  CHECK(seen == 4 * 3 * 2);
}

TEST_CASE("single-bin run has analytic regret") {
  ExperimentSpec s = small_spec();
  PolicySpec p;
  p.kind = PolicyKind::kBinnedUcb;
  p.lipschitz = 1.0;
  p.n_intervals = 1;
  s.policies = {p};
  s.replications = 1;
  RunOptions o;
  o.jobs = 1;
  const auto r = run_experiment(s, o);
  const auto model = s.demand.build();
  const double gap =
      optimal_revenue(model, nullptr, s.oracle_resolution).revenue - 3.2 * mean_demand(model, 3.2);
  for (const auto& run : r.runs) {
    CHECK(run.simple_regret == doctest::Approx(gap).epsilon(1e-12));
  }
}

TEST_CASE("policy kinds all run") {
  ExperimentSpec s = preset("contextual-linear");
  s.horizons = {400, 800, 1600};
  s.replications = 1;
  RunOptions o;
  o.jobs = 1;
  const auto r = run_experiment(s, o);
  CHECK(r.runs.size() == 3);
  for (const auto& run : r.runs) CHECK(run.cum_regret >= 0.0);

  ExperimentSpec a = preset("adaptive");
  a.horizons = {20000, 30000, 40000};
  a.replications = 1;
  const auto ra = run_experiment(a, o);
  CHECK(ra.runs.size() == 6);
  CHECK(ra.find("adaptive-pipeline", 20000));

  ExperimentSpec any = small_spec();
  PolicySpec p;
  p.kind = PolicyKind::kPadpAnytime;
  any.policies = {p};
  any.replications = 1;
  const auto rn = run_experiment(any, o);
  CHECK(rn.runs.front().policy == "padp-anytime");
}

TEST_CASE("export formats") {
  const auto r = run_experiment(small_spec(), RunOptions{1, {}, {}});
  const std::string dir = std::string(PADP_BINARY_DIR);
  export_results(r.runs, "csv", dir + "/harness_export.csv");
  const auto back = read_csv_file(dir + "/harness_export.csv");
  CHECK(back.size() == r.runs.size());
  export_results(r.runs, "jsonl", dir + "/harness_export.jsonl");
  const std::string jl = slurp(dir + "/harness_export.jsonl");
  CHECK(std::count(jl.begin(), jl.end(), '\n') == static_cast<long>(r.runs.size()));
  CHECK_THROWS_AS(export_results(r.runs, "xml", dir + "/x.xml"), ValidationError);
  CHECK_THROWS_AS(read_csv_file(dir + "/does-not-exist.csv"), IoError);
}
