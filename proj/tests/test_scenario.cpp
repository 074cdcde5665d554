// Copyright 2026 The liact Authors.
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

#include <gtest/gtest.h>

#include <fstream>
#include <random>
#include <sstream>

#include "liact/runner.hpp"

#ifndef LIACT_SOURCE_DIR
#error "LIACT_SOURCE_DIR must point at the source tree"
#endif

namespace liact {
namespace {

namespace fs = std::filesystem;

const fs::path kScenarios = fs::path(LIACT_SOURCE_DIR) / "scenarios";

std::vector<fs::path> shipped() {
  std::vector<fs::path> out;
  for (const auto& e : fs::directory_iterator(kScenarios)) {
    if (e.path().extension() == ".json") out.push_back(e.path());
  }
  std::sort(out.begin(), out.end());
  return out;
}

json minimal() {
  return json::parse(R"({
    "name": "t",
    "params": {"lambda": 0.5},
    "algebra": {"dim": 1},
    "group": {"model": "euclidean"},
    "chart": {"even": ["x"]},
    "rho": [["lambda"]],
    "tasks": []
  })");
}

std::string pointer_of(const json& j) {
  try {
    load_scenario(j);
  } catch (const SchemaError& e) {
    return e.pointer();
  }
  return "<accepted>";
}

fs::path temp_dir(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("liact_test_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

RunOptions no_files() {
  RunOptions o;
  o.write_files = false;
  return o;
}

TEST(Scenario, ShippedScenariosLoad) {
  const auto files = shipped();
  EXPECT_GE(files.size(), 9u);
  for (const auto& f : files) {
    SCOPED_TRACE(f.filename().string());
    EXPECT_NO_THROW(load_scenario_file(f));
  }
}

TEST(Scenario, CanonicalRoundTrip) {
  for (const auto& f : shipped()) {
    SCOPED_TRACE(f.filename().string());
    const Scenario a = load_scenario_file(f);
    const json canon = to_json(a);
    const Scenario b = load_scenario(canon);
    EXPECT_EQ(to_json(b), canon);
    ASSERT_EQ(a.rep().dim(), b.rep().dim());
    for (int i = 0; i < a.rep().dim(); ++i) {
      const auto& ca = a.rep().field(i).components;
      const auto& cb = b.rep().field(i).components;
      ASSERT_EQ(ca.size(), cb.size());
      for (std::size_t c = 0; c < ca.size(); ++c) EXPECT_TRUE(ca[c] == cb[c]);
    }
    EXPECT_EQ(a.group().algebra(), b.group().algebra());
    EXPECT_EQ(a.tasks.size(), b.tasks.size());
  }
}

TEST(Scenario, ShippedScenariosPass) {
  for (const auto& f : shipped()) {
    SCOPED_TRACE(f.filename().string());
    const RunResult r = run_scenario(load_scenario_file(f), no_files());
    EXPECT_EQ(r.exit_code, exit_code::ok) << r.report.dump(2);
  }
}

TEST(Scenario, Example5Act) {
  const RunResult r = run_scenario(load_scenario_file(kScenarios / "example5.json"), no_files());
  const json& act = r.report["results"][1];
  EXPECT_EQ(act["kind"], "act");
  EXPECT_NEAR(act["result"]["value"][0].get<double>(), 1.1, 1e-9);
}

TEST(Scenario, Example1MarksIncompleteness) {
  const RunResult r = run_scenario(load_scenario_file(kScenarios / "example1.json"), no_files());
  const json& d = r.report["results"][1];
  EXPECT_EQ(d["status"], "ok");
  EXPECT_FALSE(d["result"]["complete"].get<bool>());
  EXPECT_GT(d["result"]["escapes"].size(), 0u);
  EXPECT_NEAR(d["result"]["first_escape"].get<double>(), 0.5, 1e-3);
}

TEST(Scenario, SchemaPointers) {
  json j = minimal();
  j["tasks"] = json::array({{{"kind", "integrate"}}});
  EXPECT_EQ(pointer_of(j), "/tasks/0/kind");

  j = minimal();
  j["rho"] = json::array({json::array({"lambda", "1"})});
  EXPECT_EQ(pointer_of(j), "/rho/0");

  j = minimal();
  j["rho"] = json::array({json::array({"x +* 2"})});
  EXPECT_EQ(pointer_of(j), "/rho/0/0");

  j = minimal();
  j["grassmann_N"] = 1;
  j["algebra"] = {{"dim", 1}, {"parities", {"odd"}}};
  j["group"] = {{"model", "nilpotent_exp"}, {"class", 1}};
  j["chart"] = {{"even", {"x"}}, {"odd", {"theta"}}};
  j["rho"] = json::array({json::array({"sin(theta)", "1"})});
  EXPECT_EQ(pointer_of(j), "/rho/0/0");

  j = minimal();
  j.erase("chart");
  EXPECT_EQ(pointer_of(j), "/chart");

  j = minimal();
  j["algebra"] = {{"dim", 2}, {"brackets", {{{"i", 1}, {"j", 3}, {"coeffs", {{"1", 1.0}}}}}}};
  EXPECT_EQ(pointer_of(j), "/algebra/brackets/0/j");

  j = minimal();
  j["fundamental_sign"] = 0;
  EXPECT_EQ(pointer_of(j), "/fundamental_sign");

  j = minimal();
  j["tasks"] = json::array({{{"kind", "act"}, {"m", {0.0}}}});
  EXPECT_EQ(pointer_of(j), "/tasks/0");

  j = minimal();
  j["tasks"] = json::array({{{"kind", "act"}, {"g", {1.0, 2.0}}, {"m", {0.0}}}});
  EXPECT_EQ(pointer_of(j), "/tasks/0/g");

  j = minimal();
  j["tasks"] = json::array({{{"kind", "validate"}, {"sample", 3}}});
  EXPECT_EQ(pointer_of(j), "/tasks/0/sample");

  j = minimal();
  j["chart"]["domain"] = {{"x", {0.0, 1.0}}};
  j["tasks"] = json::array({{{"kind", "act"}, {"g", {0.1}}, {"m", {2.0}}}});
  EXPECT_EQ(pointer_of(j), "/tasks/0/m");

  j = minimal();
  j["group"] = {{"model", "euclidean"}};
  j["algebra"] = {{"dim", 2}, {"brackets", {{{"i", 1}, {"j", 2}, {"coeffs", {{"2", 1.0}}}}}}};
  j["rho"] = json::array({json::array({"0"}), json::array({"0"})});
  EXPECT_EQ(pointer_of(j), "/group/model");

  j = minimal();
  j["tasks"] = json::array({{{"kind", "holonomy"}, {"loop", {{"word", {{0.5}}}}}, {"m", {0.0}}}});
  EXPECT_EQ(pointer_of(j), "/tasks/0/loop");

  j = minimal();
  j["grassmann_N"] = 1;
  j["tasks"] = json::parse(
      R"([{"kind": "act", "g": {"exp": [{"terms": [{"subset": [2], "coeff": 1.0}]}]}, "m": [0.0]}])");
  EXPECT_EQ(pointer_of(j), "/tasks/0/g/exp/0/terms/0/subset/0");
}

TEST(Scenario, OddCoefficientOnEvenBasisRejected) {
  json j = minimal();
  j["grassmann_N"] = 1;
  j["tasks"] = json::parse(
      R"([{"kind": "act", "g": {"exp": [{"terms": [{"subset": [1], "coeff": 1.0}]}]}, "m": [0.0]}])");
  EXPECT_EQ(pointer_of(j), "/tasks/0/g/exp");
}

TEST(Scenario, MalformedJsonReportsOffset) {
  const fs::path dir = temp_dir("malformed");
  const fs::path f = dir / "bad.json";
  std::ofstream(f) << "{\"name\": \"x\",, }";
  try {
    load_scenario_file(f);
    FAIL() << "expected a parse error";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.offset(), 13u);
  }
  EXPECT_THROW(load_scenario_file(dir / "missing.json"), Error);
}

TEST(Scenario, ExitCodes) {
  // unexpected escape in an act task
  json j = minimal();
  j["chart"]["domain"] = {{"x", {0.0, 1.0}}};
  j["tasks"] = json::array({{{"kind", "act"}, {"g", {2.0}}, {"m", {0.5}}}});
  RunResult r = run_scenario(load_scenario(j), no_files());
  EXPECT_EQ(r.report["results"][0]["status"], "obstruction");
  EXPECT_EQ(r.exit_code, exit_code::obstruction);

  // bracket relation violated: [e1, e2] = e2 needs rho(e1) = -x d/dx here
  j = json::parse(slurp(kScenarios / "affine.json"));
  j["rho"][0][0] = "x";
  j["tasks"] = json::array({{{"kind", "validate"}}});
  r = run_scenario(load_scenario(j), no_files());
  EXPECT_EQ(r.report["results"][0]["status"], "failed");
  EXPECT_EQ(r.report["results"][0]["result"]["worst"], json::array({1, 2}));
  EXPECT_EQ(r.exit_code, exit_code::failed);

  // a failure outranks an obstruction
  j = minimal();
  j["chart"]["domain"] = {{"x", {0.0, 1.0}}};
  j["tasks"] = json::array({{{"kind", "act"}, {"g", {2.0}}, {"m", {0.5}}},
                            {{"kind", "act"}, {"g", {0.1}}, {"m", {0.5}}, {"expect", {{"value", {0.9}}}}}});
  r = run_scenario(load_scenario(j), no_files());
  EXPECT_EQ(r.report["results"][1]["status"], "failed");
  EXPECT_EQ(r.exit_code, exit_code::failed);

  // an expected escape is fine
  j = minimal();
  j["chart"]["domain"] = {{"x", {0.0, 1.0}}};
  j["tasks"] = json::array({{{"kind", "act"}, {"g", {2.0}}, {"m", {0.5}}, {"expect", {{"escaped", true}}}}});
  EXPECT_EQ(run_scenario(load_scenario(j), no_files()).exit_code, exit_code::ok);
}

TEST(Scenario, ThresholdTasks) {
  json j = json::parse(slurp(kScenarios / "heisenberg.json"));
  j["fundamental_sign"] = 1;
  j["tasks"] = json::array({{{"kind", "group_law"}, {"trials", 20}}});
  const RunResult r = run_scenario(load_scenario(j), no_files());
  EXPECT_EQ(r.report["results"][0]["status"], "failed");
  EXPECT_GT(r.report["results"][0]["result"]["residual"].get<double>(), 1e-3);
}

TEST(Scenario, Determinism) {
  const Scenario s = load_scenario_file(kScenarios / "heisenberg.json");
  const json a = run_scenario(s, no_files()).report;
  const json b = run_scenario(s, no_files()).report;
  EXPECT_EQ(a.dump(), b.dump());
  RunOptions par = no_files();
  par.jobs = 4;
  EXPECT_EQ(run_scenario(s, par).report.dump(), a.dump());
  RunOptions other = no_files();
  other.seed = 7;
  const json c = run_scenario(s, other).report;
  EXPECT_EQ(c["seed"], 7);
  EXPECT_NE(c.dump(), a.dump());
}

TEST(Scenario, ReportFileIsWritten) {
  RunOptions o;
  o.out_dir = temp_dir("report");
  const RunResult a = run_scenario(load_scenario_file(kScenarios / "example4_rational.json"), o);
  ASSERT_TRUE(fs::exists(a.report_path));
  const std::string first = slurp(a.report_path);
  EXPECT_EQ(json::parse(first), a.report);
  const RunResult b = run_scenario(load_scenario_file(kScenarios / "example4_rational.json"), o);
  EXPECT_EQ(slurp(b.report_path), first);
}

TEST(Scenario, LeafCsv) {
  RunOptions o;
  o.out_dir = temp_dir("leaf");
  const RunResult r = run_scenario(load_scenario_file(kScenarios / "example4_rational.json"), o);
  const json& leaf = r.report["results"][1]["result"];
  const std::string csv = slurp(o.out_dir / leaf["csv"].get<std::string>());
  std::istringstream in(csv);
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "t,g1,x\r");
  std::size_t rows = 0;
  std::string last;
  while (std::getline(in, line)) {
    ++rows;
    last = line;
  }
  EXPECT_EQ(rows, leaf["rows"].get<std::size_t>());
  EXPECT_EQ(rows, leaf["steps"].get<std::size_t>() + 1);
  // unwrapped coordinates: 3 turns in G, x advanced by 2
  std::istringstream cells(last);
  std::vector<double> v;
  for (std::string cell; std::getline(cells, cell, ',');) v.push_back(std::stod(cell));
  ASSERT_EQ(v.size(), 3u);
  EXPECT_NEAR(v[0], 3.0, 1e-12);
  EXPECT_NEAR(v[1], 3.0, 1e-12);
  EXPECT_NEAR(v[2], 2.25, 1e-6);
}

TEST(Scenario, PartialCsvOnEscape) {
  RunOptions o;
  o.out_dir = temp_dir("partial");
  const RunResult r = run_scenario(load_scenario_file(kScenarios / "example2.json"), o);
  const json& leaf = r.report["results"][1];
  EXPECT_EQ(leaf["status"], "ok");  // the escape is expected
  EXPECT_TRUE(leaf["result"]["escaped"].get<bool>());
  EXPECT_NEAR(leaf["result"]["t"].get<double>(), 1.8, 1e-6);
  EXPECT_GT(leaf["result"]["rows"].get<int>(), 1);
  EXPECT_TRUE(fs::exists(o.out_dir / "example2_two_turns.csv"));
}

TEST(Scenario, SuperLeafCompanion) {
  RunOptions o;
  o.out_dir = temp_dir("super");
  run_scenario(load_scenario_file(kScenarios / "supertranslation.json"), o);
  const json souls = json::parse(slurp(o.out_dir / "supertranslation_leaf.csv.souls.json"));
  EXPECT_EQ(souls["coordinates"], json::array({"x", "theta"}));
  const json& end = souls["rows"].back()["soul"];
  // theta = theta2 + t theta1 at t = 1
  const Supernumber th = supernumber_from_json(end[1], 2, "");
  EXPECT_NEAR(th[0b01], 1.0, 1e-12);
  EXPECT_NEAR(th[0b10], 1.0, 1e-12);
}

TEST(Scenario, CsvFormatting) {
  EXPECT_EQ(csv_field("x"), "x");
  EXPECT_EQ(csv_field("a,b"), "\"a,b\"");
  EXPECT_EQ(csv_field("say \"hi\""), "\"say \"\"hi\"\"\"");
  EXPECT_EQ(csv_field("a\nb"), "\"a\nb\"");
  EXPECT_EQ(csv_number(0.1), "0.10000000000000001");
  EXPECT_EQ(csv_number(2.0), "2");
  EXPECT_EQ(std::stod(csv_number(1.0 / 3.0)), 1.0 / 3.0);
}

TEST(Scenario, Expectations) {
  Chart periodic({"x"}, {});
  periodic.set_periodic(0);
  const json actual = {{"value", {0.999999999999}}, {"residual", 1e-9}, {"flag", true}, {"w", {1, 2}}};
  EXPECT_TRUE(check_expectations({{"value", {0.0}}}, actual, periodic, 0).empty());
  EXPECT_EQ(check_expectations({{"value", {0.0}}}, actual, Chart({"x"}, {}), 0).size(), 1u);
  EXPECT_TRUE(check_expectations({{"residual_max", 1e-8}}, actual, periodic, 0).empty());
  EXPECT_EQ(check_expectations({{"residual_max", 1e-10}}, actual, periodic, 0).size(), 1u);
  EXPECT_EQ(check_expectations({{"residual_min", 1e-8}}, actual, periodic, 0).size(), 1u);
  EXPECT_EQ(check_expectations({{"flag", false}}, actual, periodic, 0).size(), 1u);
  EXPECT_EQ(check_expectations({{"absent", 1}}, actual, periodic, 0).size(), 1u);
  EXPECT_TRUE(check_expectations({{"w", {1, 2}}}, actual, periodic, 0).empty());
  EXPECT_EQ(check_expectations({{"w", {1}}}, actual, periodic, 0).size(), 1u);
}

// Random supernumbers survive to_json / supernumber_from_json bit for bit.
TEST(Scenario, SupernumberJsonRoundTrip) {
  std::mt19937_64 rng(21);
  std::uniform_int_distribution<int> gens(0, 5);
  std::uniform_real_distribution<double> coeff(-10.0, 10.0);
  std::bernoulli_distribution keep(0.4);
  for (int t = 0; t < 200; ++t) {
    const int N = gens(rng);
    Supernumber s(N);
    for (Mask m = 0; m < s.size(); ++m) {
      if (keep(rng)) s[m] = coeff(rng);
    }
    const json j = json::parse(to_json(s).dump());
    EXPECT_EQ(supernumber_from_json(j, N, ""), s);
  }
}

}  // namespace
}  // namespace liact
