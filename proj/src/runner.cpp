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

#include "liact/runner.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <random>
#include <thread>

namespace liact {

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string csv_number(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

namespace {

bool ends_with(const std::string& s, const std::string& suffix) {
  return s.size() > suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

json finite_or_null(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

void compare(const json& want, const json& got, double tol, const std::string& where,
             std::vector<std::string>& out) {
  if (want.is_number()) {
    if (!got.is_number()) {
      out.push_back(where + ": expected a number, got " + got.dump());
    } else if (!(std::abs(want.get<double>() - got.get<double>()) <= tol)) {
      out.push_back(where + ": expected " + want.dump() + ", got " + got.dump());
    }
  } else if (want.is_array()) {
    if (!got.is_array() || got.size() != want.size()) {
      out.push_back(where + ": expected " + want.dump() + ", got " + got.dump());
      return;
    }
    for (std::size_t i = 0; i < want.size(); ++i) {
      compare(want[i], got[i], tol, where + "/" + std::to_string(i), out);
    }
  } else if (want.is_object()) {
    if (!got.is_object()) {
      out.push_back(where + ": expected an object, got " + got.dump());
      return;
    }
    for (auto it = want.begin(); it != want.end(); ++it) {
      const auto g = got.find(it.key());
      if (g == got.end()) {
        out.push_back(where + "/" + it.key() + ": missing");
      } else {
        compare(it.value(), *g, tol, where + "/" + it.key(), out);
      }
    }
  } else if (want != got) {
    out.push_back(where + ": expected " + want.dump() + ", got " + got.dump());
  }
}

Point point_from(const json& j, int N, const std::string& where) {
  if (!j.is_array()) throw SchemaError(where, "expected a point");
  Point m;
  for (std::size_t i = 0; i < j.size(); ++i) {
    m.push_back(supernumber_from_json(j[i], N, where + "/" + std::to_string(i)));
  }
  return m;
}

}  // namespace

std::vector<std::string> check_expectations(const json& expect, const json& actual,
                                            const Chart& chart, int num_generators) {
  std::vector<std::string> out;
  const double tol = expect.value("tol", 1e-9);
  for (auto it = expect.begin(); it != expect.end(); ++it) {
    const std::string& key = it.key();
    if (key == "tol") continue;
    const bool upper = ends_with(key, "_max");
    const bool lower = ends_with(key, "_min");
    if (upper || lower) {
      const std::string stem = key.substr(0, key.size() - 4);
      const auto g = actual.find(stem);
      if (g == actual.end() || !g->is_number() || !it->is_number()) {
        out.push_back("/" + stem + ": no number to bound");
        continue;
      }
      const double v = g->get<double>();
      const double b = it->get<double>();
      if (upper && !(v <= b)) out.push_back("/" + stem + ": " + g->dump() + " exceeds " + it->dump());
      if (lower && !(v >= b)) out.push_back("/" + stem + ": " + g->dump() + " below " + it->dump());
      continue;
    }
    const auto g = actual.find(key);
    if (g == actual.end()) {
      out.push_back("/" + key + ": missing");
      continue;
    }
    if ((key == "value" || key == "end") && it->is_array() && g->is_array()) {
      const Point want = point_from(*it, num_generators, "/expect/" + key);
      const Point got = point_from(*g, num_generators, "/" + key);
      if (want.size() != got.size()) {
        out.push_back("/" + key + ": dimension differs");
      } else if (!(point_distance(chart, want, got) <= tol)) {
        out.push_back("/" + key + ": expected " + it->dump() + ", got " + g->dump());
      }
      continue;
    }
    compare(*it, *g, tol, "/" + key, out);
  }
  return out;
}

int exit_code_for(const json& report) {
  bool failed = false;
  bool obstruction = false;
  for (const auto& r : report.at("results")) {
    const std::string s = r.at("status").get<std::string>();
    failed = failed || s == "failed" || s == "error";
    obstruction = obstruction || s == "obstruction";
  }
  if (failed) return exit_code::failed;
  if (obstruction) return exit_code::obstruction;
  return exit_code::ok;
}

namespace {

struct Outcome {
  std::string status = "ok";
  json result = json::object();
};

struct TaskEnv {
  const Scenario& sc;
  const TaskSpec& task;
  std::size_t index;
  std::uint64_t seed;
  const RunOptions& options;

  const ActionModel& model() const { return *sc.model; }
  double tol(double dflt) const { return task.raw.value("tol", dflt); }
};

json escape_json(const EscapeError& e) {
  const LeafSample& p = e.partial();
  return {{"escaped", true},
          {"t", p.t},
          {"stop", to_string(p.status)},
          {"partial_end", to_json(p.end)},
          {"message", e.what()}};
}

Outcome threshold(double value, const char* name, double tol) {
  Outcome o;
  o.result[name] = value;
  o.result["tolerance"] = tol;
  if (!(value <= tol)) o.status = "failed";
  return o;
}

Outcome run_validate(const TaskEnv& env) {
  const ValidationReport v =
      validate_representation(env.model().rep, env.task.samples, env.seed, env.sc.tolerances.residual);
  Outcome o;
  o.result = {{"passed", v.passed},
              {"residual", v.residual},
              {"method", v.method},
              {"worst", v.worst[0] < 0 ? json(nullptr) : json::array({v.worst[0] + 1, v.worst[1] + 1})},
              {"jacobi", v.jacobi},
              {"antisymmetry", v.antisymmetry},
              {"parity_consistency", v.parity_consistency},
              {"problems", v.problems}};
  if (!v.passed) o.status = "failed";
  return o;
}

Outcome run_act(const TaskEnv& env) {
  Outcome o;
  try {
    const ActionResult r = env.task.g ? act_local(env.model(), *env.task.g, *env.task.m)
                                      : act(env.model(), env.task.routes.front(), *env.task.m);
    o.result = {{"value", to_json(r.value)},
                {"escaped", false},
                {"error_estimate", finite_or_null(r.error_estimate)},
                {"mode", to_string(r.mode)},
                {"steps", r.steps},
                {"complete", r.diagnostics.complete},
                {"first_escape", finite_or_null(r.diagnostics.first_escape)}};
    if (env.model().group.model() == GroupModel::circle) {
      o.result["holonomy_flag"] = r.diagnostics.holonomy_flag;
      o.result["holonomy_displacement"] = r.diagnostics.holonomy_displacement;
    }
  } catch (const EscapeError& e) {
    o.status = "obstruction";
    o.result = escape_json(e);
  }
  return o;
}

Outcome run_orbit(const TaskEnv& env) {
  FlowOptions fo = env.model().flow;
  fo.record = true;
  const FlowResult r = flow(env.model().rep, *env.task.x, env.task.duration, *env.task.m,
                            env.model().sign, fo);
  json points = json::array();
  const std::size_t n = r.samples.size();
  std::size_t last = n;
  for (int k = 0; k <= env.task.samples && n > 0; ++k) {
    const std::size_t i = static_cast<std::size_t>(
        std::llround(static_cast<double>(k) * static_cast<double>(n - 1) / env.task.samples));
    if (i == last) continue;
    last = i;
    points.push_back({{"t", r.samples[i].t}, {"m", to_json(r.samples[i].m)}});
  }
  Outcome o;
  o.result = {{"complete", r.completed()},
              {"stop", to_string(r.status)},
              {"t", r.t},
              {"end", to_json(r.m)},
              {"winding", r.winding},
              {"steps", r.steps},
              {"mode", to_string(r.mode)},
              {"points", points}};
  return o;
}

json holonomy_json(const ActionModel& model, const Point& m) {
  GroupPath turn(model.group);
  turn.add_exp(AlgebraElement::basis(1, 0, model.group.num_generators()));
  try {
    const HolonomyResult h = holonomy(model.rep, turn, m, model.sign, model.flow);
    return {{"displacement", h.displacement},
            {"winding", h.winding},
            {"soul_shift", h.soul_shift},
            {"trivial", h.trivial},
            {"end", to_json(h.end)}};
  } catch (const EscapeError& e) {
    return escape_json(e);
  }
}

Outcome run_diagnose(const TaskEnv& env) {
  const ActionModel& model = env.model();
  const Chart& chart = model.rep.chart();
  std::vector<std::vector<double>> points = env.task.points;
  if (points.empty()) {
    std::mt19937_64 rng(env.seed);
    for (int i = 0; i < env.task.samples; ++i) points.push_back(chart.sample(rng));
  }
  const CompletenessReport c =
      completeness_probe(model.rep, env.task.directions, points, env.task.horizon, model.sign, model.flow);
  json escapes = json::array();
  for (const auto& e : c.escapes) {
    if (escapes.size() == 32) break;
    escapes.push_back({{"direction", e.direction},
                       {"start", e.start},
                       {"time", e.time},
                       {"end", e.end},
                       {"stop", to_string(e.status)}});
  }
  Outcome o;
  o.result = {{"complete", c.complete},
              {"horizon", c.horizon},
              {"trajectories", c.trajectories},
              {"escape_count", c.escapes.size()},
              {"first_escape", finite_or_null(c.first_escape())},
              {"escapes", escapes}};
  if (model.group.model() == GroupModel::circle && !points.empty()) {
    o.result["holonomy"] =
        holonomy_json(model, real_point(points.front(), chart.n1(), model.rep.num_generators()));
  }
  return o;
}

std::string leaf_csv_name(const TaskEnv& env) {
  if (!env.task.csv.empty()) return env.task.csv;
  return env.sc.name + "_task" + std::to_string(env.index) + "_leaf.csv";
}

void write_leaf(const TaskEnv& env, const std::vector<const LeafPoint*>& rows,
                const std::string& name) {
  const Chart& chart = env.model().rep.chart();
  const int d = env.model().group.dim();
  const std::filesystem::path dir = env.options.out_dir;
  std::ofstream csv(dir / name, std::ios::binary);
  if (!csv) throw Error("cannot write " + (dir / name).string());
  csv << "t";
  for (int i = 0; i < d; ++i) csv << ",g" << (i + 1);
  for (int c = 0; c < chart.n0(); ++c) csv << ',' << csv_field(chart.name(c));
  csv << "\r\n";
  for (const LeafPoint* p : rows) {
    csv << csv_number(p->t);
    for (double g : p->g) csv << ',' << csv_number(g);
    for (int c = 0; c < chart.n0(); ++c) csv << ',' << csv_number(p->m[c].body());
    csv << "\r\n";
  }
  if (env.model().rep.num_generators() == 0) return;
  json souls = json::array();
  for (const LeafPoint* p : rows) {
    json m = json::array();
    for (const auto& s : p->m) m.push_back(to_json(s.soul()));
    souls.push_back({{"t", p->t}, {"soul", m}});
  }
  json names = json::array();
  for (int c = 0; c < chart.size(); ++c) names.push_back(chart.name(c));
  std::ofstream js(dir / (name + ".souls.json"), std::ios::binary);
  if (!js) throw Error("cannot write " + (dir / (name + ".souls.json")).string());
  js << json{{"coordinates", names}, {"rows", souls}}.dump(2) << "\n";
}

Outcome run_leaf(const TaskEnv& env) {
  const ActionModel& model = env.model();
  const Chart& chart = model.rep.chart();
  FlowOptions fo = model.flow;
  fo.record = true;
  const LeafSample l = lift_path(model.rep, env.task.routes.front(), *env.task.m, model.sign, fo);
  std::vector<const LeafPoint*> rows;
  for (std::size_t i = 0; i < l.points.size(); ++i) {
    if (i % env.task.stride == 0 || i + 1 == l.points.size()) rows.push_back(&l.points[i]);
  }
  json slope = nullptr;  // [min, max] of dm1/dg1 between consecutive rows
  if (chart.n0() > 0 && model.group.dim() > 0) {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (std::size_t i = 1; i < l.points.size(); ++i) {
      const double dg = l.points[i].g[0] - l.points[i - 1].g[0];
      if (std::abs(dg) <= 1e-12) continue;
      const double s = (l.points[i].m[0].body() - l.points[i - 1].m[0].body()) / dg;
      lo = std::min(lo, s);
      hi = std::max(hi, s);
    }
    if (lo <= hi) slope = json::array({lo, hi});
  }
  const std::string name = leaf_csv_name(env);
  if (env.options.write_files) write_leaf(env, rows, name);
  Outcome o;
  o.result = {{"csv", name},
              {"rows", rows.size()},
              {"escaped", !l.completed()},
              {"stop", to_string(l.status)},
              {"t", l.t},
              {"end", to_json(l.end)},
              {"g_end", l.points.empty() ? json(nullptr) : json(l.points.back().g)},
              {"winding", l.winding},
              {"steps", l.steps},
              {"mode", to_string(l.mode)},
              {"closure", point_distance(chart, l.end, *env.task.m)},
              {"slope", slope}};
  if (!l.completed()) {
    o.status = "obstruction";
    o.result["message"] = l.message;
  }
  return o;
}

Outcome run_holonomy(const TaskEnv& env) {
  const ActionModel& model = env.model();
  Outcome o;
  try {
    const HolonomyResult h =
        holonomy(model.rep, env.task.routes.front(), *env.task.m, model.sign, model.flow);
    o.result = {{"escaped", false},
                {"displacement", h.displacement},
                {"winding", h.winding},
                {"soul_shift", h.soul_shift},
                {"trivial", h.trivial},
                {"end", to_json(h.end)}};
  } catch (const EscapeError& e) {
    o.status = "obstruction";
    o.result = escape_json(e);
  }
  return o;
}

Outcome run_path_independence(const TaskEnv& env) {
  const ActionModel& model = env.model();
  const double tol = env.tol(1e-8);
  Outcome o;
  try {
    if (env.task.random == 0) {
      const PathIndependence p = path_independence(model, *env.task.g, env.task.routes, *env.task.m);
      o = threshold(p.spread, "spread", tol);
      json ends = json::array();
      for (const auto& e : p.endpoints) ends.push_back(to_json(e));
      o.result["endpoints"] = ends;
      return o;
    }
    std::mt19937_64 rng(env.seed);
    const Group& g = model.group;
    double spread = 0.0;
    for (int i = 0; i < env.task.random; ++i) {
      const GroupElement target = g.exp(random_element(model, rng, 1.0));
      const AlgebraElement y = random_element(model, rng, 1.0);
      const AlgebraElement x = g.log(g.multiply(target, g.exp(-1.0 * y)));
      GroupPath direct(g);
      direct.add_exp(g.log(target));
      const PathIndependence p =
          path_independence(model, target, {direct, GroupPath::word(g, {x, y})}, *env.task.m);
      spread = std::max(spread, p.spread);
    }
    o = threshold(spread, "spread", tol);
    o.result["pairs"] = env.task.random;
  } catch (const EscapeError& e) {
    o.status = "obstruction";
    o.result = escape_json(e);
  }
  return o;
}

Outcome dispatch(const TaskEnv& env) {
  const ActionModel& model = env.model();
  switch (env.task.kind) {
    case TaskKind::validate: return run_validate(env);
    case TaskKind::act: return run_act(env);
    case TaskKind::orbit: return run_orbit(env);
    case TaskKind::diagnose: return run_diagnose(env);
    case TaskKind::leaf: return run_leaf(env);
    case TaskKind::holonomy: return run_holonomy(env);
    case TaskKind::recover_rho: {
      Outcome o = threshold(recover_rho(model, env.task.samples, env.task.h, env.seed), "deviation",
                            env.tol(1e-6));
      o.result["samples"] = env.task.samples;
      o.result["h"] = env.task.h;
      return o;
    }
    case TaskKind::group_law: {
      Outcome o = threshold(verify_group_law(model, env.task.trials, env.task.word_length, env.seed),
                            "residual", env.tol(1e-8));
      o.result["trials"] = env.task.trials;
      return o;
    }
    case TaskKind::path_independence: return run_path_independence(env);
    case TaskKind::sign_duality: {
      Outcome o = threshold(sign_duality(model, env.task.trials, env.seed), "deviation", env.tol(1e-8));
      o.result["trials"] = env.task.trials;
      return o;
    }
  }
  throw Error("unhandled task kind");
}

json run_task(const TaskEnv& env) {
  json entry = {{"index", env.index}, {"kind", to_string(env.task.kind)}};
  try {
    Outcome o = dispatch(env);
    if (!env.task.expect.is_null()) {
      const auto mismatches = check_expectations(env.task.expect, o.result, env.model().rep.chart(),
                                                 env.sc.grassmann_n);
      o.status = mismatches.empty() ? "ok" : "failed";
      if (!mismatches.empty()) entry["mismatches"] = mismatches;
    }
    entry["status"] = o.status;
    entry["result"] = std::move(o.result);
  } catch (const std::exception& e) {
    entry["status"] = "error";
    entry["error"] = e.what();
  }
  return entry;
}

}  // namespace

RunResult run_scenario(const Scenario& scenario, const RunOptions& options) {
  const std::uint64_t seed = options.seed.value_or(scenario.seed);
  const std::size_t n = scenario.tasks.size();
  std::vector<json> results(n);
  if (options.write_files) std::filesystem::create_directories(options.out_dir);

  auto work = [&](std::size_t i) {
    const TaskEnv env{scenario, scenario.tasks[i], i, seed + i, options};
    results[i] = run_task(env);
  };
  const std::size_t jobs = std::min<std::size_t>(std::max(options.jobs, 1), std::max<std::size_t>(n, 1));
  if (jobs <= 1) {
    for (std::size_t i = 0; i < n; ++i) work(i);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < jobs; ++w) {
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < n; i = next++) work(i);
      });
    }
    for (auto& t : pool) t.join();
  }

  RunResult out;
  out.report = {{"scenario", scenario.name}, {"seed", seed}, {"results", results}};
  out.exit_code = exit_code_for(out.report);
  if (options.write_files) {
    out.report_path = options.out_dir / (scenario.name + ".report.json");
    std::ofstream f(out.report_path, std::ios::binary);
    if (!f) throw Error("cannot write " + out.report_path.string());
    f << out.report.dump(2) << "\n";
  }
  return out;
}

}  // namespace liact
