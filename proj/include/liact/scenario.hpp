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

// Scenario files: algebra, group, chart, representation and a task list.
// The schema is documented in docs/scenarios.md.

#ifndef LIACT_SCENARIO_HPP
#define LIACT_SCENARIO_HPP

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "liact/action.hpp"

namespace liact {

using nlohmann::json;

enum class TaskKind {
  validate,
  act,
  orbit,
  diagnose,
  leaf,
  holonomy,
  recover_rho,
  group_law,
  path_independence,
  sign_duality,
};
const char* to_string(TaskKind k);

/// A task with its parameters resolved against the scenario.
struct TaskSpec {
  TaskKind kind = TaskKind::validate;
  json raw;     // as written
  json expect;  // null when absent

  std::optional<Point> m;
  std::optional<GroupElement> g;
  std::vector<GroupPath> routes;  // act / leaf / holonomy: one; path_independence: several
  std::optional<AlgebraElement> x;
  std::vector<std::vector<double>> directions;
  std::vector<std::vector<double>> points;
  double horizon = 10.0;
  double duration = 1.0;
  double h = 1e-4;
  int samples = 0;
  int trials = 0;
  int word_length = 4;
  int stride = 1;
  int random = 0;
  std::string csv;
};

struct Tolerances {
  double rtol = 1e-10;
  double atol = 1e-10;
  double max_step = 0.0;  // 0: unlimited
  long max_steps = 1'000'000;
  double residual = 1e-12;
};

struct Scenario {
  std::string name;
  int grassmann_n = 0;
  std::uint64_t seed = 0;
  int sign = -1;
  std::vector<std::pair<std::string, double>> params;
  json group_spec;
  std::vector<std::vector<std::string>> rho_src;
  Tolerances tolerances;
  std::optional<ActionModel> model;
  std::vector<TaskSpec> tasks;

  const Representation& rep() const { return model->rep; }
  const Group& group() const { return model->group; }
};

/// Throws SchemaError (with a JSON pointer) or ParseError.
Scenario load_scenario(const json& j);
/// Throws ParseError with the byte offset for malformed JSON.
Scenario load_scenario_file(const std::filesystem::path& path);
json parse_json_file(const std::filesystem::path& path);

/// Canonical form: parsed structures re-serialized, expressions printed in
/// normal form, tasks as written.
json to_json(const Scenario& s);

json to_json(const Supernumber& s);
json to_json(const Point& m);
json to_json(const AlgebraElement& x);
Supernumber supernumber_from_json(const json& j, int num_generators, const std::string& pointer);

}  // namespace liact

#endif  // LIACT_SCENARIO_HPP
