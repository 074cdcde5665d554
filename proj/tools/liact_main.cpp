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

// liact run <scenario.json> [--out DIR] [--seed K] [--jobs N]
// liact canonical <scenario.json>

#include <cstdlib>
#include <iostream>

#include <spdlog/sinks/stdout_sinks.h>
#include <spdlog/spdlog.h>

#include "CLI11.hpp"
#include "liact/runner.hpp"

namespace {

void setup_logging() {
  auto logger = spdlog::stderr_logger_mt("liact");
  logger->set_pattern("liact: %l: %v");
  spdlog::set_default_logger(logger);
  spdlog::set_level(spdlog::level::warn);
  if (const char* lvl = std::getenv("LIACT_LOG")) {
    spdlog::set_level(spdlog::level::from_str(lvl));
  }
}

int run(const std::string& path, const liact::RunOptions& options) {
  liact::Scenario scenario;
  try {
    scenario = liact::load_scenario_file(path);
  } catch (const liact::Error& e) {
    spdlog::error("{}", e.what());
    return liact::exit_code::io_or_schema;
  }
  spdlog::info("{}: {} tasks, seed {}", scenario.name, scenario.tasks.size(),
               options.seed.value_or(scenario.seed));
  liact::RunResult r;
  try {
    r = liact::run_scenario(scenario, options);
  } catch (const std::exception& e) {
    spdlog::error("{}", e.what());
    return liact::exit_code::io_or_schema;
  }
  for (const auto& t : r.report["results"]) {
    const std::string status = t["status"].get<std::string>();
    std::cout << "task " << t["index"].get<int>() << " " << t["kind"].get<std::string>() << ": "
              << status << "\n";
    if (t.contains("error")) spdlog::warn("task {}: {}", t["index"].get<int>(), t["error"].get<std::string>());
    if (t.contains("mismatches")) {
      for (const auto& m : t["mismatches"]) spdlog::warn("task {}: {}", t["index"].get<int>(), m.get<std::string>());
    }
  }
  std::cout << "report: " << r.report_path.string() << "\n";
  return r.exit_code;
}

int canonical(const std::string& path) {
  try {
    std::cout << liact::to_json(liact::load_scenario_file(path)).dump(2) << "\n";
  } catch (const liact::Error& e) {
    spdlog::error("{}", e.what());
    return liact::exit_code::io_or_schema;
  }
  return liact::exit_code::ok;
}

}  // namespace

int main(int argc, char** argv) {
  setup_logging();
  CLI::App app{"Reconstruct Lie group actions from Lie algebra representations"};
  app.require_subcommand(1);

  std::string scenario_path;
  std::string out_dir = ".";
  std::uint64_t seed = 0;
  int jobs = 1;
  auto* run_cmd = app.add_subcommand("run", "run the tasks of a scenario");
  run_cmd->add_option("scenario", scenario_path, "scenario JSON file")->required();
  run_cmd->add_option("--out", out_dir, "directory for the report and CSV files");
  auto* seed_opt = run_cmd->add_option("--seed", seed, "override the scenario seed");
  run_cmd->add_option("--jobs", jobs, "tasks run concurrently")->check(CLI::PositiveNumber);

  std::string canon_path;
  auto* canon_cmd = app.add_subcommand("canonical", "print the canonical form of a scenario");
  canon_cmd->add_option("scenario", canon_path, "scenario JSON file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : liact::exit_code::io_or_schema;
  }

  if (*canon_cmd) return canonical(canon_path);
  liact::RunOptions options;
  options.out_dir = out_dir;
  options.jobs = jobs;
  if (*seed_opt) options.seed = seed;
  return run(scenario_path, options);
}
