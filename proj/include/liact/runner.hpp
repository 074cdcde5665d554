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

#ifndef LIACT_RUNNER_HPP
#define LIACT_RUNNER_HPP

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>

#include "liact/scenario.hpp"

namespace liact {

namespace exit_code {
inline constexpr int ok = 0;
inline constexpr int io_or_schema = 1;
inline constexpr int failed = 2;
inline constexpr int obstruction = 3;
}  // namespace exit_code

struct RunOptions {
  std::filesystem::path out_dir = ".";  // report and CSV files
  std::optional<std::uint64_t> seed;    // overrides the scenario seed
  int jobs = 1;
  bool write_files = true;
};

struct RunResult {
  json report;  // {"scenario", "seed", "results": [...]}
  int exit_code = exit_code::ok;
  std::filesystem::path report_path;  // empty when nothing was written
};

/// Runs every task; the report is ordered by task index whatever `jobs` is.
/// Task seeds are seed + index.
RunResult run_scenario(const Scenario& scenario, const RunOptions& options);

/// Status of one task: "ok", "failed", "obstruction" or "error".
/// Exit code: 2 if any task failed or errored, else 3 if any obstruction.
int exit_code_for(const json& report);

/// Checks `actual` against an expectation block; returns the mismatches.
/// Keys ending in _max / _min bound the field of the same stem; "tol"
/// (default 1e-9) is the absolute tolerance for numbers.
std::vector<std::string> check_expectations(const json& expect, const json& actual,
                                            const Chart& chart, int num_generators);

/// RFC 4180 field: quoted when it contains a comma, quote or line break.
std::string csv_field(const std::string& s);
/// 17 significant digits, '.' decimal point.
std::string csv_number(double x);

}  // namespace liact

#endif  // LIACT_RUNNER_HPP
