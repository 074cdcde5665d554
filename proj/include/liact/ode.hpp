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

// Adaptive Dormand-Prince 5(4) integrator with chart-boundary handling.

#ifndef LIACT_ODE_HPP
#define LIACT_ODE_HPP

#include <cstddef>
#include <functional>
#include <limits>
#include <string>
#include <vector>

namespace liact {

using State = std::vector<double>;

struct OdeOptions {
  double rtol = 1e-10;
  double atol = 1e-10;
  double max_step = std::numeric_limits<double>::infinity();
  long max_steps = 1'000'000;
  double blow_up = 1e8;          // |y_i| above this on a control index stops
  double boundary_tol = 1e-9;    // margin below this after a step means escape
  double min_step_ratio = 1e-14; // relative to the span
};

enum class OdeStatus { completed, escaped, blow_up, step_underflow, max_steps };
const char* to_string(OdeStatus s);

struct OdeProblem {
  /// dy = f(t, y). May throw DomainError (the step is then rejected).
  std::function<void(double t, const State& y, State& dy)> rhs;
  /// Distance of y to the domain boundary; positive inside. Optional.
  std::function<double(const State& y)> margin;
  /// Indices used for the error norm and the blow-up test; empty means all.
  std::vector<std::size_t> control;
  /// Indices with period 1, reduced to [0,1) after each accepted step.
  std::vector<std::size_t> periodic;
};

/// Accepted step as seen by observers. `y` is reduced; `winding[k]` counts
/// the integer shifts removed from periodic index k so far.
struct OdeStep {
  double t;
  const State& y;
  const State& dy;
  const std::vector<long>& winding;
};

struct OdeResult {
  OdeStatus status = OdeStatus::completed;
  double t = 0.0;
  State y;
  std::vector<long> winding;  // parallel to OdeProblem::periodic
  long accepted = 0;
  long rejected = 0;
  std::string message;
};

OdeResult integrate(const OdeProblem& problem, double t0, double t1, State y0,
                    const OdeOptions& options,
                    const std::function<void(const OdeStep&)>& on_step = {});

/// Cubic Hermite interpolation between (t0, y0, f0) and (t1, y1, f1).
State hermite(double t0, const State& y0, const State& f0, double t1, const State& y1,
              const State& f1, double t);

}  // namespace liact

#endif  // LIACT_ODE_HPP
