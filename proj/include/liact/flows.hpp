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

// Flows of fundamental fields, lifts of group paths, completeness probes and
// holonomy of loops.
//
// Every flow solves dm/dt = sign * rho(xi(t))(m). With sign = -1 the lift of
// t -> exp(tX) is Phi(exp(tX), m) for the left action whose fundamental field
// d/dt Phi(exp(-tX), m) is rho(X); sign = +1 gives Phi(g^{-1}, m).

#ifndef LIACT_FLOWS_HPP
#define LIACT_FLOWS_HPP

#include <string>
#include <vector>

#include "liact/errors.hpp"
#include "liact/fields.hpp"
#include "liact/group.hpp"
#include "liact/ode.hpp"

namespace liact {

/// real: every quantity is soulless, only even bodies are integrated.
/// super_rk: Runge-Kutta on all Grassmann coefficients, steps chosen by the
///           bodies alone, so bodies match the real mode bitwise.
/// exact: xi has zero body; Picard iteration over polynomials in t with
///        supernumber coefficients terminates by nilpotency.
enum class FlowMode { real, super_rk, exact };
const char* to_string(FlowMode m);

struct FlowOptions {
  OdeOptions ode;
  bool record = false;  // keep one sample per accepted step
};

/// Sample along a flow; periodic coordinates are unwrapped.
struct FlowSample {
  double t;
  Point m;
};

struct FlowResult {
  OdeStatus status = OdeStatus::completed;
  FlowMode mode = FlowMode::real;
  double t = 0.0;            // time reached
  Point m;                   // periodic coordinates reduced to [0,1)
  std::vector<long> winding; // per even coordinate
  long steps = 0;
  long rejected = 0;
  std::string message;
  std::vector<FlowSample> samples;

  bool completed() const { return status == OdeStatus::completed; }
  Point unwrapped() const;
};

/// dm/ds = sign * rho(a + s b)(m) for s from 0 to `duration` (either sign).
FlowResult flow(const Representation& rep, const AlgebraElement& a, const AlgebraElement& b,
                double duration, const Point& m0, int sign, const FlowOptions& options);
FlowResult flow(const Representation& rep, const AlgebraElement& x, double duration,
                const Point& m0, int sign, const FlowOptions& options);

/// One polyline vertex of a leaf: path parameter, group coordinates (on the
/// universal cover for the circle) and the point (periodic coordinates
/// unwrapped).
struct LeafPoint {
  double t;
  std::vector<double> g;
  Point m;
};

struct LeafSample {
  OdeStatus status = OdeStatus::completed;
  FlowMode mode = FlowMode::real;  // most general mode used by any segment
  double t = 0.0;
  Point end;                       // periodic coordinates reduced
  std::vector<long> winding;
  long steps = 0;
  std::string message;
  std::vector<LeafPoint> points;   // filled when recording

  bool completed() const { return status == OdeStatus::completed; }
  Point unwrapped() const;
};

/// Lifts gamma through m0: m(t) solves the flow of the right log derivative
/// of gamma. Segments (and sampled node intervals) are integrated separately.
LeafSample lift_path(const Representation& rep, const GroupPath& path, const Point& m0,
                     int sign, const FlowOptions& options);

/// A flow left the chart (or blew up) before the requested time.
class EscapeError : public DomainError {
 public:
  EscapeError(const std::string& what, LeafSample partial)
      : DomainError(what), partial_(std::move(partial)) {}
  const LeafSample& partial() const { return partial_; }

 private:
  LeafSample partial_;
};

struct EscapeEvent {
  std::vector<double> direction;
  std::vector<double> start;
  double time = 0.0;  // signed flow time at which the trajectory stopped
  std::vector<double> end;
  OdeStatus status = OdeStatus::escaped;
};

struct CompletenessReport {
  bool complete = true;
  double horizon = 0.0;
  int trajectories = 0;
  std::vector<EscapeEvent> escapes;
  /// Earliest |time| among escapes, or +inf.
  double first_escape() const;
};

/// Integrates every real direction from every point to +-horizon.
CompletenessReport completeness_probe(const Representation& rep,
                                      const std::vector<std::vector<double>>& directions,
                                      const std::vector<std::vector<double>>& points,
                                      double horizon, int sign, const FlowOptions& options);

struct HolonomyResult {
  Point end;                         // reduced
  std::vector<double> displacement;  // per even coordinate
  std::vector<long> winding;         // per even coordinate
  double soul_shift = 0.0;           // largest change of a nilpotent coefficient
  bool trivial = true;
  LeafSample leaf;
};

/// Lifts a closed loop (endpoints within 1e-12) through m0. On a periodic
/// coordinate the unwrapped change D splits as winding = floor(D + 1e-9) and
/// displacement = D - winding. Throws EscapeError when the lift leaves the
/// chart.
HolonomyResult holonomy(const Representation& rep, const GroupPath& loop, const Point& m0,
                        int sign, const FlowOptions& options);

}  // namespace liact

#endif  // LIACT_FLOWS_HPP
