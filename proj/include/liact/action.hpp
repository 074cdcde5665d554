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

// Reconstruction of a group action from a representation by lifting routes
// from the identity, and the checks that go with it.

#ifndef LIACT_ACTION_HPP
#define LIACT_ACTION_HPP

#include <cstdint>
#include <limits>
#include <optional>
#include <vector>

#include "liact/fields.hpp"
#include "liact/flows.hpp"
#include "liact/group.hpp"

namespace liact {

/// A representation together with the group whose action is sought.
struct ActionModel {
  Representation rep;
  Group group;
  int sign = -1;
  FlowOptions flow;

  /// Throws DimensionError when algebra, group and representation disagree.
  void check() const;
};

struct ActOptions {
  bool probe = true;           // completeness probe along the route first
  bool estimate_error = true;  // second solve at 100x looser tolerances
  bool record = false;         // keep the leaf polyline
};

struct ActionDiagnostics {
  bool probed = false;
  bool complete = true;
  double first_escape = std::numeric_limits<double>::infinity();
  /// Circle groups: one full turn lifted at the start point moves it.
  bool holonomy_flag = false;
  std::vector<double> holonomy_displacement;
};

struct ActionResult {
  Point value;
  GroupPath route;
  double error_estimate = 0.0;
  ActionDiagnostics diagnostics;
  FlowMode mode = FlowMode::real;
  long steps = 0;
  LeafSample leaf;  // polyline only when recording
};

/// Largest coordinate difference: bodies (mod 1 on periodic coordinates)
/// and nilpotent coefficients.
double point_distance(const Chart& chart, const Point& a, const Point& b);

/// Phi(g, m) along the single segment t -> exp(t log g).
ActionResult act_local(const ActionModel& model, const GroupElement& g, const Point& m,
                       const ActOptions& options = {});

/// Phi(route end, m) by lifting the route; it must start at the identity.
/// Throws EscapeError when the lift leaves the chart.
ActionResult act(const ActionModel& model, const GroupPath& route, const Point& m,
                 const ActOptions& options = {});

/// Phi(exp(X_1) ... exp(X_n), m); exp(X_n) acts first.
ActionResult act_word(const ActionModel& model, const std::vector<AlgebraElement>& word,
                      const Point& m, const ActOptions& options = {});

/// Max over trials of |Phi(uv, m) - Phi(u, Phi(v, m))| for random words of
/// length <= word_length. The left side uses one exp segment to uv.
double verify_group_law(const ActionModel& model, int trials, int word_length,
                        std::uint64_t seed);

/// Max deviation between the central-difference fundamental field of the
/// reconstructed action and -sign * rho(X) (which is rho(X) for sign -1).
double recover_rho(const ActionModel& model, int samples, double h, std::uint64_t seed);

struct PathIndependence {
  double spread = 0.0;
  std::vector<Point> endpoints;
};

/// Lifts every route (each from the identity to g) through m.
PathIndependence path_independence(const ActionModel& model, const GroupElement& g,
                                   const std::vector<GroupPath>& routes, const Point& m);

/// Max over trials of |Phi_{+1}(g, Phi_{-1}(g, m)) - m|.
double sign_duality(const ActionModel& model, int trials, std::uint64_t seed);

/// Random real algebra element with even coordinates in [-scale, scale].
AlgebraElement random_element(const ActionModel& model, std::mt19937_64& rng, double scale);

}  // namespace liact

#endif  // LIACT_ACTION_HPP
