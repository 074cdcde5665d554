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

#include "liact/action.hpp"

#include <algorithm>
#include <cmath>

namespace liact {

void ActionModel::check() const {
  if (rep.dim() != group.dim()) {
    throw DimensionError("representation has dimension " + std::to_string(rep.dim()) +
                         ", group has " + std::to_string(group.dim()));
  }
  if (rep.num_generators() != group.num_generators()) {
    throw DimensionError("representation and group use different generator counts");
  }
  const StructureConstants& a = rep.algebra();
  const StructureConstants& b = group.algebra();
  for (int i = 0; i < a.dim(); ++i) {
    if (a.parity(i) != b.parity(i)) throw DimensionError("group and algebra parities differ");
    for (int j = 0; j < a.dim(); ++j) {
      for (int k = 0; k < a.dim(); ++k) {
        if (std::abs(a(i, j, k) - b(i, j, k)) > 1e-12) {
          throw DimensionError("group and representation use different structure constants");
        }
      }
    }
  }
  if (sign != 1 && sign != -1) throw Error("fundamental sign must be +1 or -1");
}

double point_distance(const Chart& chart, const Point& a, const Point& b) {
  if (a.size() != b.size()) throw DimensionError("points of different dimension");
  double d = 0.0;
  for (std::size_t c = 0; c < a.size(); ++c) {
    double body = std::abs(a[c].body() - b[c].body());
    if (static_cast<int>(c) < chart.n0() && chart.periodic(static_cast<int>(c))) {
      body -= std::floor(body);
      body = std::min(body, 1.0 - body);
    }
    d = std::max({d, body, (a[c].soul() - b[c].soul()).max_abs()});
  }
  return d;
}

namespace {

ActOptions quiet() {
  ActOptions o;
  o.probe = false;
  o.estimate_error = false;
  return o;
}

double sup_norm(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

// Unit (max-norm) real directions met along a route, and the route length
// int |xi|_inf dt.
std::vector<std::vector<double>> route_directions(const GroupPath& route, double& length) {
  std::vector<std::vector<double>> dirs;
  length = 0.0;
  auto add = [&](std::vector<double> d) {
    const double n = sup_norm(d);
    if (n == 0.0) return;
    for (double& x : d) x /= n;
    dirs.push_back(std::move(d));
  };
  for (std::size_t k = 0; k < route.segments().size(); ++k) {
    if (const auto* e = std::get_if<ExpSegment>(&route.segments()[k])) {
      length += e->duration * sup_norm(e->x.body_values());
      add(e->x.body_values());
    } else {
      const auto& s = std::get<SampledSegment>(route.segments()[k]);
      const auto& xi = route.sampled_xi(k);
      for (std::size_t i = 0; i + 1 < xi.size(); ++i) {
        length += (s.t[i + 1] - s.t[i]) * sup_norm(xi[i].body_values());
      }
      const std::size_t stride = std::max<std::size_t>(1, xi.size() / 8);
      for (std::size_t i = 0; i < xi.size(); i += stride) add(xi[i].body_values());
    }
  }
  return dirs;
}

}  // namespace

ActionResult act(const ActionModel& model, const GroupPath& route, const Point& m,
                 const ActOptions& options) {
  if (!route.starts_at_identity(1e-12)) {
    throw DomainError("route must start at the identity");
  }
  const Chart& chart = model.rep.chart();
  ActionResult r{m, route, 0.0, {}, FlowMode::real, 0, {}};
  if (route.segments().empty()) return r;  // identity: no integration

  if (options.probe) {
    double length = 0.0;
    const auto dirs = route_directions(route, length);
    r.diagnostics.probed = true;
    if (!dirs.empty()) {
      const CompletenessReport probe = completeness_probe(model.rep, dirs, {body_of(m)},
                                                          length + 1.0, model.sign, model.flow);
      r.diagnostics.complete = probe.complete;
      r.diagnostics.first_escape = probe.first_escape();
    }
  }

  FlowOptions fo = model.flow;
  fo.record = options.record;
  LeafSample leaf = lift_path(model.rep, route, m, model.sign, fo);
  if (!leaf.completed()) {
    throw EscapeError("lift stopped at t = " + std::to_string(leaf.t) + " (" +
                          to_string(leaf.status) + "): " + leaf.message,
                      leaf);
  }
  r.value = leaf.end;
  r.mode = leaf.mode;
  r.steps = leaf.steps;

  if (options.estimate_error && leaf.mode != FlowMode::exact) {
    FlowOptions loose = model.flow;
    loose.record = false;
    loose.ode.rtol *= 100.0;
    loose.ode.atol *= 100.0;
    const LeafSample coarse = lift_path(model.rep, route, m, model.sign, loose);
    r.error_estimate = coarse.completed() ? point_distance(chart, coarse.end, leaf.end)
                                          : std::numeric_limits<double>::infinity();
  }

  if (model.group.model() == GroupModel::circle && chart.n0() > 0) {
    GroupPath turn(model.group);
    turn.add_exp(AlgebraElement::basis(1, 0, model.group.num_generators()));
    try {
      const HolonomyResult h = holonomy(model.rep, turn, m, model.sign, model.flow);
      r.diagnostics.holonomy_flag = !h.trivial;
      r.diagnostics.holonomy_displacement = h.displacement;
    } catch (const EscapeError&) {
      r.diagnostics.holonomy_flag = true;
    }
  }
  r.leaf = std::move(leaf);
  return r;
}

ActionResult act_local(const ActionModel& model, const GroupElement& g, const Point& m,
                       const ActOptions& options) {
  const AlgebraElement x = model.group.log(g);
  GroupPath route(model.group);
  if (!x.is_zero()) route.add_exp(x);
  return act(model, route, m, options);
}

ActionResult act_word(const ActionModel& model, const std::vector<AlgebraElement>& word,
                      const Point& m, const ActOptions& options) {
  std::vector<AlgebraElement> factors;
  for (const auto& x : word) {
    if (!x.is_zero()) factors.push_back(x);
  }
  return act(model, GroupPath::word(model.group, factors), m, options);
}

AlgebraElement random_element(const ActionModel& model, std::mt19937_64& rng, double scale) {
  std::uniform_real_distribution<double> u(-scale, scale);
  const StructureConstants& sc = model.group.algebra();
  std::vector<double> v(sc.dim(), 0.0);
  for (int i = 0; i < sc.dim(); ++i) {
    const double x = u(rng);
    if (sc.parity(i) == Parity::even) v[i] = x;
  }
  return AlgebraElement::real(v, model.group.num_generators());
}

namespace {

Point random_point(const ActionModel& model, std::mt19937_64& rng) {
  const Chart& chart = model.rep.chart();
  return real_point(chart.sample(rng), chart.n1(), model.rep.num_generators());
}

std::vector<AlgebraElement> random_word(const ActionModel& model, std::mt19937_64& rng,
                                        int max_length) {
  std::uniform_int_distribution<int> len(0, max_length);
  std::vector<AlgebraElement> w;
  const int n = len(rng);
  for (int i = 0; i < n; ++i) w.push_back(random_element(model, rng, 1.0));
  return w;
}

GroupElement word_element(const Group& g, const std::vector<AlgebraElement>& word) {
  GroupElement e = g.identity();
  for (const auto& x : word) e = g.multiply(e, g.exp(x));
  return e;
}

}  // namespace

double verify_group_law(const ActionModel& model, int trials, int word_length,
                        std::uint64_t seed) {
  model.check();
  std::mt19937_64 rng(seed);
  const Chart& chart = model.rep.chart();
  double worst = 0.0;
  for (int t = 0; t < trials; ++t) {
    const auto u = random_word(model, rng, word_length);
    const auto v = random_word(model, rng, word_length);
    const Point m = random_point(model, rng);
    const GroupElement uv = model.group.multiply(word_element(model.group, u),
                                                 word_element(model.group, v));
    const Point lhs = act_local(model, uv, m, quiet()).value;
    const Point inner = act_word(model, v, m, quiet()).value;
    const Point rhs = act_word(model, u, inner, quiet()).value;
    worst = std::max(worst, point_distance(chart, lhs, rhs));
  }
  return worst;
}

double recover_rho(const ActionModel& model, int samples, double h, std::uint64_t seed) {
  model.check();
  std::mt19937_64 rng(seed);
  const Chart& chart = model.rep.chart();
  const int n1 = chart.n1();
  const int N = model.rep.num_generators();
  const ActionFn phi = [&](const AlgebraElement& log_g, const std::vector<double>& m) {
    GroupPath route(model.group);
    route.add_exp(log_g);
    return body_of(act(model, route, real_point(m, n1, N), quiet()).value);
  };
  double worst = 0.0;
  for (int s = 0; s < samples; ++s) {
    const std::vector<double> p = chart.sample(rng);
    const AlgebraElement x = random_element(model, rng, 1.0);
    const std::vector<double> fd = fundamental_field_from_action(phi, chart, x, p, h);
    const std::vector<double> rho = eval_rho(model.rep, x.body_values(), p);
    for (int c = 0; c < chart.n0(); ++c) {
      worst = std::max(worst, std::abs(fd[c] + model.sign * rho[c]));
    }
  }
  return worst;
}

PathIndependence path_independence(const ActionModel& model, const GroupElement& g,
                                   const std::vector<GroupPath>& routes, const Point& m) {
  if (routes.size() < 2) throw Error("path independence needs at least two routes");
  PathIndependence out;
  for (const auto& route : routes) {
    if (model.group.distance(route.end(), g) > 1e-9) {
      throw DomainError("route does not end at the requested element");
    }
    out.endpoints.push_back(act(model, route, m, quiet()).value);
  }
  const Chart& chart = model.rep.chart();
  for (std::size_t i = 0; i < out.endpoints.size(); ++i) {
    for (std::size_t j = i + 1; j < out.endpoints.size(); ++j) {
      out.spread = std::max(out.spread, point_distance(chart, out.endpoints[i], out.endpoints[j]));
    }
  }
  return out;
}

double sign_duality(const ActionModel& model, int trials, std::uint64_t seed) {
  model.check();
  std::mt19937_64 rng(seed);
  ActionModel minus = model;
  minus.sign = -1;
  ActionModel plus = model;
  plus.sign = 1;
  double worst = 0.0;
  for (int t = 0; t < trials; ++t) {
    const GroupElement g = model.group.exp(random_element(model, rng, 1.0));
    const Point m = random_point(model, rng);
    const Point there = act_local(minus, g, m, quiet()).value;
    const Point back = act_local(plus, g, there, quiet()).value;
    worst = std::max(worst, point_distance(model.rep.chart(), back, m));
  }
  return worst;
}

}  // namespace liact
