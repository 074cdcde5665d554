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

#include <cmath>
#include <random>

#include "liact/flows.hpp"
#include "liact/ode.hpp"

namespace liact {
namespace {

Representation line_rep(const std::string& comp, double lo, double hi, bool periodic = false) {
  Chart chart({"x"}, {});
  if (periodic) {
    chart.set_periodic(0);
  } else if (std::isfinite(lo) || std::isfinite(hi)) {
    chart.set_interval(0, {lo, hi});
  }
  return Representation::parse(StructureConstants::abelian(1), chart, {{comp}}, {}, 0);
}

Representation supertranslation() {
  StructureConstants sc({Parity::even, Parity::odd});
  sc.set_bracket(1, 1, 0, 2.0);
  return Representation::parse(sc, Chart({"x"}, {"th"}), {{"1", "0"}, {"th", "1"}}, {}, 2);
}

Representation heisenberg() {
  StructureConstants sc = StructureConstants::abelian(3);
  sc.set_bracket(0, 1, 2, 1.0);
  return Representation::parse(sc, Chart({"x", "y"}, {}), {{"1", "0"}, {"0", "x"}, {"0", "1"}},
                               {}, 0);
}

AlgebraElement real(std::vector<double> v) { return AlgebraElement::real(v, 0); }

TEST(Ode, ExponentialDecay) {
  OdeProblem p;
  p.rhs = [](double, const State& y, State& dy) { dy[0] = -y[0]; };
  const OdeResult r = integrate(p, 0.0, 5.0, {1.0}, OdeOptions{});
  EXPECT_EQ(r.status, OdeStatus::completed);
  EXPECT_EQ(r.t, 5.0);
  EXPECT_NEAR(r.y[0], std::exp(-5.0), 1e-9);
}

TEST(Ode, BackwardHarmonicOscillator) {
  OdeProblem p;
  p.rhs = [](double, const State& y, State& dy) {
    dy[0] = y[1];
    dy[1] = -y[0];
  };
  const OdeResult r = integrate(p, 0.0, -10.0, {1.0, 0.0}, OdeOptions{});
  EXPECT_EQ(r.status, OdeStatus::completed);
  EXPECT_NEAR(r.y[0], std::cos(10.0), 1e-8);
  EXPECT_NEAR(r.y[1], std::sin(10.0), 1e-8);
}

TEST(Ode, PeriodicWinding) {
  OdeProblem p;
  p.rhs = [](double, const State&, State& dy) { dy[0] = 0.7; };
  p.periodic = {0};
  const OdeResult r = integrate(p, 0.0, 10.0, {0.2}, OdeOptions{});
  EXPECT_EQ(r.winding[0], 7);
  EXPECT_NEAR(r.y[0], 0.2, 1e-12);
}

TEST(Ode, HermiteReproducesCubics) {
  const auto f = [](double t) { return 1 - 2 * t + 0.5 * t * t * t; };
  const auto df = [](double t) { return -2 + 1.5 * t * t; };
  const State y = hermite(1.0, {f(1.0)}, {df(1.0)}, 2.0, {f(2.0)}, {df(2.0)}, 1.3);
  EXPECT_NEAR(y[0], f(1.3), 1e-14);
}

TEST(Flows, EscapeFromUnitInterval) {
  const Representation rep = line_rep("1", 0.0, 1.0);
  const Point m0 = real_point({0.5}, 0, 0);
  const FlowResult fwd = flow(rep, real({1.0}), 10.0, m0, 1, {});
  EXPECT_EQ(fwd.status, OdeStatus::escaped);
  EXPECT_NEAR(fwd.t, 0.5, 1e-6);
  const FlowResult bwd = flow(rep, real({1.0}), -10.0, m0, 1, {});
  EXPECT_EQ(bwd.status, OdeStatus::escaped);
  EXPECT_NEAR(bwd.t, -0.5, 1e-6);
}

TEST(Flows, QuadraticBlowUp) {
  const Representation rep = line_rep("x^2", -INFINITY, INFINITY);
  for (double x0 : {0.5, 1.0, 2.0}) {
    const CompletenessReport r =
        completeness_probe(rep, {{1.0}}, {{x0}}, 10.0, -1, {});
    EXPECT_FALSE(r.complete);
    EXPECT_NEAR(r.first_escape(), 1.0 / x0, 1e-6 / x0) << x0;
    EXPECT_EQ(r.escapes.front().status, OdeStatus::blow_up);
  }
}

TEST(Flows, TranslationIsComplete) {
  const Representation rep = line_rep("0.5", -INFINITY, INFINITY);
  const CompletenessReport r = completeness_probe(rep, {{1.0}, {-2.0}}, {{0.1}, {-3.0}}, 100.0, 1, {});
  EXPECT_TRUE(r.complete);
  EXPECT_EQ(r.trajectories, 8);
}

TEST(Flows, LinearFieldMatchesExponential) {
  const Representation rep = line_rep("x", -INFINITY, INFINITY);
  for (int sign : {-1, 1}) {
    const FlowResult r = flow(rep, real({0.3}), 2.0, real_point({1.5}, 0, 0), sign, {});
    EXPECT_NEAR(r.m[0].body(), 1.5 * std::exp(sign * 0.6), 1e-9);
    EXPECT_EQ(r.mode, FlowMode::real);
  }
}

TEST(Flows, ExactOddFlow) {
  const Representation rep = supertranslation();
  AlgebraElement x = AlgebraElement::zero(2, 2);
  x.coords[1] = Supernumber::generator(2, 1);  // tau = theta1
  const Point m0{Supernumber(2, 0.25), Supernumber::generator(2, 2)};
  const FlowResult r = flow(rep, x, 1.0, m0, 1, {});
  EXPECT_EQ(r.mode, FlowMode::exact);
  EXPECT_EQ(r.m[0], Supernumber(2, 0.25) + Supernumber::monomial(2, 0b11, 1.0));
  EXPECT_EQ(r.m[1], Supernumber::generator(2, 2) + Supernumber::generator(2, 1));
  const FlowResult half = flow(rep, x, 0.5, m0, 1, {});
  EXPECT_EQ(half.m[0], Supernumber(2, 0.25) + Supernumber::monomial(2, 0b11, 0.5));
}

TEST(Flows, SuperLinearFieldMatchesClosedForm) {
  // rho = x d_x, X = c + s with s = theta1 theta2: x(t) = x0 e^{ct} (1 + s t).
  Chart chart({"x"}, {});
  const Representation rep =
      Representation::parse(StructureConstants::abelian(1), chart, {{"x"}}, {}, 2);
  const Supernumber s = Supernumber::monomial(2, 0b11, 0.4);
  AlgebraElement x = AlgebraElement::zero(1, 2);
  x.coords[0] = Supernumber(2, 0.7) + s;
  const FlowResult r = flow(rep, x, 1.5, {Supernumber(2, 2.0)}, 1, {});
  EXPECT_EQ(r.mode, FlowMode::super_rk);
  const double e = 2.0 * std::exp(0.7 * 1.5);
  EXPECT_NEAR(r.m[0].body(), e, 1e-9);
  EXPECT_NEAR(r.m[0][0b11], e * 0.4 * 1.5, 1e-9);
}

TEST(Flows, SuperBodyEqualsRealTrajectory) {
  StructureConstants sc({Parity::even, Parity::even, Parity::odd});
  const Representation rep = Representation::parse(
      sc, Chart({"x", "y"}, {"th"}),
      {{"sin(y)", "x*y", "0"}, {"1 + x^2", "cos(x)", "th*x"}, {"0", "0", "0"}}, {}, 3);
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  FlowOptions rec;
  rec.record = true;
  for (int trial = 0; trial < 5; ++trial) {
    const double c0 = u(rng), c1 = u(rng), x0 = u(rng), y0 = u(rng);
    AlgebraElement xs = AlgebraElement::zero(3, 3);
    xs.coords[0] = Supernumber(3, c0) + Supernumber::monomial(3, 0b011, u(rng));
    xs.coords[1] = Supernumber(3, c1) + Supernumber::monomial(3, 0b110, u(rng));
    const Point ms{Supernumber(3, x0) + Supernumber::monomial(3, 0b101, u(rng)),
                   Supernumber(3, y0), Supernumber::generator(3, 2) * u(rng)};
    AlgebraElement xr = AlgebraElement::zero(3, 3);
    xr.coords[0] = Supernumber(3, c0);
    xr.coords[1] = Supernumber(3, c1);
    const Point mr = real_point({x0, y0}, 1, 3);
    const FlowResult sup = flow(rep, xs, 2.0, ms, -1, rec);
    const FlowResult re = flow(rep, xr, 2.0, mr, -1, rec);
    ASSERT_EQ(sup.mode, FlowMode::super_rk);
    ASSERT_EQ(re.mode, FlowMode::real);
    ASSERT_EQ(sup.samples.size(), re.samples.size());
    for (std::size_t k = 0; k < re.samples.size(); ++k) {
      EXPECT_EQ(sup.samples[k].t, re.samples[k].t);
      EXPECT_EQ(sup.samples[k].m[0].body(), re.samples[k].m[0].body());
      EXPECT_EQ(sup.samples[k].m[1].body(), re.samples[k].m[1].body());
    }
  }
}

TEST(Flows, CircleHolonomy) {
  for (const auto& [lambda, disp, wind] :
       std::vector<std::tuple<double, double, long>>{{0.5, 0.5, 0}, {2.0, 0.0, 2}, {0.3, 0.3, 0}}) {
    const Representation rep = line_rep(std::to_string(lambda), 0, 0, true);
    const Group g = Group::circle(0);
    GroupPath loop(g);
    loop.add_exp(real({1.0}));
    const HolonomyResult h = holonomy(rep, loop, real_point({0.25}, 0, 0), 1, {});
    EXPECT_NEAR(h.displacement[0], disp, 1e-9) << lambda;
    EXPECT_EQ(h.winding[0], wind) << lambda;
    EXPECT_EQ(h.trivial, disp == 0.0);
    if (lambda == 0.5) EXPECT_NEAR(h.end[0].body(), 0.75, 1e-9);
  }
}

TEST(Flows, HolonomyRejectsOpenPaths) {
  const Representation rep = line_rep("1", 0, 0, true);
  GroupPath open(Group::circle(0));
  open.add_exp(real({0.5}));
  EXPECT_THROW(holonomy(rep, open, real_point({0.1}, 0, 0), 1, {}), DomainError);
}

TEST(Flows, HolonomyEscapeCarriesPartialLeaf) {
  const Representation rep = line_rep("1", 0.0, 1.0);
  GroupPath loop(Group::euclidean(1, 0));
  loop.add_exp(real({2.0}));
  loop.add_exp(real({-2.0}));
  FlowOptions rec;
  rec.record = true;
  try {
    holonomy(rep, loop, real_point({0.5}, 0, 0), 1, rec);
    FAIL() << "expected an escape";
  } catch (const EscapeError& e) {
    EXPECT_EQ(e.partial().status, OdeStatus::escaped);
    EXPECT_NEAR(e.partial().t, 0.25, 1e-6);
    EXPECT_GE(e.partial().points.size(), 2u);
  }
}

TEST(Flows, SampledPathMatchesExpSegment) {
  const Representation rep = heisenberg();
  const Group g = Group::nilpotent_exp(rep.algebra(), 2, 0);
  const AlgebraElement x = real({0.8, -0.6, 0.3});
  GroupPath exact(g);
  exact.add_exp(x);
  std::vector<double> ts;
  std::vector<GroupElement> gs;
  for (int k = 0; k <= 200; ++k) {
    ts.push_back(k / 200.0);
    gs.push_back(g.exp((k / 200.0) * x));
  }
  GroupPath sampled(g);
  sampled.add_sampled(ts, gs);
  const Point m0 = real_point({0.2, -0.4}, 0, 0);
  const LeafSample a = lift_path(rep, exact, m0, -1, {});
  const LeafSample b = lift_path(rep, sampled, m0, -1, {});
  for (int c = 0; c < 2; ++c) EXPECT_NEAR(a.end[c].body(), b.end[c].body(), 1e-8);
  // x -> x - t, y -> y - t(z + x) + t^2/2 for X = (p, q, z) with sign -1
  EXPECT_NEAR(a.end[0].body(), 0.2 - 0.8, 1e-12);
  EXPECT_NEAR(a.end[1].body(), -0.4 - (0.3 + (-0.6) * 0.2) + (-0.6) * 0.8 / 2, 1e-12);
}

TEST(Flows, LeafRecordsOneRowPerStep) {
  const Representation rep = line_rep("0.5", 0, 0, true);
  GroupPath loop(Group::circle(0));
  loop.add_exp(real({1.0}), 3.0);
  FlowOptions rec;
  rec.record = true;
  const LeafSample leaf = lift_path(rep, loop, real_point({0.0}, 0, 0), 1, rec);
  ASSERT_GE(leaf.points.size(), 2u);
  for (const auto& p : leaf.points) {
    EXPECT_NEAR(p.m[0].body(), 0.5 * p.g[0], 1e-9);  // helix of slope 1/2 on the cover
  }
  EXPECT_EQ(leaf.steps + 1, static_cast<long>(leaf.points.size()));
}

}  // namespace
}  // namespace liact
