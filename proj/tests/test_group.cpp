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
#include <numbers>
#include <random>

#include "liact/group.hpp"

namespace liact {
namespace {

using Eigen::MatrixXd;

StructureConstants heisenberg_sc() {
  StructureConstants sc(std::vector<Parity>(3, Parity::even));
  sc.set_bracket(0, 1, 2, 1.0);
  return sc;
}

AlgebraElement real(std::vector<double> v, int n = 0) { return AlgebraElement::real(v, n); }

// Exact exp/log for nilpotent matrices: the series terminate.
MatrixXd nil_exp(const MatrixXd& a) {
  MatrixXd r = MatrixXd::Identity(a.rows(), a.cols());
  MatrixXd term = r;
  for (int k = 1; k <= a.rows(); ++k) {
    term = term * a / k;
    r += term;
  }
  return r;
}

MatrixXd unipotent_log(const MatrixXd& g) {
  const MatrixXd n = g - MatrixXd::Identity(g.rows(), g.cols());
  MatrixXd r = MatrixXd::Zero(g.rows(), g.cols());
  MatrixXd p = MatrixXd::Identity(g.rows(), g.cols());
  for (int k = 1; k <= g.rows(); ++k) {
    p = p * n;
    r += ((k % 2) ? 1.0 : -1.0) / k * p;
  }
  return r;
}

TEST(Group, EuclideanMultiply) {
  const auto g = Group::euclidean(2, 0);
  const auto r = g.multiply(g.from_values({1, 2}), g.from_values({3, 4}));
  EXPECT_EQ(g.values(r), (std::vector<double>{4, 6}));
}

TEST(Group, HeisenbergBch) {
  const auto g = Group::nilpotent_exp(heisenberg_sc(), 2, 0);
  const auto r = g.multiply(g.exp(real({1, 0, 0})), g.exp(real({0, 1, 0})));
  EXPECT_EQ(g.values(r), (std::vector<double>{1, 1, 0.5}));
}

TEST(Group, HeisenbergMatchesUnipotentMatrices) {
  const auto g = Group::nilpotent_exp(heisenberg_sc(), 2, 0);
  auto to_m = [](const std::vector<double>& v) {
    MatrixXd m = MatrixXd::Zero(3, 3);
    m(0, 1) = v[0];
    m(1, 2) = v[1];
    m(0, 2) = v[2];
    return m;
  };
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-2, 2);
  for (int trial = 0; trial < 100; ++trial) {
    const std::vector<double> x{u(rng), u(rng), u(rng)};
    const std::vector<double> y{u(rng), u(rng), u(rng)};
    const auto z = g.values(g.multiply(g.exp(real(x)), g.exp(real(y))));
    const MatrixXd oracle = unipotent_log(nil_exp(to_m(x)) * nil_exp(to_m(y)));
    EXPECT_LE((to_m(z) - oracle).cwiseAbs().maxCoeff(), 1e-12);
  }
}

TEST(Group, Class5BchMatchesStrictlyUpperTriangular6x6) {
  // n6 = strictly upper triangular 6x6 matrices, nilpotent of class 5.
  std::vector<MatrixXd> basis;
  std::vector<std::pair<int, int>> idx;
  for (int r = 0; r < 6; ++r) {
    for (int c = r + 1; c < 6; ++c) {
      MatrixXd m = MatrixXd::Zero(6, 6);
      m(r, c) = 1.0;
      basis.push_back(m);
      idx.emplace_back(r, c);
    }
  }
  const int d = static_cast<int>(basis.size());
  StructureConstants sc(std::vector<Parity>(d, Parity::even));
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) {
      const MatrixXd comm = basis[i] * basis[j] - basis[j] * basis[i];
      for (int k = 0; k < d; ++k) {
        const double c = comm(idx[k].first, idx[k].second);
        if (c != 0.0) sc.at(i, j, k) = c;
      }
    }
  }
  ASSERT_EQ(sc.nilpotency_class(5), 5);
  const auto g = Group::nilpotent_exp(sc, 5, 0);
  auto to_m = [&](const std::vector<double>& v) {
    MatrixXd m = MatrixXd::Zero(6, 6);
    for (int k = 0; k < d; ++k) m += v[k] * basis[k];
    return m;
  };
  std::mt19937_64 rng(6);
  std::uniform_real_distribution<double> u(-1, 1);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<double> x(d), y(d);
    for (auto& v : x) v = u(rng);
    for (auto& v : y) v = u(rng);
    const auto z = g.values(g.multiply(g.exp(real(x)), g.exp(real(y))));
    const MatrixXd oracle = unipotent_log(nil_exp(to_m(x)) * nil_exp(to_m(y)));
    EXPECT_LE((to_m(z) - oracle).cwiseAbs().maxCoeff(), 1e-12);
  }
}

TEST(Group, NilpotentRejectsNonNilpotentAndHighClass) {
  StructureConstants sl2(std::vector<Parity>(3, Parity::even));
  sl2.set_bracket(0, 1, 1, 2.0);
  sl2.set_bracket(0, 2, 2, -2.0);
  sl2.set_bracket(1, 2, 0, 1.0);
  EXPECT_THROW(Group::nilpotent_exp(sl2, 3, 0), DomainError);
  EXPECT_THROW(Group::nilpotent_exp(heisenberg_sc(), 6, 0), DomainError);
  EXPECT_THROW(Group::nilpotent_exp(heisenberg_sc(), 1, 0), DomainError);
}

Group so2() {
  MatrixXd j(2, 2);
  j << 0, -1, 1, 0;
  return Group::matrix(StructureConstants::abelian(1), {j}, 0);
}

TEST(Group, MatrixExpExamples) {
  EXPECT_TRUE(matrix_exp(MatrixXd::Zero(3, 3)).isIdentity(0.0));
  MatrixXd n(2, 2);
  n << 0, 1, 0, 0;
  MatrixXd expect(2, 2);
  expect << 1, 1, 0, 1;
  EXPECT_LE((matrix_exp(n) - expect).cwiseAbs().maxCoeff(), 1e-15);

  MatrixXd rot(2, 2);
  rot << 0, -std::numbers::pi / 2, std::numbers::pi / 2, 0;
  MatrixXd quarter(2, 2);
  quarter << 0, -1, 1, 0;
  EXPECT_LE((matrix_exp(rot) - quarter).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(Group, MatrixLogExamples) {
  EXPECT_LE(matrix_log(MatrixXd::Identity(2, 2)).cwiseAbs().maxCoeff(), 1e-15);
  MatrixXd a(2, 2);
  a << 0, 0.3, -0.3, 0;
  EXPECT_LE((matrix_log(matrix_exp(a)) - a).cwiseAbs().maxCoeff(), 1e-12);
  try {
    matrix_log(-MatrixXd::Identity(2, 2));
    FAIL() << "expected DomainError";
  } catch (const DomainError& e) {
    EXPECT_NE(std::string(e.what()).find("outside log chart"), std::string::npos);
  }
  const auto g = so2();
  EXPECT_THROW(g.log(g.from_values({-1, 0, 0, -1})), DomainError);
}

TEST(Group, MatrixInverse) {
  MatrixXd b1(2, 2), b2(2, 2);
  b1 << 1, 0, 0, 0;
  b2 << 0, 1, 0, 0;
  StructureConstants sc(std::vector<Parity>(2, Parity::even));
  sc.set_bracket(0, 1, 1, 1.0);
  const auto g = Group::matrix(sc, {b1, b2}, 0);
  EXPECT_LE(g.basis_residual(), 1e-15);
  const auto a = g.exp(real({0.7, -1.3}));
  const auto e = g.multiply(a, g.inverse(a));
  EXPECT_LE(g.distance(e, g.identity()), 1e-12);
  EXPECT_THROW(g.inverse(g.from_values({1, 0, 0, 0})), DomainError);
  EXPECT_THROW(g.from_values({0, 0, 0, 0}), DomainError);
}

TEST(Group, CircleModel) {
  const auto g = Group::circle(0);
  const auto a = g.exp(real({2.75}));
  EXPECT_EQ(g.values(a)[0], 0.75);
  EXPECT_EQ(g.log(a).coords[0].body(), -0.25);
  EXPECT_EQ(g.values(g.multiply(a, g.exp(real({0.5}))))[0], 0.25);
  EXPECT_FALSE(g.simply_connected());
}

TEST(Group, ModelMismatch) {
  const auto e = Group::euclidean(1, 0);
  const auto c = Group::circle(0);
  EXPECT_THROW(e.multiply(e.identity(), c.identity()), Error);
}

TEST(GroupPath, ExpSegmentRightLogDerivative) {
  const auto g = Group::nilpotent_exp(heisenberg_sc(), 2, 0);
  GroupPath p(g);
  p.add_exp(real({1, 2, 3}), 2.0);
  for (double t : {0.0, 0.3, 1.9, 2.0}) {
    EXPECT_EQ(p.right_log_derivative(t), real({1, 2, 3}));
  }
  EXPECT_THROW(p.right_log_derivative(2.5), DomainError);
  EXPECT_EQ(g.values(p.end()), (std::vector<double>{2, 4, 6}));
}

TEST(GroupPath, EuclideanLinearPath) {
  const auto g = Group::euclidean(2, 0);
  GroupPath p(g);
  std::vector<double> t;
  std::vector<GroupElement> s;
  for (int i = 0; i <= 10; ++i) {
    t.push_back(0.1 * i);
    s.push_back(g.from_values({0.1 * i * 3.0, -0.1 * i}));
  }
  p.add_sampled(t, s);
  const auto xi = p.right_log_derivative(0.55).body_values();
  EXPECT_NEAR(xi[0], 3.0, 1e-12);
  EXPECT_NEAR(xi[1], -1.0, 1e-12);
}

TEST(GroupPath, SampledMatrixPath) {
  const auto g = so2();
  // gamma(t) = exp(tA), A = [[0,1],[-1,0]] = -J, i.e. coordinate -1
  GroupPath p(g);
  std::vector<double> t;
  std::vector<GroupElement> s;
  for (int i = 0; i < 1000; ++i) {
    const double ti = i / 999.0;
    t.push_back(ti);
    s.push_back(g.exp(real({-ti})));
  }
  p.add_sampled(t, s);
  for (double tq : {0.0, 0.123, 0.5, 1.0}) {
    const MatrixXd xi = g.to_matrix(p.right_log_derivative(tq));
    MatrixXd a(2, 2);
    a << 0, 1, -1, 0;
    EXPECT_LE((xi - a).cwiseAbs().maxCoeff(), 1e-5);
  }
  EXPECT_LE(g.distance(p.at(0.5), g.exp(real({-0.5}))), 1e-12);
}

TEST(GroupPath, SampledMustBeContinuous) {
  const auto g = Group::euclidean(1, 0);
  GroupPath p(g);
  EXPECT_THROW(p.add_sampled({0, 1}, {g.from_values({1}), g.from_values({2})}), DomainError);
}

TEST(GroupPath, WordEndpoint) {
  const auto g = Group::nilpotent_exp(heisenberg_sc(), 2, 0);
  const auto p = GroupPath::word(g, {real({1, 0, 0}), real({0, 1, 0})});
  EXPECT_EQ(g.values(p.end()), (std::vector<double>{1, 1, 0.5}));
  EXPECT_TRUE(p.starts_at_identity());
  // exp(Q) is traversed first
  EXPECT_EQ(p.right_log_derivative(0.5), real({0, 1, 0}));
}

TEST(GroupPath, CircleCoverValues) {
  const auto g = Group::circle(0);
  GroupPath p(g);
  p.add_exp(real({1.0}), 2.0);
  EXPECT_TRUE(p.is_closed());
  EXPECT_DOUBLE_EQ(p.cover_values(1.5)[0], 1.5);
  EXPECT_DOUBLE_EQ(g.values(p.at(1.5))[0], 0.5);
}

// Properties

TEST(GroupProperty, ExpLogRoundTrip) {
  std::mt19937_64 rng(31);
  std::normal_distribution<double> nd;
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 2 + trial % 4;
    MatrixXd a(n, n);
    for (int i = 0; i < n * n; ++i) a.data()[i] = nd(rng);
    a *= 0.5 * std::uniform_real_distribution<double>(0.0, 1.0)(rng) / a.norm();
    EXPECT_LE((matrix_log(matrix_exp(a)) - a).norm(), 1e-10);
  }
}

TEST(GroupProperty, OneParameterSubgroup) {
  std::mt19937_64 rng(32);
  std::uniform_real_distribution<double> u(-1, 1);
  MatrixXd b1(2, 2), b2(2, 2);
  b1 << 1, 0, 0, 0;
  b2 << 0, 1, 0, 0;
  StructureConstants sc(std::vector<Parity>(2, Parity::even));
  sc.set_bracket(0, 1, 1, 1.0);
  const auto g = Group::matrix(sc, {b1, b2}, 0);
  for (int trial = 0; trial < 50; ++trial) {
    const auto x = real({u(rng), u(rng)});
    const double s = u(rng), t = u(rng);
    const auto lhs = g.exp((s + t) * x);
    const auto rhs = g.multiply(g.exp(s * x), g.exp(t * x));
    EXPECT_LE(g.distance(lhs, rhs), 1e-12);
  }
}

TEST(GroupProperty, RightTranslationInvariance) {
  std::mt19937_64 rng(33);
  std::uniform_real_distribution<double> u(-1, 1);
  const auto g = Group::nilpotent_exp(heisenberg_sc(), 2, 0);
  for (int trial = 0; trial < 20; ++trial) {
    GroupPath p(g);
    p.add_exp(real({u(rng), u(rng), u(rng)}), 0.7);
    std::vector<double> t;
    std::vector<GroupElement> s;
    const auto x = real({u(rng), u(rng), 0.0});
    for (int i = 0; i <= 50; ++i) {
      const double ti = i / 50.0;
      t.push_back(ti);
      // a curved path: exp(ti x + ti^2 Z) * end
      auto y = ti * x;
      y.coords[2] += ti * ti;
      s.push_back(g.multiply(g.exp(y), p.end()));
    }
    p.add_sampled(t, s);
    const auto h = g.exp(real({u(rng), u(rng), u(rng)}));
    const auto q = p.right_translated(h);
    for (double tq : {0.1, 0.7, 0.93, 1.5, 1.7}) {
      const auto a = p.right_log_derivative(tq);
      const auto b = q.right_log_derivative(tq);
      EXPECT_LE((a - b).max_abs(), tq < 0.7 ? 0.0 : 1e-8);
    }
  }
}

TEST(GroupProperty, SuperCoordinatesInNilpotentGroup) {
  // P even, D odd, [D,D] = 2P
  StructureConstants sc({Parity::even, Parity::odd});
  sc.set_bracket(1, 1, 0, 2.0);
  const auto g = Group::nilpotent_exp(sc, 2, 2);
  const auto t1 = Supernumber::generator(2, 1);
  const auto t2 = Supernumber::generator(2, 2);
  AlgebraElement a = AlgebraElement::zero(2, 2), b = AlgebraElement::zero(2, 2);
  a.coords[1] = t1;
  b.coords[1] = t2;
  const auto r = g.multiply(g.exp(a), g.exp(b));
  // BCH: tau1 D + tau2 D + 1/2 [tau1 D, tau2 D] = ... - tau1 tau2 P
  EXPECT_EQ(r.coords.coords[0], Supernumber::monomial(2, 0b11, -1.0));
  EXPECT_EQ(r.coords.coords[1], t1 + t2);
  EXPECT_THROW(Group::circle(2).exp(AlgebraElement(std::vector<Supernumber>{t1 * t2})),
               DomainError);
}

}  // namespace
}  // namespace liact
