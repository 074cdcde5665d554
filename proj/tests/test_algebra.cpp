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

#include <random>

#include "liact/algebra.hpp"

namespace liact {
namespace {

StructureConstants heisenberg() {
  StructureConstants sc(std::vector<Parity>(3, Parity::even));
  sc.set_bracket(0, 1, 2, 1.0);
  return sc;
}

StructureConstants sl2() {
  // H, E, F
  StructureConstants sc(std::vector<Parity>(3, Parity::even));
  sc.set_bracket(0, 1, 1, 2.0);
  sc.set_bracket(0, 2, 2, -2.0);
  sc.set_bracket(1, 2, 0, 1.0);
  return sc;
}

// P even, D1..Dk odd, [Di, Dj] = 2 delta_ij P
StructureConstants supertranslation(int odd) {
  std::vector<Parity> p{Parity::even};
  for (int i = 0; i < odd; ++i) p.push_back(Parity::odd);
  StructureConstants sc(p);
  for (int i = 1; i <= odd; ++i) sc.set_bracket(i, i, 0, 2.0);
  return sc;
}

AlgebraElement random_even_element(std::mt19937_64& rng, const StructureConstants& sc, int n) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  AlgebraElement x = AlgebraElement::zero(sc.dim(), n);
  for (int i = 0; i < sc.dim(); ++i) {
    Supernumber c(n);
    for (Mask m = 0; m < c.size(); ++m) {
      if ((std::popcount(m) & 1) == parity_bit(sc.parity(i))) c[m] = u(rng);
    }
    x.coords[i] = c;
  }
  return x;
}

TEST(Algebra, AffineBracket) {
  StructureConstants sc(std::vector<Parity>(2, Parity::even));
  sc.set_bracket(0, 1, 1, 1.0);
  EXPECT_EQ(sc(1, 0, 1), -1.0);
  const auto e1 = AlgebraElement::basis(2, 0, 0);
  const auto e2 = AlgebraElement::basis(2, 1, 0);
  EXPECT_EQ(bracket(sc, e1, e2), e2);
}

TEST(Algebra, EvenSelfBracketVanishes) {
  std::mt19937_64 rng(3);
  const auto sc = sl2();
  for (int trial = 0; trial < 20; ++trial) {
    const auto x = random_even_element(rng, sc, 2);
    EXPECT_TRUE(bracket(sc, x, x).max_abs() <= 1e-15);
  }
}

TEST(Algebra, SupertranslationOddBracket) {
  const auto sc = supertranslation(1);
  const auto d = AlgebraElement::basis(2, 1, 2);
  EXPECT_EQ(bracket(sc, d, d), AlgebraElement::basis(2, 0, 2, 2.0));

  // [tau1 D, tau2 D] = tau1 * (-tau2) * 2 P, since D passes the odd tau2
  const auto t1 = Supernumber::generator(2, 1);
  const auto t2 = Supernumber::generator(2, 2);
  const auto r = bracket(sc, t1 * d, t2 * d);
  EXPECT_EQ(r.coords[0], Supernumber::monomial(2, 0b11, -2.0));
  EXPECT_TRUE(r.coords[1].is_zero());
  EXPECT_TRUE(is_even_element(sc, t1 * d));
  EXPECT_FALSE(is_even_element(sc, d));
}

TEST(Algebra, JacobiResiduals) {
  EXPECT_EQ(check_jacobi(heisenberg()).value, 0.0);
  EXPECT_EQ(check_jacobi(StructureConstants::abelian(4)).value, 0.0);
  EXPECT_EQ(check_jacobi(sl2()).value, 0.0);
  EXPECT_EQ(check_jacobi(supertranslation(2)).value, 0.0);

  // [e1,e2]=e3, [e1,e3]=e1 breaks Jacobi on (e1,e2,e3)
  auto bad = heisenberg();
  bad.set_bracket(0, 2, 0, 1.0);
  const auto r = check_jacobi(bad);
  EXPECT_GT(r.value, 0.0);
  // oracle: bracket elements directly
  const auto e = [](int i) { return AlgebraElement::basis(3, i, 0); };
  const auto jac = bracket(bad, e(0), bracket(bad, e(1), e(2))) +
                   bracket(bad, e(1), bracket(bad, e(2), e(0))) +
                   bracket(bad, e(2), bracket(bad, e(0), e(1)));
  EXPECT_DOUBLE_EQ(jac.max_abs(), 1.0);
  EXPECT_DOUBLE_EQ(r.value, 1.0);
}

TEST(Algebra, AntisymmetryResiduals) {
  EXPECT_EQ(check_antisymmetry(sl2()).value, 0.0);
  EXPECT_EQ(check_antisymmetry(StructureConstants::abelian(3)).value, 0.0);
  StructureConstants sc(std::vector<Parity>(2, Parity::even));
  sc.at(0, 1, 0) = 1.0;
  sc.at(1, 0, 0) = 1.0;
  EXPECT_EQ(check_antisymmetry(sc).value, 2.0);
  // odd-odd entries are symmetric, not antisymmetric
  EXPECT_EQ(check_antisymmetry(supertranslation(2)).value, 0.0);
}

TEST(Algebra, ParityConsistency) {
  EXPECT_EQ(check_parity_consistency(supertranslation(1)).value, 0.0);
  StructureConstants sc({Parity::even, Parity::odd});
  sc.set_bracket(0, 1, 0, 1.0);  // [P, D] = P is parity-inconsistent
  EXPECT_EQ(check_parity_consistency(sc).value, 1.0);
}

TEST(Algebra, NilpotencyClass) {
  EXPECT_EQ(StructureConstants::abelian(2).nilpotency_class(5), 1);
  EXPECT_EQ(heisenberg().nilpotency_class(5), 2);
  EXPECT_EQ(supertranslation(1).nilpotency_class(5), 2);
  EXPECT_EQ(sl2().nilpotency_class(5), -1);
  // filiform: [e1, e_k] = e_{k+1}, k = 2..4, class 4
  StructureConstants f(std::vector<Parity>(5, Parity::even));
  for (int k = 1; k < 4; ++k) f.set_bracket(0, k, k + 1, 1.0);
  EXPECT_EQ(f.nilpotency_class(5), 4);
  EXPECT_EQ(f.nilpotency_class(3), -1);
}

TEST(Algebra, DimensionMismatch) {
  EXPECT_THROW(bracket(sl2(), AlgebraElement::zero(2, 0), AlgebraElement::zero(3, 0)),
               DimensionError);
}

// Properties

TEST(AlgebraProperty, JacobiOnRandomEvenElements) {
  std::mt19937_64 rng(21);
  for (const auto& sc : {heisenberg(), sl2(), supertranslation(2)}) {
    ASSERT_LE(check_jacobi(sc).value, 1e-12);
    for (int trial = 0; trial < 100; ++trial) {
      const auto x = random_even_element(rng, sc, 4);
      const auto y = random_even_element(rng, sc, 4);
      const auto z = random_even_element(rng, sc, 4);
      const auto jac = bracket(sc, x, bracket(sc, y, z)) + bracket(sc, y, bracket(sc, z, x)) +
                       bracket(sc, z, bracket(sc, x, y));
      EXPECT_LE(jac.max_abs(), 1e-10);
    }
  }
}

TEST(AlgebraProperty, BodyCommutesWithBracket) {
  std::mt19937_64 rng(22);
  for (const auto& sc : {heisenberg(), sl2(), supertranslation(2)}) {
    for (int trial = 0; trial < 50; ++trial) {
      const auto x = random_even_element(rng, sc, 3);
      const auto y = random_even_element(rng, sc, 3);
      EXPECT_EQ(bracket(sc, x, y).body(), bracket(sc, x.body(), y.body()));
    }
  }
}

TEST(AlgebraProperty, LeftLinearity) {
  std::mt19937_64 rng(23);
  const auto sc = supertranslation(2);
  for (int trial = 0; trial < 50; ++trial) {
    const auto x = random_even_element(rng, sc, 4);
    const auto y = random_even_element(rng, sc, 4);
    auto a = random_even_element(rng, StructureConstants::abelian(1), 4).coords[0];
    const auto lhs = bracket(sc, a * x, y);
    const auto rhs = a * bracket(sc, x, y);
    EXPECT_LE((lhs - rhs).max_abs(), 1e-14);
  }
}

}  // namespace
}  // namespace liact
