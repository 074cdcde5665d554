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

// (Super) Lie algebras given by real structure constants on a homogeneous
// basis e_1..e_d, [e_i, e_j] = sum_k c_ij^k e_k.

#ifndef LIACT_ALGEBRA_HPP
#define LIACT_ALGEBRA_HPP

#include <array>
#include <span>
#include <vector>

#include "liact/grassmann.hpp"

namespace liact {

class StructureConstants {
 public:
  StructureConstants() = default;
  explicit StructureConstants(std::vector<Parity> parities);

  static StructureConstants abelian(int dim) {
    return StructureConstants(std::vector<Parity>(dim, Parity::even));
  }

  int dim() const { return dim_; }
  const std::vector<Parity>& parities() const { return parities_; }
  Parity parity(int i) const { return parities_[i]; }

  // 0-based indices
  double operator()(int i, int j, int k) const { return c_[index(i, j, k)]; }
  double& at(int i, int j, int k) { return c_[index(i, j, k)]; }

  /// Sets c_ij^k and its graded-antisymmetric partner c_ji^k.
  void set_bracket(int i, int j, int k, double value);

  bool is_abelian() const;

  /// Smallest c such that every (c+1)-fold bracket of basis elements vanishes;
  /// -1 when none up to `max_class`.
  int nilpotency_class(int max_class) const;

  friend bool operator==(const StructureConstants&, const StructureConstants&) = default;

 private:
  std::size_t index(int i, int j, int k) const {
    return (static_cast<std::size_t>(i) * dim_ + j) * dim_ + k;
  }

  int dim_ = 0;
  std::vector<Parity> parities_;
  std::vector<double> c_;
};

/// Largest defect with the index tuple where it occurred.
struct Residual {
  double value = 0.0;
  std::array<int, 4> where{-1, -1, -1, -1};

  bool passed(double tol) const { return value <= tol; }
};

/// max |c_ij^k + (-1)^{e_i e_j} c_ji^k|.
Residual check_antisymmetry(const StructureConstants& sc);

/// Graded Jacobi defect, maximized over basis triples and output component:
/// (-1)^{e_i e_k}[e_i,[e_j,e_k]] + cyclic.
Residual check_jacobi(const StructureConstants& sc);

/// max |c_ij^k| over entries whose parities are inconsistent
/// (parity(e_k) != parity(e_i) + parity(e_j)).
Residual check_parity_consistency(const StructureConstants& sc);

/// X = sum_i X^i e_i with supernumber coordinates.
struct AlgebraElement {
  std::vector<Supernumber> coords;

  AlgebraElement() = default;
  explicit AlgebraElement(std::vector<Supernumber> c) : coords(std::move(c)) {}

  static AlgebraElement zero(int dim, int num_generators);
  static AlgebraElement real(std::span<const double> values, int num_generators);
  static AlgebraElement basis(int dim, int i, int num_generators, double coeff = 1.0);

  int dim() const { return static_cast<int>(coords.size()); }
  int num_generators() const { return coords.empty() ? 0 : coords.front().num_generators(); }
  AlgebraElement body() const;
  std::vector<double> body_values() const;
  bool is_real() const;  // all coordinates have zero soul
  bool is_zero() const;

  AlgebraElement& operator+=(const AlgebraElement& o);
  AlgebraElement& operator-=(const AlgebraElement& o);
  AlgebraElement& operator*=(double s);
  friend AlgebraElement operator+(AlgebraElement a, const AlgebraElement& b) { return a += b; }
  friend AlgebraElement operator-(AlgebraElement a, const AlgebraElement& b) { return a -= b; }
  friend AlgebraElement operator*(double s, AlgebraElement a) { return a *= s; }
  friend AlgebraElement operator*(AlgebraElement a, double s) { return a *= s; }
  /// Left multiplication by a supernumber scalar.
  friend AlgebraElement operator*(const Supernumber& s, const AlgebraElement& a);

  friend bool operator==(const AlgebraElement&, const AlgebraElement&) = default;

  double max_abs() const;
};

/// True when every coordinate X^i has parity of e_i, i.e. X lies in the even
/// part of (A tensor g).
bool is_even_element(const StructureConstants& sc, const AlgebraElement& x);

/// [X,Y]^k = sum_{i,j} X^i (-1)^{e_i |Y^j|} Y^j c_ij^k (left-linear convention).
AlgebraElement bracket(const StructureConstants& sc, const AlgebraElement& x,
                       const AlgebraElement& y);

}  // namespace liact

#endif  // LIACT_ALGEBRA_HPP
