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

// Finite exterior algebra Lambda(R^N) ("supernumbers").
//
// A supernumber is stored densely as 2^N real coefficients indexed by the
// bitmask of the generator subset; bit i stands for generator theta_{i+1} and
// a monomial is always written with ascending generator index.

#ifndef LIACT_GRASSMANN_HPP
#define LIACT_GRASSMANN_HPP

#include <bit>
#include <cstdint>
#include <functional>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "liact/errors.hpp"

namespace liact {

enum class Parity : std::uint8_t { even = 0, odd = 1 };

inline Parity operator+(Parity a, Parity b) {
  return static_cast<Parity>(static_cast<std::uint8_t>(a) ^
                             static_cast<std::uint8_t>(b));
}
inline int parity_bit(Parity p) { return static_cast<int>(p); }
inline Parity parity_of_bit(int b) { return (b & 1) ? Parity::odd : Parity::even; }
const char* to_string(Parity p);

using Mask = std::uint32_t;

/// Sign (+1/-1) of the permutation that sorts the concatenation of the
/// ascending index lists `a` then `b`. Callers handle overlapping masks.
inline int merge_sign(Mask a, Mask b) {
  int swaps = 0;
  while (b != 0) {
    const int j = std::countr_zero(b);
    b &= b - 1;
    // generators of `a` with index above j must be passed by theta_j
    const Mask above = (j >= 31) ? 0u : (a & ~((Mask{2} << j) - 1u));
    swaps += std::popcount(above);
  }
  return (swaps & 1) ? -1 : 1;
}

class Supernumber {
 public:
  static constexpr int kMaxGenerators = 12;

  Supernumber() : Supernumber(0) {}
  explicit Supernumber(int num_generators, double body = 0.0);

  /// theta_index, 1-based as in the JSON format.
  static Supernumber generator(int num_generators, int index);
  static Supernumber monomial(int num_generators, Mask subset, double coeff);

  int num_generators() const { return n_; }
  std::size_t size() const { return c_.size(); }
  double operator[](Mask subset) const { return c_[subset]; }
  double& operator[](Mask subset) { return c_[subset]; }
  const std::vector<double>& coeffs() const { return c_; }

  double body() const { return c_[0]; }
  Supernumber soul() const;

  bool is_zero() const;
  bool is_even() const;  // zero counts as both even and odd
  bool is_odd() const;
  /// Parity when homogeneous; nullopt for mixed elements.
  std::optional<Parity> parity() const;
  bool has_parity(Parity p) const { return p == Parity::even ? is_even() : is_odd(); }
  Supernumber even_part() const;
  Supernumber odd_part() const;
  /// Grade involution: even part minus odd part.
  Supernumber twisted() const;

  /// Largest |coefficient|.
  double max_abs() const;

  Supernumber& operator+=(const Supernumber& o);
  Supernumber& operator-=(const Supernumber& o);
  Supernumber& operator*=(double s);
  Supernumber& operator+=(double s) {
    c_[0] += s;
    return *this;
  }
  Supernumber& operator-=(double s) {
    c_[0] -= s;
    return *this;
  }

  friend Supernumber operator+(Supernumber a, const Supernumber& b) { return a += b; }
  friend Supernumber operator-(Supernumber a, const Supernumber& b) { return a -= b; }
  friend Supernumber operator+(Supernumber a, double s) { return a += s; }
  friend Supernumber operator-(Supernumber a, double s) { return a -= s; }
  friend Supernumber operator*(Supernumber a, double s) { return a *= s; }
  friend Supernumber operator*(double s, Supernumber a) { return a *= s; }
  friend Supernumber operator-(Supernumber a) { return a *= -1.0; }
  friend Supernumber operator*(const Supernumber& a, const Supernumber& b);

  /// Inverse through the finite geometric series in the soul.
  Supernumber inverse() const;
  Supernumber pow(int k) const;

  friend bool operator==(const Supernumber& a, const Supernumber& b) {
    return a.n_ == b.n_ && a.c_ == b.c_;
  }

  std::string str() const;

 private:
  int n_;
  std::vector<double> c_;
};

std::ostream& operator<<(std::ostream& os, const Supernumber& s);

/// Graded product; throws DimensionError on mismatched generator counts.
inline Supernumber gr_mul(const Supernumber& a, const Supernumber& b) { return a * b; }

struct BodySoul {
  double body;
  Supernumber soul;
};
BodySoul body_soul(const Supernumber& s);

/// Derivative tower: f^(order) evaluated at a real point.
using DerivativeTower = std::function<double(int order, double x)>;

/// sum_k f^(k)(body s) soul(s)^k / k!, finite by nilpotency. Throws
/// ParityError for arguments with a nonzero odd part.
Supernumber taylor_eval(const DerivativeTower& f, const Supernumber& s);

// Scalar-ring customization points shared by the expression evaluator and the
// exact flow integrator: double, Supernumber and polynomials over them.
inline double body_of(double x) { return x; }
inline double body_of(const Supernumber& s) { return s.body(); }
inline bool nilpotent_is_zero(double) { return true; }
inline bool nilpotent_is_zero(const Supernumber& s) { return s.is_zero(); }

/// Extends a smooth scalar function to a ring element whose non-body part is
/// nilpotent: sum_k f^(k)(b) (x - b)^k / k!.
template <class Ring, class Tower>
Ring taylor_extend(const Tower& derivative, const Ring& x) {
  const double b = body_of(x);
  Ring result = x * 0.0;
  result += derivative(0, b);
  Ring nil = x - b;
  if (nilpotent_is_zero(nil)) return result;
  Ring power = nil;
  double factorial = 1.0;
  for (int k = 1; k < 64; ++k) {
    factorial *= k;
    result += power * (derivative(k, b) / factorial);
    power = power * nil;
    if (nilpotent_is_zero(power)) return result;
  }
  return result;
}

/// 1/x for ring elements with nonzero body: (1/b) sum_k (-(x-b)/b)^k.
template <class Ring>
Ring nilpotent_inverse(const Ring& x) {
  const double b = body_of(x);
  if (b == 0.0) throw DomainError("division by an element with zero body");
  Ring result = x * 0.0;
  result += 1.0 / b;
  Ring ratio = (x - b) * (-1.0 / b);
  if (nilpotent_is_zero(ratio)) return result;
  Ring power = ratio;
  for (int k = 1; k < 64; ++k) {
    result += power * (1.0 / b);
    power = power * ratio;
    if (nilpotent_is_zero(power)) break;
  }
  return result;
}

}  // namespace liact

#endif  // LIACT_GRASSMANN_HPP
