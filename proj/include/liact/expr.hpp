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

// Coefficient expressions for vector fields.
//
// An Expr is kept in a normal form: a sum of terms
//     coeff * a_1^p_1 * ... * a_r^p_r * th_{j1} * ... * th_{js}
// where the a_i are atoms (even variables, sin/cos/exp of an argument free
// of odd variables, or a multi-term sum raised to a negative power) sorted
// canonically, and the odd variables appear in ascending order. Repeated odd
// variables cancel at construction time.

#ifndef LIACT_EXPR_HPP
#define LIACT_EXPR_HPP

#include <cmath>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "liact/grassmann.hpp"

namespace liact {

struct Variable {
  std::string name;
  Parity parity = Parity::even;
  int index = 0;  // position among variables of the same parity
};

/// Declared variables (even and odd, in declaration order) and named
/// constants available to the parser.
class ExprContext {
 public:
  ExprContext() = default;
  ExprContext(const std::vector<std::string>& even, const std::vector<std::string>& odd);

  const Variable& add_even(const std::string& name);
  const Variable& add_odd(const std::string& name);
  void set_constant(const std::string& name, double value);

  const Variable* find(std::string_view name) const;
  std::optional<double> constant(std::string_view name) const;

  int num_even() const { return static_cast<int>(even_.size()); }
  int num_odd() const { return static_cast<int>(odd_.size()); }
  const Variable& even(int i) const { return even_[i]; }
  const Variable& odd(int i) const { return odd_[i]; }

 private:
  void check_new(const std::string& name) const;

  std::vector<Variable> even_;
  std::vector<Variable> odd_;
  std::map<std::string, double, std::less<>> constants_;
};

enum class FuncKind { sin, cos, exp };

struct Atom;
using AtomPtr = std::shared_ptr<const Atom>;

struct Factor {
  AtomPtr atom;
  int power = 1;
};

struct Term {
  double coeff = 0.0;
  std::vector<Factor> factors;  // sorted, nonzero powers, distinct atoms
  Mask odd = 0;                 // odd variables, ascending
};

class Expr {
 public:
  Expr() = default;  // zero
  Expr(double c);    // NOLINT(google-explicit-constructor): constants mix freely

  static Expr variable(const Variable& v);
  /// Normalizes a single term (sorts, expands positive powers of sums).
  static Expr from_term(Term t) { return from_terms({std::move(t)}); }
  static Expr func(FuncKind kind, const Expr& arg);

  const std::vector<Term>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  /// Value if the expression has no variables or atoms.
  std::optional<double> constant_value() const;
  bool is_polynomial() const;

  /// Parity of a homogeneous expression; nullopt for mixed sums. Zero is even.
  std::optional<Parity> parity() const;
  bool has_parity(Parity p) const;
  bool depends_on_odd() const;

  friend Expr operator+(const Expr& a, const Expr& b);
  friend Expr operator-(const Expr& a, const Expr& b);
  friend Expr operator*(const Expr& a, const Expr& b);
  friend Expr operator/(const Expr& a, const Expr& b);
  friend Expr operator-(const Expr& a);
  Expr& operator+=(const Expr& b) { return *this = *this + b; }
  Expr& operator-=(const Expr& b) { return *this = *this - b; }
  Expr& operator*=(const Expr& b) { return *this = *this * b; }
  Expr pow(int n) const;

  friend bool operator==(const Expr& a, const Expr& b);

  /// Canonical form; parse(print(e)) == e.
  std::string str(const ExprContext& ctx) const;

 private:
  static Expr from_terms(std::vector<Term> terms);
  Expr inverse() const;

  std::vector<Term> terms_;
};

struct Atom {
  enum class Kind { var, func, group };
  Kind kind = Kind::var;
  int var = -1;                // even variable index (var)
  FuncKind fn = FuncKind::sin;  // (func)
  Expr arg;                     // function argument (func) or the sum (group)
  std::string key;              // canonical identity, used for ordering
};

/// Parses `src` against `ctx`. Throws ParseError with the byte offset of the
/// offending token.
Expr parse(std::string_view src, const ExprContext& ctx);

/// Partial derivative; odd variables use the left derivative.
Expr differentiate(const Expr& e, const Variable& v);

/// Derivative tower of sin/cos/exp.
double func_derivative(FuncKind kind, int order, double x);
double func_value(FuncKind kind, double x);
const char* to_string(FuncKind kind);

/// Values for evaluation; `one` fixes the ring shape (e.g. generator count).
template <class Ring>
struct Binding {
  std::vector<Ring> even;
  std::vector<Ring> odd;
  Ring one;
};

/// Repeated multiplication, so that the body of a supernumber result is
/// computed by exactly the same floating-point operations as the real case.
template <class Ring>
Ring ring_pow(const Ring& x, int n, const Ring& one) {
  if (n < 0) return ring_pow(nilpotent_inverse(x), -n, one);
  Ring r = one;
  for (int i = 0; i < n; ++i) r = r * x;
  return r;
}

template <class Ring>
Ring evaluate(const Expr& e, const Binding<Ring>& b);

template <class Ring>
Ring evaluate_atom(const Atom& a, const Binding<Ring>& b) {
  switch (a.kind) {
    case Atom::Kind::var:
      return b.even.at(a.var);
    case Atom::Kind::func: {
      const Ring x = evaluate(a.arg, b);
      const FuncKind fn = a.fn;
      if constexpr (std::is_same_v<Ring, double>) {
        return func_value(fn, x);
      } else {
        return taylor_extend([fn](int k, double v) { return func_derivative(fn, k, v); }, x);
      }
    }
    case Atom::Kind::group:
      return evaluate(a.arg, b);
  }
  return b.one;
}

/// Evaluates over double (odd variables are ignored: their terms vanish),
/// Supernumber, or any ring with the same customization points.
template <class Ring>
Ring evaluate(const Expr& e, const Binding<Ring>& b) {
  Ring acc = b.one * 0.0;
  for (const Term& t : e.terms()) {
    Ring v = b.one * t.coeff;
    for (const Factor& f : t.factors) {
      v = v * ring_pow(evaluate_atom(*f.atom, b), f.power, b.one);
    }
    if (t.odd != 0) {
      if constexpr (std::is_same_v<Ring, double>) {
        continue;
      } else {
        Ring theta = b.one;
        for (Mask m = t.odd; m != 0; m &= m - 1) theta = theta * b.odd.at(std::countr_zero(m));
        v = v * theta;
      }
    }
    acc = acc + v;
  }
  return acc;
}

/// Convenience: real evaluation at even coordinates.
double evaluate_real(const Expr& e, const std::vector<double>& even);

/// Evaluation at supernumber coordinates; checks the parity of each value.
Supernumber evaluate_super(const Expr& e, const std::vector<Supernumber>& even,
                           const std::vector<Supernumber>& odd);

}  // namespace liact

#endif  // LIACT_EXPR_HPP
