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

#include "liact/expr.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <functional>

#include "liact/errors.hpp"

namespace liact {

// ---------------------------------------------------------------------------
// context

ExprContext::ExprContext(const std::vector<std::string>& even,
                         const std::vector<std::string>& odd) {
  for (const auto& n : even) add_even(n);
  for (const auto& n : odd) add_odd(n);
}

void ExprContext::check_new(const std::string& name) const {
  if (find(name) != nullptr || constants_.count(name) != 0) {
    throw Error("identifier '" + name + "' declared twice");
  }
  if (name == "sin" || name == "cos" || name == "exp") {
    throw Error("identifier '" + name + "' is reserved");
  }
}

const Variable& ExprContext::add_even(const std::string& name) {
  check_new(name);
  even_.push_back({name, Parity::even, num_even()});
  return even_.back();
}

const Variable& ExprContext::add_odd(const std::string& name) {
  check_new(name);
  if (num_odd() >= 31) throw DimensionError("too many odd variables");
  odd_.push_back({name, Parity::odd, num_odd()});
  return odd_.back();
}

void ExprContext::set_constant(const std::string& name, double value) {
  if (find(name) != nullptr) throw Error("constant '" + name + "' shadows a variable");
  constants_[name] = value;
}

const Variable* ExprContext::find(std::string_view name) const {
  for (const auto& v : even_) {
    if (v.name == name) return &v;
  }
  for (const auto& v : odd_) {
    if (v.name == name) return &v;
  }
  return nullptr;
}

std::optional<double> ExprContext::constant(std::string_view name) const {
  const auto it = constants_.find(name);
  if (it == constants_.end()) return std::nullopt;
  return it->second;
}

// ---------------------------------------------------------------------------
// scalar functions

const char* to_string(FuncKind kind) {
  switch (kind) {
    case FuncKind::sin: return "sin";
    case FuncKind::cos: return "cos";
    case FuncKind::exp: return "exp";
  }
  return "?";
}

double func_value(FuncKind kind, double x) { return func_derivative(kind, 0, x); }

double func_derivative(FuncKind kind, int order, double x) {
  switch (kind) {
    case FuncKind::exp:
      return std::exp(x);
    case FuncKind::sin:
    case FuncKind::cos: {
      const int shift = (order + (kind == FuncKind::cos ? 1 : 0)) % 4;
      switch (shift) {
        case 0: return std::sin(x);
        case 1: return std::cos(x);
        case 2: return -std::sin(x);
        default: return -std::cos(x);
      }
    }
  }
  return 0.0;
}

// ---------------------------------------------------------------------------
// printing

namespace {

using Namer = std::function<std::string(Parity, int)>;

std::string format_number(double x) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

std::string print_expr(const Expr& e, const Namer& name);

std::string print_power(std::string base, int p) {
  if (p == 1) return base;
  if (p < 0) return base + "^(" + std::to_string(p) + ")";
  return base + "^" + std::to_string(p);
}

std::string print_factor(const Factor& f, const Namer& name) {
  const Atom& a = *f.atom;
  switch (a.kind) {
    case Atom::Kind::var:
      return print_power(name(Parity::even, a.var), f.power);
    case Atom::Kind::func:
      return print_power(std::string(to_string(a.fn)) + "(" + print_expr(a.arg, name) + ")",
                         f.power);
    case Atom::Kind::group:
      return print_power("(" + print_expr(a.arg, name) + ")", f.power);
  }
  return "?";
}

// Term with |coeff|; the caller places the sign.
std::string print_term_abs(const Term& t, const Namer& name) {
  std::vector<std::string> parts;
  for (const auto& f : t.factors) parts.push_back(print_factor(f, name));
  for (Mask m = t.odd; m != 0; m &= m - 1) parts.push_back(name(Parity::odd, std::countr_zero(m)));
  const double c = std::abs(t.coeff);
  std::string body;
  for (std::size_t i = 0; i < parts.size(); ++i) body += (i ? "*" : "") + parts[i];
  if (parts.empty()) return format_number(c);
  if (c == 1.0) return body;
  return format_number(c) + "*" + body;
}

std::string print_expr(const Expr& e, const Namer& name) {
  if (e.is_zero()) return "0";
  std::string out;
  bool first = true;
  for (const Term& t : e.terms()) {
    const bool neg = t.coeff < 0;
    if (first) {
      out += neg ? "-" : "";
    } else {
      out += neg ? " - " : " + ";
    }
    out += print_term_abs(t, name);
    first = false;
  }
  return out;
}

const Namer& key_namer() {
  static const Namer n = [](Parity p, int i) {
    return (p == Parity::even ? "v" : "t") + std::to_string(i);
  };
  return n;
}

// ---------------------------------------------------------------------------
// canonical ordering

int atom_rank(const Atom& a) { return static_cast<int>(a.kind); }

int compare_atoms(const Atom& a, const Atom& b) {
  if (atom_rank(a) != atom_rank(b)) return atom_rank(a) < atom_rank(b) ? -1 : 1;
  if (a.kind == Atom::Kind::var) return a.var == b.var ? 0 : (a.var < b.var ? -1 : 1);
  if (a.kind == Atom::Kind::func && a.fn != b.fn) return a.fn < b.fn ? -1 : 1;
  const int c = a.key.compare(b.key);
  return c == 0 ? 0 : (c < 0 ? -1 : 1);
}

// Ordering of monomials ignoring the coefficient. Higher powers first;
// a term whose factors are a proper prefix of another's comes after it, so
// constants come last.
int compare_monomials(const Term& a, const Term& b) {
  const std::size_t n = std::min(a.factors.size(), b.factors.size());
  for (std::size_t i = 0; i < n; ++i) {
    const int c = compare_atoms(*a.factors[i].atom, *b.factors[i].atom);
    if (c != 0) return c;
    if (a.factors[i].power != b.factors[i].power) {
      return a.factors[i].power > b.factors[i].power ? -1 : 1;
    }
  }
  if (a.factors.size() != b.factors.size()) return a.factors.size() > b.factors.size() ? -1 : 1;
  if (a.odd == b.odd) return 0;
  if (a.odd == 0) return 1;
  if (b.odd == 0) return -1;
  return a.odd < b.odd ? -1 : 1;
}

AtomPtr make_atom(Atom a) {
  switch (a.kind) {
    case Atom::Kind::var:
      a.key = key_namer()(Parity::even, a.var);
      break;
    case Atom::Kind::func:
      a.key = std::string(to_string(a.fn)) + "(" + print_expr(a.arg, key_namer()) + ")";
      break;
    case Atom::Kind::group:
      a.key = "(" + print_expr(a.arg, key_namer()) + ")";
      break;
  }
  return std::make_shared<const Atom>(std::move(a));
}

// merge two sorted factor lists, adding powers of equal atoms
std::vector<Factor> merge_factors(const std::vector<Factor>& a, const std::vector<Factor>& b) {
  std::vector<Factor> out;
  std::size_t i = 0, j = 0;
  while (i < a.size() || j < b.size()) {
    int c;
    if (i == a.size()) {
      c = 1;
    } else if (j == b.size()) {
      c = -1;
    } else {
      c = compare_atoms(*a[i].atom, *b[j].atom);
    }
    if (c < 0) {
      out.push_back(a[i++]);
    } else if (c > 0) {
      out.push_back(b[j++]);
    } else {
      const int p = a[i].power + b[j].power;
      if (p != 0) out.push_back({a[i].atom, p});
      ++i;
      ++j;
    }
  }
  return out;
}

bool has_positive_group(const Term& t) {
  return std::any_of(t.factors.begin(), t.factors.end(), [](const Factor& f) {
    return f.atom->kind == Atom::Kind::group && f.power > 0;
  });
}

bool atom_depends_on_odd(const Atom& a);

bool expr_depends_on_odd(const Expr& e) {
  for (const Term& t : e.terms()) {
    if (t.odd != 0) return true;
    for (const auto& f : t.factors) {
      if (atom_depends_on_odd(*f.atom)) return true;
    }
  }
  return false;
}

bool atom_depends_on_odd(const Atom& a) {
  return a.kind == Atom::Kind::group && expr_depends_on_odd(a.arg);
}

}  // namespace

// ---------------------------------------------------------------------------
// Expr

Expr::Expr(double c) {
  if (c != 0.0) terms_.push_back(Term{c, {}, 0});
}

Expr Expr::from_terms(std::vector<Term> terms) {
  // positive powers of sums are expanded so that groups only carry negative
  // powers
  std::vector<Term> flat;
  for (auto& t : terms) {
    if (t.coeff == 0.0) continue;
    if (!has_positive_group(t)) {
      flat.push_back(std::move(t));
      continue;
    }
    Term rest{t.coeff, {}, t.odd};
    Expr product = Expr(1.0);
    for (const auto& f : t.factors) {
      if (f.atom->kind == Atom::Kind::group && f.power > 0) {
        product = product * f.atom->arg.pow(f.power);
      } else {
        rest.factors.push_back(f);
      }
    }
    Expr r;
    r.terms_.push_back(std::move(rest));
    for (auto& u : (r * product).terms_) flat.push_back(std::move(u));
  }
  std::stable_sort(flat.begin(), flat.end(),
                   [](const Term& a, const Term& b) { return compare_monomials(a, b) < 0; });
  Expr out;
  for (auto& t : flat) {
    if (!out.terms_.empty() && compare_monomials(out.terms_.back(), t) == 0) {
      out.terms_.back().coeff += t.coeff;
    } else {
      out.terms_.push_back(std::move(t));
    }
  }
  std::erase_if(out.terms_, [](const Term& t) { return t.coeff == 0.0; });
  return out;
}

Expr Expr::variable(const Variable& v) {
  Expr e;
  if (v.parity == Parity::odd) {
    e.terms_.push_back(Term{1.0, {}, Mask{1} << v.index});
    return e;
  }
  Atom a;
  a.kind = Atom::Kind::var;
  a.var = v.index;
  e.terms_.push_back(Term{1.0, {Factor{make_atom(std::move(a)), 1}}, 0});
  return e;
}

Expr Expr::func(FuncKind kind, const Expr& arg) {
  if (arg.depends_on_odd()) {
    throw ParityError(std::string("odd variable in the argument of ") + to_string(kind));
  }
  if (const auto c = arg.constant_value()) return Expr(func_value(kind, *c));
  Atom a;
  a.kind = Atom::Kind::func;
  a.fn = kind;
  a.arg = arg;
  Expr e;
  e.terms_.push_back(Term{1.0, {Factor{make_atom(std::move(a)), 1}}, 0});
  return e;
}

std::optional<double> Expr::constant_value() const {
  if (terms_.empty()) return 0.0;
  if (terms_.size() == 1 && terms_[0].factors.empty() && terms_[0].odd == 0) {
    return terms_[0].coeff;
  }
  return std::nullopt;
}

bool Expr::is_polynomial() const {
  for (const Term& t : terms_) {
    for (const auto& f : t.factors) {
      if (f.atom->kind != Atom::Kind::var || f.power < 0) return false;
    }
  }
  return true;
}

std::optional<Parity> Expr::parity() const {
  if (terms_.empty()) return Parity::even;
  const int p = std::popcount(terms_[0].odd) & 1;
  for (const Term& t : terms_) {
    if ((std::popcount(t.odd) & 1) != p) return std::nullopt;
  }
  return parity_of_bit(p);
}

bool Expr::has_parity(Parity p) const {
  if (terms_.empty()) return true;
  const auto q = parity();
  return q && *q == p;
}

bool Expr::depends_on_odd() const { return expr_depends_on_odd(*this); }

Expr operator+(const Expr& a, const Expr& b) {
  std::vector<Term> t = a.terms_;
  t.insert(t.end(), b.terms_.begin(), b.terms_.end());
  return Expr::from_terms(std::move(t));
}

Expr operator-(const Expr& a) {
  Expr r = a;
  for (auto& t : r.terms_) t.coeff = -t.coeff;
  return r;
}

Expr operator-(const Expr& a, const Expr& b) { return a + (-b); }

Expr operator*(const Expr& a, const Expr& b) {
  std::vector<Term> out;
  for (const Term& ta : a.terms_) {
    for (const Term& tb : b.terms_) {
      if (ta.odd & tb.odd) continue;
      Term t;
      t.coeff = merge_sign(ta.odd, tb.odd) * (ta.coeff * tb.coeff);
      t.factors = merge_factors(ta.factors, tb.factors);
      t.odd = ta.odd | tb.odd;
      out.push_back(std::move(t));
    }
  }
  return Expr::from_terms(std::move(out));
}

Expr Expr::inverse() const {
  if (terms_.empty()) throw DomainError("division by zero");
  if (terms_.size() == 1) {
    const Term& t = terms_[0];
    if (t.odd != 0) throw DomainError("division by a monomial in odd variables (zero body)");
    Term r{1.0 / t.coeff, t.factors, 0};
    for (auto& f : r.factors) f.power = -f.power;
    return from_terms({r});
  }
  if (!has_parity(Parity::even)) throw ParityError("denominator is not even");
  Atom a;
  a.kind = Atom::Kind::group;
  a.arg = *this;
  Expr e;
  e.terms_.push_back(Term{1.0, {Factor{make_atom(std::move(a)), -1}}, 0});
  return e;
}

Expr operator/(const Expr& a, const Expr& b) { return a * b.inverse(); }

Expr Expr::pow(int n) const {
  if (n < 0) return inverse().pow(-n);
  Expr r(1.0);
  for (int i = 0; i < n; ++i) r = r * *this;
  return r;
}

bool operator==(const Expr& a, const Expr& b) {
  if (a.terms_.size() != b.terms_.size()) return false;
  for (std::size_t i = 0; i < a.terms_.size(); ++i) {
    if (a.terms_[i].coeff != b.terms_[i].coeff) return false;
    if (compare_monomials(a.terms_[i], b.terms_[i]) != 0) return false;
  }
  return true;
}

std::string Expr::str(const ExprContext& ctx) const {
  const Namer namer = [&ctx](Parity p, int i) {
    if (p == Parity::even) {
      return i < ctx.num_even() ? ctx.even(i).name : "x?" + std::to_string(i);
    }
    return i < ctx.num_odd() ? ctx.odd(i).name : "th?" + std::to_string(i);
  };
  return print_expr(*this, namer);
}

// ---------------------------------------------------------------------------
// differentiation

namespace {

Expr differentiate_atom(const Atom& a, const Variable& v) {
  switch (a.kind) {
    case Atom::Kind::var:
      return (v.parity == Parity::even && v.index == a.var) ? Expr(1.0) : Expr();
    case Atom::Kind::func: {
      const Expr darg = differentiate(a.arg, v);
      if (darg.is_zero()) return Expr();
      switch (a.fn) {
        case FuncKind::sin: return Expr::func(FuncKind::cos, a.arg) * darg;
        case FuncKind::cos: return -Expr::func(FuncKind::sin, a.arg) * darg;
        case FuncKind::exp: return Expr::func(FuncKind::exp, a.arg) * darg;
      }
      return Expr();
    }
    case Atom::Kind::group:
      return differentiate(a.arg, v);
  }
  return Expr();
}

}  // namespace

Expr differentiate(const Expr& e, const Variable& v) {
  Expr out;
  for (const Term& t : e.terms()) {
    const Expr theta = Expr::from_term(Term{1.0, {}, t.odd});
    // even factors: p a^(p-1) (da) * rest * theta; the even part commutes,
    // so the odd derivative passes it without sign
    for (std::size_t i = 0; i < t.factors.size(); ++i) {
      const Factor& f = t.factors[i];
      const Expr da = differentiate_atom(*f.atom, v);
      if (da.is_zero()) continue;
      Term rest{t.coeff * f.power, {}, 0};
      for (std::size_t j = 0; j < t.factors.size(); ++j) {
        if (j != i) {
          rest.factors.push_back(t.factors[j]);
        } else if (f.power != 1) {
          rest.factors.push_back({f.atom, f.power - 1});
        }
      }
      out += Expr::from_term(std::move(rest)) * da * theta;
    }
    if (v.parity == Parity::odd) {
      const Mask bit = Mask{1} << v.index;
      if (t.odd & bit) {
        // left derivative passes the odd variables standing before it
        const double sign = (std::popcount(t.odd & (bit - 1)) & 1) ? -1.0 : 1.0;
        out += Expr::from_term(Term{sign * t.coeff, t.factors, t.odd & ~bit});
      }
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// parser

namespace {

class Parser {
 public:
  Parser(std::string_view src, const ExprContext& ctx) : src_(src), ctx_(ctx) {}

  Expr parse_all() {
    skip_ws();
    if (pos_ == src_.size()) throw ParseError(pos_, "expected an expression");
    Expr e = parse_sum();
    skip_ws();
    if (pos_ != src_.size()) fail_unexpected();
    return e;
  }

 private:
  void skip_ws() {
    while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_ws();
    if (pos_ < src_.size() && src_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  [[noreturn]] void fail_unexpected() {
    if (pos_ >= src_.size()) throw ParseError(pos_, "unexpected end of input");
    throw ParseError(pos_, std::string("unexpected '") + src_[pos_] + "'");
  }

  // Runs an Expr operation, reporting algebraic errors at `at`.
  template <class F>
  Expr guarded(std::size_t at, F&& f) {
    try {
      return f();
    } catch (const ParseError&) {
      throw;
    } catch (const Error& e) {
      throw ParseError(at, e.what());
    }
  }

  Expr parse_sum() {
    Expr e = parse_product();
    for (;;) {
      if (accept('+')) {
        e = e + parse_product();
      } else if (accept('-')) {
        e = e - parse_product();
      } else {
        return e;
      }
    }
  }

  Expr parse_product() {
    Expr e = parse_unary();
    for (;;) {
      skip_ws();
      const std::size_t at = pos_;
      if (accept('*')) {
        e = e * parse_unary();
      } else if (accept('/')) {
        const Expr d = parse_unary();
        e = guarded(at, [&] { return e / d; });
      } else {
        return e;
      }
    }
  }

  Expr parse_unary() {
    if (accept('-')) return -parse_unary();
    if (accept('+')) return parse_unary();
    return parse_power();
  }

  Expr parse_power() {
    Expr base = parse_primary();
    skip_ws();
    const std::size_t at = pos_;
    if (!accept('^')) return base;
    skip_ws();
    const std::size_t exp_at = pos_;
    const Expr exponent = parse_unary();
    const auto c = exponent.constant_value();
    if (!c || *c != std::round(*c) || std::abs(*c) > 1000) {
      throw ParseError(exp_at, "exponent must be an integer constant");
    }
    return guarded(at, [&] { return base.pow(static_cast<int>(*c)); });
  }

  Expr parse_primary() {
    skip_ws();
    if (pos_ >= src_.size()) fail_unexpected();
    const char c = src_[pos_];
    if (c == '(') {
      ++pos_;
      Expr e = parse_sum();
      if (!accept(')')) fail_unexpected();
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return parse_number();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return parse_identifier();
    fail_unexpected();
  }

  Expr parse_number() {
    const std::size_t start = pos_;
    while (pos_ < src_.size() &&
           (std::isdigit(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '.')) {
      ++pos_;
    }
    if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
      std::size_t q = pos_ + 1;
      if (q < src_.size() && (src_[q] == '+' || src_[q] == '-')) ++q;
      if (q < src_.size() && std::isdigit(static_cast<unsigned char>(src_[q]))) {
        pos_ = q;
        while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_;
      }
    }
    double value = 0.0;
    const auto res = std::from_chars(src_.data() + start, src_.data() + pos_, value);
    if (res.ec != std::errc() || res.ptr != src_.data() + pos_) {
      throw ParseError(start, "malformed number");
    }
    return Expr(value);
  }

  Expr parse_identifier() {
    const std::size_t start = pos_;
    while (pos_ < src_.size() &&
           (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_')) {
      ++pos_;
    }
    const std::string_view name = src_.substr(start, pos_ - start);
    skip_ws();
    if (pos_ < src_.size() && src_[pos_] == '(') {
      FuncKind kind;
      if (name == "sin") {
        kind = FuncKind::sin;
      } else if (name == "cos") {
        kind = FuncKind::cos;
      } else if (name == "exp") {
        kind = FuncKind::exp;
      } else {
        throw ParseError(start, "unknown function '" + std::string(name) + "'");
      }
      ++pos_;
      const Expr arg = parse_sum();
      if (!accept(')')) fail_unexpected();
      return guarded(start, [&] { return Expr::func(kind, arg); });
    }
    if (const Variable* v = ctx_.find(name)) return Expr::variable(*v);
    if (const auto c = ctx_.constant(name)) return Expr(*c);
    throw ParseError(start, "unknown identifier '" + std::string(name) + "'");
  }

  std::string_view src_;
  const ExprContext& ctx_;
  std::size_t pos_ = 0;
};

}  // namespace

Expr parse(std::string_view src, const ExprContext& ctx) { return Parser(src, ctx).parse_all(); }

// ---------------------------------------------------------------------------
// evaluation helpers

double evaluate_real(const Expr& e, const std::vector<double>& even) {
  return evaluate(e, Binding<double>{even, {}, 1.0});
}

Supernumber evaluate_super(const Expr& e, const std::vector<Supernumber>& even,
                           const std::vector<Supernumber>& odd) {
  int n = 0;
  if (!even.empty()) {
    n = even.front().num_generators();
  } else if (!odd.empty()) {
    n = odd.front().num_generators();
  }
  for (const auto& v : even) {
    if (!v.is_even()) throw ParityError("value bound to an even variable is not even");
  }
  for (const auto& v : odd) {
    if (!v.is_odd()) throw ParityError("value bound to an odd variable is not odd");
  }
  return evaluate(e, Binding<Supernumber>{even, odd, Supernumber(n, 1.0)});
}

}  // namespace liact
