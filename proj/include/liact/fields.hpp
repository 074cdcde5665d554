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

// Vector fields on a single (super) chart and representations of a (super)
// Lie algebra by such fields.

#ifndef LIACT_FIELDS_HPP
#define LIACT_FIELDS_HPP

#include <array>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "liact/algebra.hpp"
#include "liact/expr.hpp"

namespace liact {

/// Open interval; infinite ends allowed.
struct Interval {
  double lo = -std::numeric_limits<double>::infinity();
  double hi = std::numeric_limits<double>::infinity();
};

/// Coordinates of M: even then odd. The domain is an open box on the bodies
/// of the even coordinates; periodic coordinates have period 1 and no bound.
class Chart {
 public:
  Chart() = default;
  Chart(std::vector<std::string> even, std::vector<std::string> odd);

  int n0() const { return static_cast<int>(even_.size()); }
  int n1() const { return static_cast<int>(odd_.size()); }
  int size() const { return n0() + n1(); }
  const std::vector<std::string>& even_names() const { return even_; }
  const std::vector<std::string>& odd_names() const { return odd_; }
  std::string name(int coord) const { return coord < n0() ? even_[coord] : odd_[coord - n0()]; }

  void set_interval(int coord, Interval iv);
  void set_periodic(int coord, bool periodic = true);
  const Interval& interval(int coord) const { return box_[coord]; }
  bool periodic(int coord) const { return periodic_[coord]; }
  bool any_periodic() const;

  /// Signed distance of the even bodies to the box boundary (positive
  /// inside, +inf when unbounded).
  double margin(const std::vector<double>& body) const;
  bool contains(const std::vector<double>& body) const { return margin(body) > 0.0; }

  /// Bodies of periodic coordinates reduced to [0,1).
  std::vector<double> normalized(std::vector<double> body) const;

  /// Variables named after the coordinates.
  ExprContext context() const;

  /// Random interior point: uniform in bounded directions (shrunk by 10%),
  /// in [-1,1] otherwise.
  std::vector<double> sample(std::mt19937_64& rng) const;

 private:
  std::vector<std::string> even_;
  std::vector<std::string> odd_;
  std::vector<Interval> box_;
  std::vector<bool> periodic_;
};

/// Point of M: even coordinates then odd coordinates.
using Point = std::vector<Supernumber>;

Point real_point(const std::vector<double>& even, int n1, int num_generators);
std::vector<double> body_of(const Point& m);

struct VectorField {
  Parity parity = Parity::even;
  std::vector<Expr> components;  // one per coordinate, even then odd

  bool is_zero() const;
  std::string str(const Chart& chart, const ExprContext& ctx) const;
};

/// Returns an error description when a component has the wrong parity, or
/// nullopt when the field is homogeneous of `field.parity`.
std::optional<std::string> parity_problem(const VectorField& field, const Chart& chart);

/// [a,b] = a o b - (-1)^{|a||b|} b o a, componentwise
/// [a,b]^k = sum_j a^j d_j b^k - (-1)^{|a||b|} b^j d_j a^k.
VectorField graded_bracket_fields(const VectorField& a, const VectorField& b,
                                  const ExprContext& ctx);

class Representation {
 public:
  Representation() = default;
  Representation(StructureConstants sc, Chart chart, ExprContext ctx,
                 std::vector<VectorField> fields, int num_generators);

  /// Parses component strings (one list per basis element) in the chart's
  /// variable context extended by named constants.
  static Representation parse(StructureConstants sc, Chart chart,
                              const std::vector<std::vector<std::string>>& rho,
                              const std::vector<std::pair<std::string, double>>& constants,
                              int num_generators);

  const StructureConstants& algebra() const { return sc_; }
  const Chart& chart() const { return chart_; }
  const ExprContext& context() const { return ctx_; }
  const std::vector<VectorField>& fields() const { return fields_; }
  const VectorField& field(int i) const { return fields_[i]; }
  int dim() const { return sc_.dim(); }
  int num_generators() const { return num_generators_; }
  bool polynomial() const;

 private:
  StructureConstants sc_;
  Chart chart_;
  ExprContext ctx_;
  std::vector<VectorField> fields_;
  int num_generators_ = 0;
};

/// rho(X)|_m = sum_i X^i rho(e_i)|_m for ring-valued X^i and m. Every ring
/// follows the same sequence of operations, so the real parts agree bitwise.
template <class Ring>
std::vector<Ring> field_rhs(const Representation& rep, const std::vector<Ring>& x,
                            const std::vector<Ring>& m, const Ring& one) {
  const int n0 = rep.chart().n0();
  const int n = rep.chart().size();
  Binding<Ring> b;
  b.one = one;
  b.even.assign(m.begin(), m.begin() + n0);
  b.odd.assign(m.begin() + n0, m.begin() + n);
  std::vector<Ring> out(n, one * 0.0);
  for (int i = 0; i < rep.dim(); ++i) {
    const VectorField& f = rep.field(i);
    for (int c = 0; c < n; ++c) {
      if (f.components[c].is_zero()) continue;
      out[c] = out[c] + x[i] * evaluate(f.components[c], b);
    }
  }
  return out;
}

/// Evaluates rho(X) at m; X must be even and m inside the chart.
std::vector<Supernumber> eval_rho(const Representation& rep, const AlgebraElement& x,
                                  const Point& m);
std::vector<double> eval_rho(const Representation& rep, const std::vector<double>& x,
                             const std::vector<double>& m);

struct ValidationReport {
  bool passed = false;
  double residual = 0.0;             // max over pairs of the bracket defect
  std::array<int, 2> worst{-1, -1};  // basis pair with the largest defect
  std::string method;                // "symbolic" or "sampled"
  double jacobi = 0.0;
  double antisymmetry = 0.0;
  double parity_consistency = 0.0;
  std::vector<std::string> problems;  // parity or periodicity violations
};

/// Checks [rho(e_i), rho(e_j)] = sum_k c_ij^k rho(e_k). The residual field is
/// formed symbolically; when it does not normalize to zero and contains
/// transcendental atoms it is evaluated at `samples` random super points.
ValidationReport validate_representation(const Representation& rep, int samples,
                                         std::uint64_t seed, double tol = 1e-12);

/// Phi(g, m) for a real point.
using ActionFn = std::function<std::vector<double>(const AlgebraElement& log_g,
                                                   const std::vector<double>& m)>;

/// (Phi(exp(-hX), m) - Phi(exp(hX), m)) / 2h; differences of periodic
/// coordinates are taken mod 1.
std::vector<double> fundamental_field_from_action(const ActionFn& phi, const Chart& chart,
                                                  const AlgebraElement& x,
                                                  const std::vector<double>& m, double h);

}  // namespace liact

#endif  // LIACT_FIELDS_HPP
