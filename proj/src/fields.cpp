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

#include "liact/fields.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "liact/errors.hpp"

namespace liact {

Chart::Chart(std::vector<std::string> even, std::vector<std::string> odd)
    : even_(std::move(even)),
      odd_(std::move(odd)),
      box_(even_.size()),
      periodic_(even_.size(), false) {
  context();  // rejects duplicate or reserved names
}

void Chart::set_interval(int coord, Interval iv) {
  if (coord < 0 || coord >= n0()) throw DimensionError("interval on a non-even coordinate");
  if (!(iv.lo < iv.hi)) throw DomainError("empty interval for " + even_[coord]);
  box_[coord] = iv;
}

void Chart::set_periodic(int coord, bool periodic) {
  if (coord < 0 || coord >= n0()) throw DimensionError("only even coordinates can be periodic");
  periodic_[coord] = periodic;
}

bool Chart::any_periodic() const {
  return std::find(periodic_.begin(), periodic_.end(), true) != periodic_.end();
}

double Chart::margin(const std::vector<double>& body) const {
  double m = std::numeric_limits<double>::infinity();
  for (int c = 0; c < n0(); ++c) {
    const double x = body.at(c);
    if (!std::isfinite(x)) return -std::numeric_limits<double>::infinity();
    if (periodic_[c]) continue;
    m = std::min({m, x - box_[c].lo, box_[c].hi - x});
  }
  return m;
}

std::vector<double> Chart::normalized(std::vector<double> body) const {
  for (int c = 0; c < n0(); ++c) {
    if (periodic_[c]) body[c] -= std::floor(body[c]);
  }
  return body;
}

ExprContext Chart::context() const { return ExprContext(even_, odd_); }

std::vector<double> Chart::sample(std::mt19937_64& rng) const {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> x(n0());
  for (int c = 0; c < n0(); ++c) {
    const double r = u(rng);
    const Interval& iv = box_[c];
    if (periodic_[c]) {
      x[c] = r;
    } else if (std::isfinite(iv.lo) && std::isfinite(iv.hi)) {
      x[c] = iv.lo + (0.05 + 0.9 * r) * (iv.hi - iv.lo);
    } else if (std::isfinite(iv.lo)) {
      x[c] = iv.lo + 0.1 + 1.9 * r;
    } else if (std::isfinite(iv.hi)) {
      x[c] = iv.hi - 0.1 - 1.9 * r;
    } else {
      x[c] = 2.0 * r - 1.0;
    }
  }
  return x;
}

Point real_point(const std::vector<double>& even, int n1, int num_generators) {
  Point m;
  m.reserve(even.size() + n1);
  for (double v : even) m.emplace_back(num_generators, v);
  for (int j = 0; j < n1; ++j) m.emplace_back(num_generators, 0.0);
  return m;
}

std::vector<double> body_of(const Point& m) {
  std::vector<double> b;
  b.reserve(m.size());
  for (const auto& s : m) b.push_back(s.body());
  return b;
}

bool VectorField::is_zero() const {
  return std::all_of(components.begin(), components.end(),
                     [](const Expr& e) { return e.is_zero(); });
}

std::string VectorField::str(const Chart& chart, const ExprContext& ctx) const {
  std::ostringstream os;
  bool first = true;
  for (int c = 0; c < static_cast<int>(components.size()); ++c) {
    if (components[c].is_zero()) continue;
    if (!first) os << " + ";
    os << '(' << components[c].str(ctx) << ") d_" << chart.name(c);
    first = false;
  }
  if (first) os << '0';
  return os.str();
}

std::optional<std::string> parity_problem(const VectorField& field, const Chart& chart) {
  if (static_cast<int>(field.components.size()) != chart.size()) {
    return "field has " + std::to_string(field.components.size()) + " components, chart has " +
           std::to_string(chart.size());
  }
  for (int c = 0; c < chart.size(); ++c) {
    const Parity want = c < chart.n0() ? field.parity : field.parity + Parity::odd;
    if (!field.components[c].has_parity(want)) {
      return "component d_" + chart.name(c) + " of a " + to_string(field.parity) +
             " field must be " + to_string(want);
    }
  }
  return std::nullopt;
}

namespace {

Variable coordinate(const ExprContext& ctx, int c) {
  return c < ctx.num_even() ? ctx.even(c) : ctx.odd(c - ctx.num_even());
}

// sum_j a^j d_j b^k
Expr apply(const VectorField& a, const Expr& bk, const ExprContext& ctx) {
  Expr out;
  for (int j = 0; j < static_cast<int>(a.components.size()); ++j) {
    if (a.components[j].is_zero()) continue;
    out += a.components[j] * differentiate(bk, coordinate(ctx, j));
  }
  return out;
}

double max_coeff(const Expr& e) {
  double m = 0.0;
  for (const Term& t : e.terms()) m = std::max(m, std::abs(t.coeff));
  return m;
}

}  // namespace

VectorField graded_bracket_fields(const VectorField& a, const VectorField& b,
                                  const ExprContext& ctx) {
  if (a.components.size() != b.components.size()) {
    throw DimensionError("bracket of fields with different component counts");
  }
  const double sign = (a.parity == Parity::odd && b.parity == Parity::odd) ? -1.0 : 1.0;
  VectorField r;
  r.parity = a.parity + b.parity;
  r.components.reserve(a.components.size());
  for (std::size_t k = 0; k < a.components.size(); ++k) {
    r.components.push_back(apply(a, b.components[k], ctx) -
                           sign * apply(b, a.components[k], ctx));
  }
  return r;
}

Representation::Representation(StructureConstants sc, Chart chart, ExprContext ctx,
                               std::vector<VectorField> fields, int num_generators)
    : sc_(std::move(sc)),
      chart_(std::move(chart)),
      ctx_(std::move(ctx)),
      fields_(std::move(fields)),
      num_generators_(num_generators) {
  if (static_cast<int>(fields_.size()) != sc_.dim()) {
    throw DimensionError("rho has " + std::to_string(fields_.size()) +
                         " fields for an algebra of dimension " + std::to_string(sc_.dim()));
  }
  for (const auto& f : fields_) {
    if (static_cast<int>(f.components.size()) != chart_.size()) {
      throw DimensionError("field has " + std::to_string(f.components.size()) +
                           " components, chart has " + std::to_string(chart_.size()));
    }
  }
  if (num_generators_ < 0 || num_generators_ > Supernumber::kMaxGenerators) {
    throw DimensionError("generator count out of range");
  }
}

Representation Representation::parse(StructureConstants sc, Chart chart,
                                     const std::vector<std::vector<std::string>>& rho,
                                     const std::vector<std::pair<std::string, double>>& constants,
                                     int num_generators) {
  ExprContext ctx = chart.context();
  for (const auto& [name, value] : constants) ctx.set_constant(name, value);
  if (static_cast<int>(rho.size()) != sc.dim()) {
    throw DimensionError("rho has " + std::to_string(rho.size()) +
                         " entries for an algebra of dimension " + std::to_string(sc.dim()));
  }
  std::vector<VectorField> fields;
  for (int i = 0; i < sc.dim(); ++i) {
    if (static_cast<int>(rho[i].size()) != chart.size()) {
      throw DimensionError("rho entry " + std::to_string(i + 1) + " has " +
                           std::to_string(rho[i].size()) + " components, chart has " +
                           std::to_string(chart.size()));
    }
    VectorField f;
    f.parity = sc.parity(i);
    for (const auto& src : rho[i]) f.components.push_back(liact::parse(src, ctx));
    fields.push_back(std::move(f));
  }
  return Representation(std::move(sc), std::move(chart), std::move(ctx), std::move(fields),
                        num_generators);
}

bool Representation::polynomial() const {
  for (const auto& f : fields_) {
    for (const auto& c : f.components) {
      if (!c.is_polynomial()) return false;
    }
  }
  return true;
}

std::vector<Supernumber> eval_rho(const Representation& rep, const AlgebraElement& x,
                                  const Point& m) {
  const int n = rep.chart().size();
  if (x.dim() != rep.dim()) throw DimensionError("algebra element has the wrong dimension");
  if (static_cast<int>(m.size()) != n) throw DimensionError("point has the wrong dimension");
  const int N = rep.num_generators();
  for (const auto& c : x.coords) {
    if (c.num_generators() != N) throw DimensionError("generator count mismatch");
  }
  for (const auto& c : m) {
    if (c.num_generators() != N) throw DimensionError("generator count mismatch");
  }
  if (!is_even_element(rep.algebra(), x)) {
    throw ParityError("rho(X) needs an even element X");
  }
  for (int c = 0; c < n; ++c) {
    const Parity want = c < rep.chart().n0() ? Parity::even : Parity::odd;
    if (!m[c].has_parity(want)) {
      throw ParityError("coordinate " + rep.chart().name(c) + " must be " + to_string(want));
    }
  }
  if (!rep.chart().contains(body_of(m))) throw DomainError("point outside the chart");
  return field_rhs<Supernumber>(rep, x.coords, m, Supernumber(N, 1.0));
}

std::vector<double> eval_rho(const Representation& rep, const std::vector<double>& x,
                             const std::vector<double>& m) {
  const int n0 = rep.chart().n0();
  if (static_cast<int>(x.size()) != rep.dim()) {
    throw DimensionError("algebra element has the wrong dimension");
  }
  if (static_cast<int>(m.size()) != n0) throw DimensionError("point has the wrong dimension");
  for (int i = 0; i < rep.dim(); ++i) {
    if (rep.algebra().parity(i) == Parity::odd && x[i] != 0.0) {
      throw ParityError("real coefficients on odd basis elements must vanish");
    }
  }
  if (!rep.chart().contains(m)) throw DomainError("point outside the chart");
  std::vector<double> full(m);
  full.resize(rep.chart().size(), 0.0);
  return field_rhs<double>(rep, x, full, 1.0);
}

namespace {

// Odd coordinates become independent generators, so every theta-coefficient
// of a residual is seen separately.
double sampled_norm(const VectorField& r, const Chart& chart, const std::vector<double>& body) {
  const int n1 = chart.n1();
  if (n1 > Supernumber::kMaxGenerators) throw DimensionError("too many odd coordinates to sample");
  std::vector<Supernumber> even;
  for (double v : body) even.emplace_back(n1, v);
  std::vector<Supernumber> odd;
  for (int j = 0; j < n1; ++j) odd.push_back(Supernumber::generator(n1, j + 1));
  double m = 0.0;
  for (const Expr& c : r.components) {
    m = std::max(m, evaluate_super(c, even, odd).max_abs());
  }
  return m;
}

bool polynomial(const VectorField& f) {
  return std::all_of(f.components.begin(), f.components.end(),
                     [](const Expr& e) { return e.is_polynomial(); });
}

}  // namespace

ValidationReport validate_representation(const Representation& rep, int samples,
                                         std::uint64_t seed, double tol) {
  ValidationReport report;
  report.method = "symbolic";
  const StructureConstants& sc = rep.algebra();
  const Chart& chart = rep.chart();
  report.jacobi = check_jacobi(sc).value;
  report.antisymmetry = check_antisymmetry(sc).value;
  report.parity_consistency = check_parity_consistency(sc).value;

  for (int i = 0; i < rep.dim(); ++i) {
    if (rep.field(i).parity != sc.parity(i)) {
      report.problems.push_back("rho(e" + std::to_string(i + 1) + ") has the wrong parity");
    }
    if (auto p = parity_problem(rep.field(i), chart)) {
      report.problems.push_back("rho(e" + std::to_string(i + 1) + "): " + *p);
    }
  }

  std::mt19937_64 rng(seed);
  std::vector<std::vector<double>> points;
  for (int s = 0; s < samples; ++s) points.push_back(chart.sample(rng));

  for (int i = 0; i < rep.dim(); ++i) {
    for (int j = i; j < rep.dim(); ++j) {
      VectorField r = graded_bracket_fields(rep.field(i), rep.field(j), rep.context());
      for (int k = 0; k < rep.dim(); ++k) {
        const double c = sc(i, j, k);
        if (c == 0.0) continue;
        for (int q = 0; q < chart.size(); ++q) {
          r.components[q] -= c * rep.field(k).components[q];
        }
      }
      double value = 0.0;
      if (!r.is_zero()) {
        if (polynomial(r) || points.empty()) {
          for (const auto& e : r.components) value = std::max(value, max_coeff(e));
        } else {
          report.method = "sampled";
          for (const auto& p : points) value = std::max(value, sampled_norm(r, chart, p));
        }
      }
      if (report.worst[0] < 0 || value > report.residual) {
        report.residual = value;
        report.worst = {i, j};
      }
    }
  }

  // Components must agree at x and x + 1 along every periodic coordinate.
  for (int c = 0; c < chart.n0(); ++c) {
    if (!chart.periodic(c)) continue;
    for (int i = 0; i < rep.dim(); ++i) {
      double worst = 0.0;
      for (const auto& p : points) {
        std::vector<double> q = p;
        q[c] += 1.0;
        for (const Expr& e : rep.field(i).components) {
          const VectorField one{rep.field(i).parity, {e}};
          worst = std::max(worst, std::abs(sampled_norm(one, chart, p) -
                                           sampled_norm(one, chart, q)));
        }
      }
      if (worst > 1e-9) {
        report.problems.push_back("rho(e" + std::to_string(i + 1) + ") is not 1-periodic in " +
                                  chart.name(c));
      }
    }
  }

  report.passed = report.problems.empty() && report.residual <= tol &&
                  report.jacobi <= 1e-12 && report.antisymmetry <= 1e-12 &&
                  report.parity_consistency == 0.0;
  return report;
}

std::vector<double> fundamental_field_from_action(const ActionFn& phi, const Chart& chart,
                                                  const AlgebraElement& x,
                                                  const std::vector<double>& m, double h) {
  if (!(h > 0.0)) throw DomainError("step must be positive");
  const std::vector<double> minus = phi((-h) * x, m);
  const std::vector<double> plus = phi(h * x, m);
  std::vector<double> out(minus.size());
  for (std::size_t c = 0; c < out.size(); ++c) {
    double d = minus[c] - plus[c];
    if (static_cast<int>(c) < chart.n0() && chart.periodic(static_cast<int>(c))) {
      d -= std::round(d);
    }
    out[c] = d / (2.0 * h);
  }
  return out;
}

}  // namespace liact
