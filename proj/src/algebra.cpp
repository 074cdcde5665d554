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

#include "liact/algebra.hpp"

#include <algorithm>
#include <cmath>

#include "liact/errors.hpp"

namespace liact {

namespace {

int koszul(Parity a, Parity b) {
  return (parity_bit(a) & parity_bit(b)) ? -1 : 1;
}

}  // namespace

StructureConstants::StructureConstants(std::vector<Parity> parities)
    : dim_(static_cast<int>(parities.size())), parities_(std::move(parities)) {
  c_.assign(static_cast<std::size_t>(dim_) * dim_ * dim_, 0.0);
}

void StructureConstants::set_bracket(int i, int j, int k, double value) {
  if (i < 0 || j < 0 || k < 0 || i >= dim_ || j >= dim_ || k >= dim_) {
    throw DimensionError("structure constant index out of range");
  }
  at(i, j, k) = value;
  at(j, i, k) = -koszul(parities_[i], parities_[j]) * value;
}

bool StructureConstants::is_abelian() const {
  return std::all_of(c_.begin(), c_.end(), [](double v) { return v == 0.0; });
}

int StructureConstants::nilpotency_class(int max_class) const {
  // Lower central series on coordinate vectors: g^1 = span(e_i),
  // g^{k+1} = span [e_i, g^k]. Spanning sets are kept small by Gram-Schmidt.
  const int d = dim_;
  auto orthonormalize = [d](std::vector<std::vector<double>> vs) {
    std::vector<std::vector<double>> basis;
    for (auto& v : vs) {
      for (const auto& b : basis) {
        double dot = 0.0;
        for (int k = 0; k < d; ++k) dot += v[k] * b[k];
        for (int k = 0; k < d; ++k) v[k] -= dot * b[k];
      }
      double n = 0.0;
      for (double x : v) n += x * x;
      n = std::sqrt(n);
      if (n > 1e-12) {
        for (double& x : v) x /= n;
        basis.push_back(std::move(v));
      }
    }
    return basis;
  };
  std::vector<std::vector<double>> current;
  for (int i = 0; i < d; ++i) {
    std::vector<double> e(d, 0.0);
    e[i] = 1.0;
    current.push_back(std::move(e));
  }
  for (int cls = 0; cls <= max_class; ++cls) {
    if (current.empty()) return cls;
    if (cls == max_class) break;
    std::vector<std::vector<double>> next;
    for (int i = 0; i < d; ++i) {
      for (const auto& v : current) {
        std::vector<double> w(d, 0.0);
        for (int j = 0; j < d; ++j) {
          if (v[j] == 0.0) continue;
          for (int k = 0; k < d; ++k) w[k] += v[j] * (*this)(i, j, k);
        }
        next.push_back(std::move(w));
      }
    }
    current = orthonormalize(std::move(next));
  }
  return -1;
}

Residual check_antisymmetry(const StructureConstants& sc) {
  Residual r;
  const int d = sc.dim();
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) {
      for (int k = 0; k < d; ++k) {
        const double defect =
            std::abs(sc(i, j, k) + koszul(sc.parity(i), sc.parity(j)) * sc(j, i, k));
        if (defect > r.value) r = {defect, {i, j, k, -1}};
      }
    }
  }
  return r;
}

Residual check_jacobi(const StructureConstants& sc) {
  Residual r;
  const int d = sc.dim();
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) {
      for (int k = 0; k < d; ++k) {
        const int s1 = koszul(sc.parity(i), sc.parity(k));
        const int s2 = koszul(sc.parity(j), sc.parity(i));
        const int s3 = koszul(sc.parity(k), sc.parity(j));
        for (int l = 0; l < d; ++l) {
          double defect = 0.0;
          for (int m = 0; m < d; ++m) {
            defect += s1 * sc(j, k, m) * sc(i, m, l);
            defect += s2 * sc(k, i, m) * sc(j, m, l);
            defect += s3 * sc(i, j, m) * sc(k, m, l);
          }
          if (std::abs(defect) > r.value) r = {std::abs(defect), {i, j, k, l}};
        }
      }
    }
  }
  return r;
}

Residual check_parity_consistency(const StructureConstants& sc) {
  Residual r;
  const int d = sc.dim();
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) {
      for (int k = 0; k < d; ++k) {
        if (sc.parity(k) == sc.parity(i) + sc.parity(j)) continue;
        if (std::abs(sc(i, j, k)) > r.value) r = {std::abs(sc(i, j, k)), {i, j, k, -1}};
      }
    }
  }
  return r;
}

AlgebraElement AlgebraElement::zero(int dim, int num_generators) {
  return AlgebraElement(std::vector<Supernumber>(dim, Supernumber(num_generators)));
}

AlgebraElement AlgebraElement::real(std::span<const double> values, int num_generators) {
  std::vector<Supernumber> c;
  c.reserve(values.size());
  for (double v : values) c.emplace_back(num_generators, v);
  return AlgebraElement(std::move(c));
}

AlgebraElement AlgebraElement::basis(int dim, int i, int num_generators, double coeff) {
  AlgebraElement x = zero(dim, num_generators);
  x.coords.at(i) = Supernumber(num_generators, coeff);
  return x;
}

AlgebraElement AlgebraElement::body() const {
  AlgebraElement b = *this;
  for (auto& c : b.coords) c = Supernumber(c.num_generators(), c.body());
  return b;
}

std::vector<double> AlgebraElement::body_values() const {
  std::vector<double> v;
  v.reserve(coords.size());
  for (const auto& c : coords) v.push_back(c.body());
  return v;
}

bool AlgebraElement::is_real() const {
  return std::all_of(coords.begin(), coords.end(),
                     [](const Supernumber& c) { return c.soul().is_zero(); });
}

bool AlgebraElement::is_zero() const {
  return std::all_of(coords.begin(), coords.end(),
                     [](const Supernumber& c) { return c.is_zero(); });
}

AlgebraElement& AlgebraElement::operator+=(const AlgebraElement& o) {
  if (o.dim() != dim()) throw DimensionError("algebra elements of different dimension");
  for (std::size_t i = 0; i < coords.size(); ++i) coords[i] += o.coords[i];
  return *this;
}

AlgebraElement& AlgebraElement::operator-=(const AlgebraElement& o) {
  if (o.dim() != dim()) throw DimensionError("algebra elements of different dimension");
  for (std::size_t i = 0; i < coords.size(); ++i) coords[i] -= o.coords[i];
  return *this;
}

AlgebraElement& AlgebraElement::operator*=(double s) {
  for (auto& c : coords) c *= s;
  return *this;
}

AlgebraElement operator*(const Supernumber& s, const AlgebraElement& a) {
  AlgebraElement r = a;
  for (auto& c : r.coords) c = s * c;
  return r;
}

double AlgebraElement::max_abs() const {
  double m = 0.0;
  for (const auto& c : coords) m = std::max(m, c.max_abs());
  return m;
}

bool is_even_element(const StructureConstants& sc, const AlgebraElement& x) {
  if (x.dim() != sc.dim()) return false;
  for (int i = 0; i < sc.dim(); ++i) {
    if (!x.coords[i].has_parity(sc.parity(i))) return false;
  }
  return true;
}

AlgebraElement bracket(const StructureConstants& sc, const AlgebraElement& x,
                       const AlgebraElement& y) {
  const int d = sc.dim();
  if (x.dim() != d || y.dim() != d) {
    throw DimensionError("bracket: algebra dimension " + std::to_string(d) +
                         " but operands have " + std::to_string(x.dim()) + " and " +
                         std::to_string(y.dim()));
  }
  const int n = x.num_generators();
  if (y.num_generators() != n) throw DimensionError("bracket: generator count mismatch");
  AlgebraElement r = AlgebraElement::zero(d, n);
  for (int i = 0; i < d; ++i) {
    if (x.coords[i].is_zero()) continue;
    for (int j = 0; j < d; ++j) {
      if (y.coords[j].is_zero()) continue;
      // moving e_i past Y^j picks up (-1)^{e_i |Y^j|}
      const Supernumber yj =
          sc.parity(i) == Parity::odd ? y.coords[j].twisted() : y.coords[j];
      const Supernumber prod = x.coords[i] * yj;
      for (int k = 0; k < d; ++k) {
        const double c = sc(i, j, k);
        if (c != 0.0) r.coords[k] += prod * c;
      }
    }
  }
  return r;
}

}  // namespace liact
