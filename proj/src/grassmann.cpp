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

#include "liact/grassmann.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "liact/errors.hpp"

namespace liact {

const char* to_string(Parity p) { return p == Parity::even ? "even" : "odd"; }

Supernumber::Supernumber(int num_generators, double body) : n_(num_generators) {
  if (num_generators < 0 || num_generators > kMaxGenerators) {
    throw DimensionError("number of Grassmann generators must be in [0, " +
                         std::to_string(kMaxGenerators) + "], got " +
                         std::to_string(num_generators));
  }
  c_.assign(std::size_t{1} << n_, 0.0);
  c_[0] = body;
}

Supernumber Supernumber::generator(int num_generators, int index) {
  if (index < 1 || index > num_generators) {
    throw DimensionError("generator index " + std::to_string(index) + " out of range 1.." +
                         std::to_string(num_generators));
  }
  return monomial(num_generators, Mask{1} << (index - 1), 1.0);
}

Supernumber Supernumber::monomial(int num_generators, Mask subset, double coeff) {
  Supernumber s(num_generators);
  if (subset >= s.c_.size()) throw DimensionError("monomial uses a generator beyond N");
  s.c_[subset] = coeff;
  return s;
}

Supernumber Supernumber::soul() const {
  Supernumber s = *this;
  s.c_[0] = 0.0;
  return s;
}

bool Supernumber::is_zero() const {
  return std::all_of(c_.begin(), c_.end(), [](double v) { return v == 0.0; });
}

bool Supernumber::is_even() const {
  for (Mask m = 0; m < c_.size(); ++m) {
    if ((std::popcount(m) & 1) && c_[m] != 0.0) return false;
  }
  return true;
}

bool Supernumber::is_odd() const {
  for (Mask m = 0; m < c_.size(); ++m) {
    if (!(std::popcount(m) & 1) && c_[m] != 0.0) return false;
  }
  return true;
}

std::optional<Parity> Supernumber::parity() const {
  if (is_even()) return Parity::even;
  if (is_odd()) return Parity::odd;
  return std::nullopt;
}

Supernumber Supernumber::even_part() const {
  Supernumber s = *this;
  for (Mask m = 0; m < c_.size(); ++m) {
    if (std::popcount(m) & 1) s.c_[m] = 0.0;
  }
  return s;
}

Supernumber Supernumber::odd_part() const {
  Supernumber s = *this;
  for (Mask m = 0; m < c_.size(); ++m) {
    if (!(std::popcount(m) & 1)) s.c_[m] = 0.0;
  }
  return s;
}

Supernumber Supernumber::twisted() const {
  Supernumber s = *this;
  for (Mask m = 0; m < c_.size(); ++m) {
    if (std::popcount(m) & 1) s.c_[m] = -s.c_[m];
  }
  return s;
}

double Supernumber::max_abs() const {
  double r = 0.0;
  for (double v : c_) r = std::max(r, std::abs(v));
  return r;
}

Supernumber& Supernumber::operator+=(const Supernumber& o) {
  if (o.n_ != n_) throw DimensionError("supernumbers with different generator counts");
  for (std::size_t i = 0; i < c_.size(); ++i) c_[i] += o.c_[i];
  return *this;
}

Supernumber& Supernumber::operator-=(const Supernumber& o) {
  if (o.n_ != n_) throw DimensionError("supernumbers with different generator counts");
  for (std::size_t i = 0; i < c_.size(); ++i) c_[i] -= o.c_[i];
  return *this;
}

Supernumber& Supernumber::operator*=(double s) {
  for (double& v : c_) v *= s;
  return *this;
}

Supernumber operator*(const Supernumber& a, const Supernumber& b) {
  if (a.n_ != b.n_) throw DimensionError("supernumbers with different generator counts");
  Supernumber r(a.n_);
  const Mask full = static_cast<Mask>(a.c_.size() - 1);
  for (Mask ma = 0; ma <= full; ++ma) {
    const double ca = a.c_[ma];
    if (ca == 0.0) continue;
    const Mask free = full & ~ma;
    // enumerate submasks of the complement of ma, including 0
    for (Mask mb = free;; mb = (mb - 1) & free) {
      const double cb = b.c_[mb];
      if (cb != 0.0) r.c_[ma | mb] += merge_sign(ma, mb) * (ca * cb);
      if (mb == 0) break;
    }
  }
  return r;
}

Supernumber Supernumber::inverse() const { return nilpotent_inverse(*this); }

Supernumber Supernumber::pow(int k) const {
  if (k < 0) return inverse().pow(-k);
  Supernumber r(n_, 1.0);
  for (int i = 0; i < k; ++i) r = r * *this;
  return r;
}

std::string Supernumber::str() const {
  std::ostringstream os;
  bool first = true;
  for (Mask m = 0; m < c_.size(); ++m) {
    const double v = c_[m];
    if (v == 0.0) continue;
    if (!first) os << (v < 0 ? " - " : " + ");
    else if (v < 0) os << "-";
    const double a = std::abs(v);
    if (m == 0 || a != 1.0) os << a;
    for (int i = 0; i < n_; ++i) {
      if (m & (Mask{1} << i)) os << "θ" << (i + 1);
    }
    first = false;
  }
  if (first) os << "0";
  return os.str();
}

std::ostream& operator<<(std::ostream& os, const Supernumber& s) { return os << s.str(); }

BodySoul body_soul(const Supernumber& s) { return {s.body(), s.soul()}; }

Supernumber taylor_eval(const DerivativeTower& f, const Supernumber& s) {
  if (!s.is_even()) throw ParityError("Taylor extension requires an even supernumber");
  return taylor_extend(f, s);
}

}  // namespace liact
