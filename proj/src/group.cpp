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

#include "liact/group.hpp"

#include <algorithm>
#include <cmath>
#include <unsupported/Eigen/MatrixFunctions>

#include "liact/errors.hpp"

namespace liact {

namespace {

double wrap_unit(double x) {
  double r = x - std::floor(x);
  if (r >= 1.0) r = 0.0;
  return r;
}

void require_real(const AlgebraElement& x, const char* model) {
  if (!x.is_real()) {
    throw DomainError(std::string(model) + " group model accepts real coordinates only");
  }
}

}  // namespace

const char* to_string(GroupModel m) {
  switch (m) {
    case GroupModel::euclidean: return "euclidean";
    case GroupModel::matrix: return "matrix";
    case GroupModel::nilpotent_exp: return "nilpotent_exp";
    case GroupModel::circle: return "circle";
  }
  return "?";
}

GroupModel parse_group_model(const std::string& name) {
  if (name == "euclidean") return GroupModel::euclidean;
  if (name == "matrix") return GroupModel::matrix;
  if (name == "nilpotent_exp") return GroupModel::nilpotent_exp;
  if (name == "circle") return GroupModel::circle;
  throw Error("unknown group model '" + name + "'");
}

Eigen::MatrixXd matrix_exp(const Eigen::MatrixXd& a) {
  if (a.rows() != a.cols()) throw DimensionError("matrix_exp: matrix is not square");
  return a.exp();
}

Eigen::MatrixXd matrix_log(const Eigen::MatrixXd& a) {
  if (a.rows() != a.cols()) throw DimensionError("matrix_log: matrix is not square");
  const Eigen::EigenSolver<Eigen::MatrixXd> es(a, false);
  const double scale = std::max(1.0, a.cwiseAbs().maxCoeff());
  for (const auto& lambda : es.eigenvalues()) {
    if (std::abs(lambda.imag()) <= 1e-12 * scale && lambda.real() <= 1e-14 * scale) {
      throw DomainError(
          "outside log chart: eigenvalue on the closed negative real axis; "
          "supply a GroupPath route instead");
    }
  }
  return a.log();
}

Group Group::euclidean(int dim, int num_generators) {
  Group g;
  g.model_ = GroupModel::euclidean;
  g.sc_ = StructureConstants::abelian(dim);
  g.num_generators_ = num_generators;
  return g;
}

Group Group::circle(int num_generators) {
  Group g;
  g.model_ = GroupModel::circle;
  g.sc_ = StructureConstants::abelian(1);
  g.num_generators_ = num_generators;
  return g;
}

Group Group::matrix(StructureConstants sc, std::vector<Eigen::MatrixXd> basis,
                    int num_generators) {
  if (static_cast<int>(basis.size()) != sc.dim()) {
    throw DimensionError("matrix group needs one basis matrix per algebra element");
  }
  if (std::any_of(sc.parities().begin(), sc.parities().end(),
                  [](Parity p) { return p == Parity::odd; })) {
    throw ParityError("matrix group model is real-only; odd basis elements not supported");
  }
  Group g;
  g.model_ = GroupModel::matrix;
  g.sc_ = std::move(sc);
  g.num_generators_ = num_generators;
  g.size_ = basis.empty() ? 0 : static_cast<int>(basis.front().rows());
  for (const auto& b : basis) {
    if (b.rows() != g.size_ || b.cols() != g.size_) {
      throw DimensionError("basis matrices must all be square of the same size");
    }
  }
  g.basis_ = std::move(basis);
  const int n2 = g.size_ * g.size_;
  g.basis_columns_.resize(n2, g.dim());
  for (int i = 0; i < g.dim(); ++i) {
    g.basis_columns_.col(i) = g.basis_[i].reshaped<Eigen::RowMajor>();
  }
  return g;
}

Group Group::nilpotent_exp(StructureConstants sc, int nil_class, int num_generators) {
  if (nil_class < 1 || nil_class > kMaxBchClass) {
    throw DomainError("nilpotent_exp supports nilpotency class 1.." +
                      std::to_string(kMaxBchClass) + ", got " + std::to_string(nil_class));
  }
  const int actual = sc.nilpotency_class(nil_class);
  if (actual < 0) {
    throw DomainError("algebra is not nilpotent of class <= " + std::to_string(nil_class));
  }
  Group g;
  g.model_ = GroupModel::nilpotent_exp;
  g.sc_ = std::move(sc);
  g.num_generators_ = num_generators;
  g.nil_class_ = nil_class;
  return g;
}

void Group::check(const GroupElement& g) const {
  if (g.model != model_) throw Error("group element of model " + std::string(to_string(g.model)) +
                                     " used with group of model " + to_string(model_));
  if (model_ == GroupModel::matrix) {
    if (g.matrix.rows() != size_ || g.matrix.cols() != size_) {
      throw DimensionError("matrix group element has wrong size");
    }
  } else if (g.coords.dim() != dim()) {
    throw DimensionError("group element has " + std::to_string(g.coords.dim()) +
                         " coordinates, group dimension is " + std::to_string(dim()));
  }
}

GroupElement Group::identity() const {
  GroupElement e;
  e.model = model_;
  if (model_ == GroupModel::matrix) {
    e.matrix = Eigen::MatrixXd::Identity(size_, size_);
  } else {
    e.coords = AlgebraElement::zero(dim(), num_generators_);
  }
  return e;
}

AlgebraElement Group::bch(const AlgebraElement& x, const AlgebraElement& y) const {
  auto br = [this](const AlgebraElement& a, const AlgebraElement& b) {
    return bracket(sc_, a, b);
  };
  AlgebraElement z = x + y;
  if (nil_class_ < 2) return z;
  const AlgebraElement xy = br(x, y);
  z += 0.5 * xy;
  if (nil_class_ < 3) return z;
  const AlgebraElement yx = -1.0 * xy;
  const AlgebraElement x_xy = br(x, xy);
  const AlgebraElement y_yx = br(y, yx);
  z += (1.0 / 12.0) * (x_xy + y_yx);
  if (nil_class_ < 4) return z;
  const AlgebraElement y_x_xy = br(y, x_xy);
  z -= (1.0 / 24.0) * y_x_xy;
  if (nil_class_ < 5) return z;
  const AlgebraElement yyyyx = br(y, br(y, y_yx));
  const AlgebraElement xxxxy = br(x, br(x, x_xy));
  const AlgebraElement xyyyx = br(x, br(y, y_yx));
  const AlgebraElement yxxxy = br(y, br(x, x_xy));
  const AlgebraElement yxyxy = br(y, br(x, br(y, xy)));
  const AlgebraElement xyxyx = br(x, br(y, br(x, yx)));
  z -= (1.0 / 720.0) * (yyyyx + xxxxy);
  z += (1.0 / 360.0) * (xyyyx + yxxxy);
  z += (1.0 / 120.0) * (yxyxy + xyxyx);
  return z;
}

GroupElement Group::multiply(const GroupElement& a, const GroupElement& b) const {
  check(a);
  check(b);
  GroupElement r;
  r.model = model_;
  switch (model_) {
    case GroupModel::euclidean:
      r.coords = a.coords + b.coords;
      break;
    case GroupModel::circle:
      r.coords = AlgebraElement::zero(1, num_generators_);
      r.coords.coords[0] += wrap_unit(a.coords.coords[0].body() + b.coords.coords[0].body());
      break;
    case GroupModel::nilpotent_exp:
      r.coords = bch(a.coords, b.coords);
      break;
    case GroupModel::matrix:
      r.matrix = a.matrix * b.matrix;
      break;
  }
  return r;
}

GroupElement Group::inverse(const GroupElement& a) const {
  check(a);
  GroupElement r;
  r.model = model_;
  switch (model_) {
    case GroupModel::euclidean:
    case GroupModel::nilpotent_exp:
      r.coords = -1.0 * a.coords;
      break;
    case GroupModel::circle:
      r.coords = AlgebraElement::zero(1, num_generators_);
      r.coords.coords[0] += wrap_unit(-a.coords.coords[0].body());
      break;
    case GroupModel::matrix: {
      const Eigen::FullPivLU<Eigen::MatrixXd> lu(a.matrix);
      if (!lu.isInvertible()) throw DomainError("singular matrix has no inverse");
      r.matrix = lu.inverse();
      break;
    }
  }
  return r;
}

GroupElement Group::exp(const AlgebraElement& x) const {
  if (x.dim() != dim()) {
    throw DimensionError("exp: algebra element has dimension " + std::to_string(x.dim()) +
                         ", expected " + std::to_string(dim()));
  }
  GroupElement r;
  r.model = model_;
  switch (model_) {
    case GroupModel::euclidean:
    case GroupModel::nilpotent_exp:
      r.coords = x;
      break;
    case GroupModel::circle:
      require_real(x, "circle");
      r.coords = AlgebraElement::zero(1, num_generators_);
      r.coords.coords[0] += wrap_unit(x.coords[0].body());
      break;
    case GroupModel::matrix:
      r.matrix = matrix_exp(to_matrix(x));
      break;
  }
  return r;
}

AlgebraElement Group::log(const GroupElement& g) const {
  check(g);
  switch (model_) {
    case GroupModel::euclidean:
    case GroupModel::nilpotent_exp:
      return g.coords;
    case GroupModel::circle: {
      const double a = g.coords.coords[0].body();
      const double v = a <= 0.5 ? a : a - 1.0;
      return AlgebraElement::real(std::vector<double>{v}, num_generators_);
    }
    case GroupModel::matrix: {
      const Eigen::MatrixXd l = matrix_log(g.matrix);
      const Eigen::VectorXd rhs = l.reshaped<Eigen::RowMajor>();
      const Eigen::VectorXd c = basis_columns_.colPivHouseholderQr().solve(rhs);
      const double miss = (basis_columns_ * c - rhs).cwiseAbs().maxCoeff();
      if (miss > 1e-8 * (1.0 + rhs.cwiseAbs().maxCoeff())) {
        throw DomainError("outside log chart: logarithm is not in the span of the algebra basis");
      }
      std::vector<double> v(c.data(), c.data() + c.size());
      return AlgebraElement::real(v, num_generators_);
    }
  }
  return {};
}

Eigen::MatrixXd Group::to_matrix(const AlgebraElement& x) const {
  require_real(x, "matrix");
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(size_, size_);
  for (int i = 0; i < dim(); ++i) m += x.coords[i].body() * basis_[i];
  return m;
}

double Group::basis_residual() const {
  if (model_ != GroupModel::matrix) return 0.0;
  double r = 0.0;
  for (int i = 0; i < dim(); ++i) {
    for (int j = 0; j < dim(); ++j) {
      Eigen::MatrixXd d = basis_[i] * basis_[j] - basis_[j] * basis_[i];
      for (int k = 0; k < dim(); ++k) d -= sc_(i, j, k) * basis_[k];
      r = std::max(r, d.cwiseAbs().maxCoeff());
    }
  }
  return r;
}

GroupElement Group::from_values(const std::vector<double>& values) const {
  GroupElement g;
  g.model = model_;
  if (model_ == GroupModel::matrix) {
    if (static_cast<int>(values.size()) != size_ * size_) {
      throw DimensionError("matrix group element needs " + std::to_string(size_ * size_) +
                           " entries");
    }
    g.matrix.resize(size_, size_);
    for (int r = 0; r < size_; ++r) {
      for (int c = 0; c < size_; ++c) g.matrix(r, c) = values[r * size_ + c];
    }
    if (std::abs(g.matrix.determinant()) < 1e-300) {
      throw DomainError("matrix group element is singular");
    }
    return g;
  }
  if (static_cast<int>(values.size()) != dim()) {
    throw DimensionError("group element needs " + std::to_string(dim()) + " coordinates");
  }
  g.coords = AlgebraElement::real(values, num_generators_);
  if (model_ == GroupModel::circle) {
    g.coords.coords[0] = Supernumber(num_generators_, wrap_unit(values[0]));
  }
  return g;
}

std::vector<double> Group::values(const GroupElement& g) const {
  check(g);
  if (model_ == GroupModel::matrix) {
    std::vector<double> v;
    for (int r = 0; r < size_; ++r) {
      for (int c = 0; c < size_; ++c) v.push_back(g.matrix(r, c));
    }
    return v;
  }
  return g.coords.body_values();
}

double Group::distance(const GroupElement& a, const GroupElement& b) const {
  const auto va = values(a);
  const auto vb = values(b);
  double d = 0.0;
  for (std::size_t i = 0; i < va.size(); ++i) {
    double di = std::abs(va[i] - vb[i]);
    if (model_ == GroupModel::circle) di = std::min(di, 1.0 - di);
    d = std::max(d, di);
  }
  if (model_ != GroupModel::matrix) {
    // souls count too for super coordinates
    for (int i = 0; i < dim(); ++i) {
      d = std::max(d, (a.coords.coords[i].soul() - b.coords.coords[i].soul()).max_abs());
    }
  }
  return d;
}

GroupPath::GroupPath(Group group) : GroupPath(group, group.identity()) {}

GroupPath::GroupPath(Group group, GroupElement start) : group_(std::move(group)) {
  starts_.push_back(std::move(start));
  cover_starts_.push_back(group_.model() == GroupModel::circle
                              ? starts_.front().coords.coords[0].body()
                              : 0.0);
}

GroupPath GroupPath::word(Group group, const std::vector<AlgebraElement>& factors) {
  GroupPath p(std::move(group));
  for (auto it = factors.rbegin(); it != factors.rend(); ++it) p.add_exp(*it, 1.0);
  return p;
}

void GroupPath::add_exp(AlgebraElement x, double duration) {
  if (!(duration > 0.0)) throw DomainError("exp segment duration must be positive");
  const GroupElement end = group_.multiply(group_.exp(duration * x), starts_.back());
  const double cover =
      group_.model() == GroupModel::circle ? cover_starts_.back() + duration * x.coords[0].body()
                                           : 0.0;
  segments_.emplace_back(ExpSegment{std::move(x), duration});
  sampled_.emplace_back();
  breaks_.push_back(breaks_.back() + duration);
  starts_.push_back(end);
  cover_starts_.push_back(cover);
}

void GroupPath::add_sampled(std::vector<double> t, std::vector<GroupElement> g) {
  if (t.size() != g.size() || t.size() < 2) {
    throw DimensionError("sampled segment needs at least two (t, g) pairs of equal count");
  }
  for (std::size_t i = 1; i < t.size(); ++i) {
    if (!(t[i] > t[i - 1])) throw DomainError("sampled segment parameters must increase");
  }
  if (group_.distance(g.front(), starts_.back()) > 1e-9) {
    throw DomainError("sampled segment does not start where the path currently ends");
  }
  SampledCache cache;
  const std::size_t n = t.size();
  std::vector<AlgebraElement> step_log;  // log(g[i+1] g[i]^{-1})
  for (std::size_t i = 0; i + 1 < n; ++i) {
    step_log.push_back(group_.log(group_.multiply(g[i + 1], group_.inverse(g[i]))));
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (i == 0) {
      cache.xi.push_back((1.0 / (t[1] - t[0])) * step_log[0]);
    } else if (i == n - 1) {
      cache.xi.push_back((1.0 / (t[i] - t[i - 1])) * step_log[i - 1]);
    } else {
      const AlgebraElement c =
          group_.log(group_.multiply(g[i + 1], group_.inverse(g[i - 1])));
      cache.xi.push_back((1.0 / (t[i + 1] - t[i - 1])) * c);
    }
  }
  if (group_.model() == GroupModel::circle) {
    cache.cover.push_back(cover_starts_.back());
    for (std::size_t i = 0; i + 1 < n; ++i) {
      cache.cover.push_back(cache.cover.back() + step_log[i].coords[0].body());
    }
  }
  const double duration = t.back() - t.front();
  const double cover_end = cache.cover.empty() ? 0.0 : cache.cover.back();
  const GroupElement end = g.back();
  segments_.emplace_back(SampledSegment{std::move(t), std::move(g)});
  sampled_.push_back(std::move(cache));
  breaks_.push_back(breaks_.back() + duration);
  starts_.push_back(end);
  cover_starts_.push_back(cover_end);
}

bool GroupPath::starts_at_identity(double tol) const {
  return group_.distance(start(), group_.identity()) <= tol;
}

bool GroupPath::is_closed(double tol) const { return group_.distance(start(), end()) <= tol; }

std::size_t GroupPath::segment_index(double t) const {
  if (!(t >= -1e-12 && t <= duration() + 1e-12)) {
    throw DomainError("path parameter " + std::to_string(t) + " outside [0, " +
                      std::to_string(duration()) + "]");
  }
  if (segments_.empty()) return 0;
  const auto it = std::upper_bound(breaks_.begin(), breaks_.end(), t);
  const std::size_t k = static_cast<std::size_t>(std::max<std::ptrdiff_t>(it - breaks_.begin() - 1, 0));
  return std::min(k, segments_.size() - 1);
}

namespace {

// node interval [i, i+1] containing local parameter s, with weight in [0,1]
std::pair<std::size_t, double> locate(const std::vector<double>& t, double s) {
  const auto it = std::upper_bound(t.begin(), t.end(), s);
  std::size_t i = static_cast<std::size_t>(std::max<std::ptrdiff_t>(it - t.begin() - 1, 0));
  i = std::min(i, t.size() - 2);
  const double w = std::clamp((s - t[i]) / (t[i + 1] - t[i]), 0.0, 1.0);
  return {i, w};
}

}  // namespace

GroupElement GroupPath::at(double t) const {
  if (segments_.empty()) {
    segment_index(t);
    return start();
  }
  const std::size_t k = segment_index(t);
  const double local = t - breaks_[k];
  if (const auto* e = std::get_if<ExpSegment>(&segments_[k])) {
    return group_.multiply(group_.exp(local * e->x), starts_[k]);
  }
  const auto& s = std::get<SampledSegment>(segments_[k]);
  const auto [i, w] = locate(s.t, s.t.front() + local);
  if (w == 0.0) return s.g[i];
  const AlgebraElement step = group_.log(group_.multiply(s.g[i + 1], group_.inverse(s.g[i])));
  return group_.multiply(group_.exp(w * step), s.g[i]);
}

std::vector<double> GroupPath::cover_values(double t) const {
  if (group_.model() != GroupModel::circle) return group_.values(at(t));
  if (segments_.empty()) {
    segment_index(t);
    return {cover_starts_.front()};
  }
  const std::size_t k = segment_index(t);
  const double local = t - breaks_[k];
  if (const auto* e = std::get_if<ExpSegment>(&segments_[k])) {
    return {cover_starts_[k] + local * e->x.coords[0].body()};
  }
  const auto& s = std::get<SampledSegment>(segments_[k]);
  const auto& cover = sampled_[k].cover;
  const auto [i, w] = locate(s.t, s.t.front() + local);
  return {cover[i] + w * (cover[i + 1] - cover[i])};
}

AlgebraElement GroupPath::right_log_derivative(double t) const {
  if (segments_.empty()) {
    segment_index(t);
    return AlgebraElement::zero(group_.dim(), group_.num_generators());
  }
  const std::size_t k = segment_index(t);
  if (const auto* e = std::get_if<ExpSegment>(&segments_[k])) return e->x;
  const auto& s = std::get<SampledSegment>(segments_[k]);
  const auto& xi = sampled_[k].xi;
  const auto [i, w] = locate(s.t, s.t.front() + (t - breaks_[k]));
  if (w == 0.0) return xi[i];
  if (w == 1.0) return xi[i + 1];
  return (1.0 - w) * xi[i] + w * xi[i + 1];
}

GroupPath GroupPath::right_translated(const GroupElement& h) const {
  GroupPath p(group_, group_.multiply(start(), h));
  for (const auto& seg : segments_) {
    if (const auto* e = std::get_if<ExpSegment>(&seg)) {
      p.add_exp(e->x, e->duration);
    } else {
      const auto& s = std::get<SampledSegment>(seg);
      std::vector<GroupElement> g;
      g.reserve(s.g.size());
      for (const auto& gi : s.g) g.push_back(group_.multiply(gi, h));
      p.add_sampled(s.t, std::move(g));
    }
  }
  return p;
}

}  // namespace liact
