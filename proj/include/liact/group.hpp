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

// Group models: euclidean R^d, real matrix groups, simply connected
// nilpotent groups in exponential coordinates, and the circle R/Z.

#ifndef LIACT_GROUP_HPP
#define LIACT_GROUP_HPP

#include <Eigen/Dense>
#include <string>
#include <variant>
#include <vector>

#include "liact/algebra.hpp"

namespace liact {

enum class GroupModel { euclidean, matrix, nilpotent_exp, circle };

const char* to_string(GroupModel m);
GroupModel parse_group_model(const std::string& name);

/// Highest nilpotency class handled by the truncated BCH product.
inline constexpr int kMaxBchClass = 5;

/// Payload depends on the model: `coords` for euclidean, nilpotent_exp and
/// circle (one coordinate with body in [0,1)); `matrix` for the matrix model.
struct GroupElement {
  GroupModel model = GroupModel::euclidean;
  AlgebraElement coords;
  Eigen::MatrixXd matrix;
};

Eigen::MatrixXd matrix_exp(const Eigen::MatrixXd& a);

/// Principal logarithm. Throws DomainError when an eigenvalue lies on the
/// closed negative real axis.
Eigen::MatrixXd matrix_log(const Eigen::MatrixXd& a);

class Group {
 public:
  static Group euclidean(int dim, int num_generators);
  static Group circle(int num_generators);
  /// `basis[i]` realizes e_i; commutators must reproduce `sc`.
  static Group matrix(StructureConstants sc, std::vector<Eigen::MatrixXd> basis,
                      int num_generators);
  static Group nilpotent_exp(StructureConstants sc, int nil_class, int num_generators);

  GroupModel model() const { return model_; }
  int dim() const { return sc_.dim(); }
  int num_generators() const { return num_generators_; }
  int size() const { return size_; }
  int nil_class() const { return nil_class_; }
  const StructureConstants& algebra() const { return sc_; }
  const std::vector<Eigen::MatrixXd>& basis() const { return basis_; }
  bool simply_connected() const {
    return model_ == GroupModel::euclidean || model_ == GroupModel::nilpotent_exp;
  }

  GroupElement identity() const;
  GroupElement multiply(const GroupElement& a, const GroupElement& b) const;
  GroupElement inverse(const GroupElement& a) const;
  GroupElement exp(const AlgebraElement& x) const;
  /// Principal logarithm; DomainError ("outside log chart") when undefined.
  AlgebraElement log(const GroupElement& g) const;

  /// Builds an element from real coordinates (matrix: row-major entries).
  GroupElement from_values(const std::vector<double>& values) const;
  /// Real coordinates of the body: exponential coordinates, row-major matrix
  /// entries, or the circle angle.
  std::vector<double> values(const GroupElement& g) const;
  /// max-norm distance of bodies; circle distance is taken mod 1.
  double distance(const GroupElement& a, const GroupElement& b) const;

  /// Sum_i X^i B_i for real X (matrix model).
  Eigen::MatrixXd to_matrix(const AlgebraElement& x) const;

  /// max |[B_i,B_j] - sum_k c_ij^k B_k| (matrix model), 0 otherwise.
  double basis_residual() const;

 private:
  Group() = default;
  void check(const GroupElement& g) const;
  AlgebraElement bch(const AlgebraElement& x, const AlgebraElement& y) const;

  GroupModel model_ = GroupModel::euclidean;
  StructureConstants sc_;
  int num_generators_ = 0;
  int size_ = 0;
  int nil_class_ = 0;
  std::vector<Eigen::MatrixXd> basis_;
  Eigen::MatrixXd basis_columns_;  // n*n x d, for projecting logarithms
};

struct ExpSegment {
  AlgebraElement x;
  double duration = 1.0;
};

/// Ordered samples g[i] at increasing parameters t[i].
struct SampledSegment {
  std::vector<double> t;
  std::vector<GroupElement> g;
};

using PathSegment = std::variant<ExpSegment, SampledSegment>;

/// Piecewise path in G, parametrized by [0, duration()]. An exp segment
/// starting at g0 is s -> exp(sX) g0.
class GroupPath {
 public:
  explicit GroupPath(Group group);
  GroupPath(Group group, GroupElement start);

  /// Path from the identity ending at exp(X_1) ... exp(X_n): exp(X_n) is
  /// traversed first.
  static GroupPath word(Group group, const std::vector<AlgebraElement>& factors);

  void add_exp(AlgebraElement x, double duration = 1.0);
  /// The first sample must coincide with the current endpoint (1e-9).
  void add_sampled(std::vector<double> t, std::vector<GroupElement> g);

  const Group& group() const { return group_; }
  const std::vector<PathSegment>& segments() const { return segments_; }
  double duration() const { return breaks_.back(); }
  /// Parameter values where segments start, plus the final time.
  const std::vector<double>& breaks() const { return breaks_; }
  const GroupElement& start() const { return starts_.front(); }
  const GroupElement& end() const { return starts_.back(); }
  bool starts_at_identity(double tol = 1e-12) const;
  bool is_closed(double tol = 1e-12) const;

  GroupElement at(double t) const;
  /// Coordinates of the path lifted to the universal cover where that
  /// differs (circle angle unwrapped); otherwise Group::values.
  std::vector<double> cover_values(double t) const;

  /// xi(t) = gamma'(t) gamma(t)^{-1}. Exact for exp segments; sampled
  /// segments use central differences on their own grid, linearly
  /// interpolated. At joints the later segment is used.
  AlgebraElement right_log_derivative(double t) const;

  /// Right log derivative at the nodes of sampled segment k.
  const std::vector<AlgebraElement>& sampled_xi(std::size_t k) const { return sampled_[k].xi; }

  /// gamma(t) h for every t.
  GroupPath right_translated(const GroupElement& h) const;

 private:
  struct SampledCache {
    std::vector<AlgebraElement> xi;  // right log derivative at each node
    std::vector<double> cover;       // unwrapped circle angle at each node
  };

  std::size_t segment_index(double t) const;

  Group group_;
  std::vector<PathSegment> segments_;
  std::vector<double> breaks_{0.0};
  std::vector<GroupElement> starts_;      // starts_[k] = gamma(breaks_[k])
  std::vector<double> cover_starts_;      // unwrapped circle angle at breaks
  std::vector<SampledCache> sampled_;     // parallel to segments_
};

}  // namespace liact

#endif  // LIACT_GROUP_HPP
