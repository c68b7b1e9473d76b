// Copyright 2026 The bopdist Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef BOPDIST_BOP_MODEL_HPP_
#define BOPDIST_BOP_MODEL_HPP_

#include <cstddef>
#include <iosfwd>
#include <memory>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <Eigen/Core>
#include <Eigen/LU>

#include "bopdist/graph.hpp"

namespace bopdist {

/// Bag-of-paths model at a fixed inverse temperature.
///
/// Holds W = P_ref .* exp(-theta C), the fundamental matrix Z = (I - W)^-1
/// and its column-normalized hitting version Z_h = Z Diag(Z)^-1. The LU
/// factorization of I - W is kept for further solves. Immutable and cheap to
/// copy (matrices are shared).
class BopModel {
 public:
  /// Throws NonPositiveTheta, or SingularSystem when I - W is not invertible
  /// to working precision (residual of (I - W) Z - I above 1e-6).
  static BopModel build(Graph g, double theta);

  const Graph& graph() const { return state_->graph; }
  std::size_t size() const { return state_->graph.size(); }
  double theta() const { return state_->theta; }
  const Matrix& w() const { return state_->w; }
  const Matrix& z() const { return state_->z; }
  const Matrix& z_hitting() const { return state_->z_h; }

  /// max |(I - W) Z - I|.
  double residual() const { return state_->residual; }

  /// Arcs whose weight exp(-theta c) underflowed to zero. Non-empty means the
  /// dense matrices silently dropped those arcs; use the recurrence path.
  const std::vector<std::pair<std::size_t, std::size_t>>& underflowed_arcs()
      const {
    return state_->underflowed;
  }

  /// Solves (I - W) x = b with the stored factorization.
  Vector solve(const Vector& b) const;

 private:
  struct State {
    Graph graph;
    double theta;
    Matrix w;
    Eigen::PartialPivLU<Matrix> lu;
    Matrix z;
    Matrix z_h;
    double residual;
    std::vector<std::pair<std::size_t, std::size_t>> underflowed;
  };

  explicit BopModel(std::shared_ptr<const State> s) : state_(std::move(s)) {}

  std::shared_ptr<const State> state_;
};

enum class ProbabilityKind { kRegular, kRegularNonzero, kHitting, kHittingNonzero };

std::string_view to_string(ProbabilityKind kind);

/// One of the four bag-of-paths start/end distributions.
struct ProbabilityMatrix {
  Matrix p;
  ProbabilityKind kind;
  double partition;  // the normalizing path mass
};

/// Pi = Z / e'Ze, or (Z - I) / e'(Z - I)e without zero-length paths.
/// Throws DegeneratePartition when the excluded variant has no path mass.
ProbabilityMatrix regular_probabilities(const BopModel& m,
                                        bool include_zero_length);

/// Pi_h = Z_h / e'Z_h e, or (Z_h - I) / e'(Z_h - I)e without zero-length
/// paths. Throws DegeneratePartition when the excluded variant has no mass.
ProbabilityMatrix hitting_probabilities(const BopModel& m,
                                        bool include_zero_length);

/// Column j of (I - W^(-j))^-1, where W^(-j) is W with row j zeroed (node j
/// absorbing). Solved from scratch, independently of Z, so it can be compared
/// with column j of Z_h.
Vector hitting_column_direct(const BopModel& m, std::size_t j);

/// (e' (sum_{t=0}^{t_max} W^t) e, e'Ze): the truncated series mass next to
/// its limit.
std::pair<double, double> bounded_partition_check(const BopModel& m,
                                                  int t_max);

/// Writes "# kind=<kind> theta=<theta> partition=<partition>" then the TSV.
void write_probabilities(std::ostream& out, const ProbabilityMatrix& pm,
                         double theta);

}  // namespace bopdist

#endif  // BOPDIST_BOP_MODEL_HPP_
