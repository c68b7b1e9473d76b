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

#ifndef BOPDIST_GRAPH_HPP_
#define BOPDIST_GRAPH_HPP_

#include <cstddef>
#include <iosfwd>
#include <optional>

#include <Eigen/Core>

namespace bopdist {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Weighted directed graph given by an affinity matrix and a cost matrix.
///
/// An arc i -> j exists iff affinities(i, j) > 0, and then costs(i, j) is
/// finite; absent arcs carry an infinite cost. Every node has at least one
/// outgoing arc. Immutable once built.
class Graph {
 public:
  /// Validates and builds a graph. When `costs` is omitted each arc costs
  /// the reciprocal of its affinity.
  ///
  /// Throws ShapeMismatch, NegativeEntry or ZeroOutDegree.
  static Graph build(Matrix affinities,
                     std::optional<Matrix> costs = std::nullopt);

  std::size_t size() const { return static_cast<std::size_t>(a_.rows()); }
  const Matrix& affinities() const { return a_; }
  const Matrix& costs() const { return c_; }

  bool has_arc(std::size_t i, std::size_t j) const {
    return a_(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) > 0;
  }

  /// Smallest finite arc cost.
  double min_arc_cost() const;

  /// True when both affinities and costs are exactly symmetric.
  bool is_undirected() const;

 private:
  Graph(Matrix a, Matrix c) : a_(std::move(a)), c_(std::move(c)) {}

  Matrix a_;
  Matrix c_;
};

/// Row-stochastic transition matrix of the natural random walk.
struct TransitionMatrix {
  Matrix p;
};

/// p(i, j) = a(i, j) / sum_j' a(i, j').
TransitionMatrix reference_transitions(const Graph& g);

/// Reads "i j a [c]" lines (0-based ids, '#' comments, blank lines skipped).
/// The node count is one more than the largest id seen.
///
/// Throws ParseError, DuplicateArc and the Graph::build errors.
Graph load_edge_list(std::istream& in);

/// Writes every arc as "i j a c" with full precision, the inverse of
/// load_edge_list.
void write_edge_list(std::ostream& out, const Graph& g);

}  // namespace bopdist

#endif  // BOPDIST_GRAPH_HPP_
