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

#ifndef BOPDIST_ORACLE_HPP_
#define BOPDIST_ORACLE_HPP_

// Reference computations that share no code path with the closed-form
// engine: brute-force walk enumeration, Dijkstra, and first-passage costs
// from a self-contained Gaussian elimination.

#include <cstddef>
#include <cstdint>

#include "bopdist/graph.hpp"

namespace bopdist::oracle {

inline constexpr int kMaxEnumerationDepth = 20;

struct PathEnumeration {
  std::size_t source;
  std::size_t target;
  int t_max;
  double mass;          // sum of pi_ref(path) exp(-theta cost(path))
  std::uint64_t count;  // number of walks that contributed
};

/// Depth-first enumeration of every walk source -> target with at most t_max
/// steps. With `hitting`, walks stop the first time they reach the target.
/// The zero-length walk counts (mass 1) when source == target.
///
/// Throws DepthLimitExceeded when t_max > 20.
PathEnumeration enumerate_path_mass(const Graph& g, double theta,
                                    std::size_t source, std::size_t target,
                                    int t_max, bool hitting);

/// All-pairs minimal walk cost (Dijkstra from every node); +inf when
/// unreachable.
Matrix shortest_path_matrix(const Graph& g);

/// Expected cost m(i, k) of the natural random walk from i until it first
/// hits k. m(k, k) = 0; +inf for nodes from which k is not hit almost surely.
Vector first_passage_cost(const Graph& g, std::size_t k);

/// CC(i, j) = m(i, j) + m(j, i).
Matrix commute_cost_matrix(const Graph& g);

}  // namespace bopdist::oracle

#endif  // BOPDIST_ORACLE_HPP_
