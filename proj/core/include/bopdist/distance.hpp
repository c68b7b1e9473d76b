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

#ifndef BOPDIST_DISTANCE_HPP_
#define BOPDIST_DISTANCE_HPP_

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "bopdist/bop_model.hpp"
#include "bopdist/graph.hpp"

namespace bopdist {

enum class Measure { kSurprisal, kPotential };

std::string_view to_string(Measure m);
std::optional<Measure> parse_measure(std::string_view s);

/// Symmetric, zero-diagonal node distances; +inf for pairs that are not
/// mutually reachable.
struct DistanceMatrix {
  Matrix d;
  Measure measure;
  double theta;
};

/// Delta_h(i, j) = -(log P_h(i, j) + log P_h(j, i)) / 2 with the
/// zero-length-included hitting probabilities.
DistanceMatrix surprisal_distance(const BopModel& m);

/// Delta_phi = (Phi + Phi') / 2 with Phi = -log(Z_h) / theta.
DistanceMatrix potential_distance(const BopModel& m);

/// The potential matrix Phi itself (not symmetrized); +inf where z_h is 0.
Matrix potentials(const BopModel& m);

struct RecurrenceOptions {
  double tolerance = 1e-12;
  int max_iters = 100000;
};

/// phi(., k) by fixed-point iteration of the soft-min Bellman-Ford
/// recurrence
///
///   phi(i, k) = -1/theta log sum_j p_ij exp(-theta (c_ij + phi(j, k))),
///   phi(k, k) = 0,
///
/// started from +inf and evaluated in the log domain, so it stays accurate
/// when exp(-theta c) underflows. Stops when the sup-norm change drops below
/// the tolerance. Nodes that cannot reach k stay at +inf.
///
/// Throws NoConvergence carrying the last iterate.
Vector potential_to_target(const BopModel& m, std::size_t k,
                           RecurrenceOptions opts = {});

/// Same recurrence without materializing a model (no dense inverse).
Vector potential_to_target(const Graph& g, double theta, std::size_t k,
                           RecurrenceOptions opts = {});

/// Full distance matrix of either measure built column by column from the
/// recurrence. The surprisal variant recovers log Z_h with a log-sum-exp over
/// all potentials, so it also works where the dense route underflows.
DistanceMatrix distance_by_recurrence(const Graph& g, double theta,
                                      Measure measure,
                                      RecurrenceOptions opts = {});

/// True when theta times the cheapest arc cost exceeds 500, the regime where
/// the dense route loses far pairs to underflow.
bool prefers_recurrence(const Graph& g, double theta);

/// Picks the dense or the recurrence route per prefers_recurrence().
DistanceMatrix compute_distance(const Graph& g, double theta, Measure measure);

enum class DistanceRoute { kAuto, kDense, kRecurrence };

struct LimitRow {
  double theta;
  double max_shortest_path_error;  // max |Delta_phi - SP|
  double max_commute_cost_error;   // max |2 Delta_phi - CC|
};

/// For each theta, the worst-case gap between Delta_phi and the two limit
/// distances (shortest path, half commute cost). Only defined for undirected
/// graphs; throws NotUndirected otherwise.
std::vector<LimitRow> distance_limits_report(
    const Graph& g, std::span<const double> thetas,
    DistanceRoute route = DistanceRoute::kAuto);

/// Writes "# measure=<measure> theta=<theta>" then the TSV.
void write_distances(std::ostream& out, const DistanceMatrix& dm);

}  // namespace bopdist

#endif  // BOPDIST_DISTANCE_HPP_
