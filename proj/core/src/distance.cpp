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

#include "bopdist/distance.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <vector>

#include "bopdist/errors.hpp"
#include "bopdist/matrix_io.hpp"
#include "bopdist/oracle.hpp"

namespace bopdist {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kRecurrenceThreshold = 500.0;

double neg_log_or_inf(double x) { return x > 0 ? -std::log(x) : kInf; }

// Exactly symmetric, zero diagonal: out(i, j) = out(j, i) = f(i, j) for i < j.
template <typename F>
Matrix symmetric_from(Eigen::Index n, F f) {
  Matrix out = Matrix::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) {
      out(i, j) = out(j, i) = f(i, j);
    }
  }
  return out;
}

Matrix symmetrize_potentials(const Matrix& phi) {
  return symmetric_from(phi.rows(), [&](Eigen::Index i, Eigen::Index j) {
    return (phi(i, j) + phi(j, i)) / 2;
  });
}

struct Arc {
  Eigen::Index to;
  double p;
  double logp;
  double cost;
};

// Out-arcs per node, so the soft-min below touches only real arcs.
std::vector<std::vector<Arc>> out_arcs(const Graph& g) {
  const Matrix p = reference_transitions(g).p;
  std::vector<std::vector<Arc>> out(static_cast<std::size_t>(p.rows()));
  for (Eigen::Index i = 0; i < p.rows(); ++i) {
    for (Eigen::Index j = 0; j < p.cols(); ++j) {
      if (p(i, j) > 0) {
        out[static_cast<std::size_t>(i)].push_back(
            {j, p(i, j), std::log(p(i, j)), g.costs()(i, j)});
      }
    }
  }
  return out;
}

// -1/theta log sum_j p_ij exp(-theta (c_ij + phi_j)) for one node.
//
// When the bracket is close to 1 (small theta), log1p/expm1 keep the digits
// that a plain log-sum-exp would cancel before the division by theta.
// Otherwise a max-shifted log-sum-exp avoids underflow at large theta.
double soft_min_update(const std::vector<Arc>& arcs, const Vector& phi,
                       double theta) {
  double shift = -kInf;
  double near_one = 0;  // sum_j p_ij expm1(-theta (c_ij + phi_j))
  for (const Arc& a : arcs) {
    const double cost = a.cost + phi(a.to);
    near_one += a.p * std::expm1(-theta * cost);
    if (std::isfinite(cost)) shift = std::max(shift, a.logp - theta * cost);
  }
  if (shift == -kInf) return kInf;
  if (near_one > -0.5) return -std::log1p(near_one) / theta;

  double acc = 0;
  for (const Arc& a : arcs) {
    const double cost = a.cost + phi(a.to);
    if (!std::isfinite(cost)) continue;
    acc += std::exp(a.logp - theta * cost - shift);
  }
  return -(shift + std::log(acc)) / theta;
}

double change(double before, double after) {
  if (before == after) return 0;  // also covers inf == inf
  return std::abs(after - before);
}

}  // namespace

std::string_view to_string(Measure m) {
  return m == Measure::kSurprisal ? "surprisal" : "potential";
}

std::optional<Measure> parse_measure(std::string_view s) {
  if (s == "surprisal") return Measure::kSurprisal;
  if (s == "potential") return Measure::kPotential;
  return std::nullopt;
}

DistanceMatrix surprisal_distance(const BopModel& m) {
  const ProbabilityMatrix ph = hitting_probabilities(m, true);
  const Matrix& p = ph.p;
  Matrix d = symmetric_from(p.rows(), [&](Eigen::Index i, Eigen::Index j) {
    if (p(i, j) == 0 || p(j, i) == 0) return kInf;
    return -(std::log(p(i, j)) + std::log(p(j, i))) / 2;
  });
  return {std::move(d), Measure::kSurprisal, m.theta()};
}

Matrix potentials(const BopModel& m) {
  const double theta = m.theta();
  const Matrix raw = m.z_hitting().unaryExpr(&neg_log_or_inf) / theta;

  // -log(z_h) / theta loses about one ulp of z_h divided by theta, which
  // dominates for small theta. One Jacobi sweep of the log-domain recurrence
  // recovers those digits: the soft-min map is non-expansive, so the sweep
  // never moves an entry further from the fixed point than rounding allows.
  // Infinite entries stay infinite.
  const auto arcs = out_arcs(m.graph());
  Matrix phi = raw;
  for (Eigen::Index k = 0; k < raw.cols(); ++k) {
    const Vector col = raw.col(k);
    for (Eigen::Index i = 0; i < raw.rows(); ++i) {
      if (i == k || !std::isfinite(col(i))) continue;
      const double next =
          soft_min_update(arcs[static_cast<std::size_t>(i)], col, theta);
      if (std::isfinite(next)) phi(i, k) = next;
    }
  }
  return phi;
}

DistanceMatrix potential_distance(const BopModel& m) {
  return {symmetrize_potentials(potentials(m)), Measure::kPotential,
          m.theta()};
}

Vector potential_to_target(const Graph& g, double theta, std::size_t k,
                           RecurrenceOptions opts) {
  if (!(theta > 0) || !std::isfinite(theta)) throw NonPositiveTheta(theta);
  const auto n = static_cast<Eigen::Index>(g.size());
  if (k >= g.size()) throw NodeOutOfRange(k, g.size());
  const auto target = static_cast<Eigen::Index>(k);

  const auto arcs = out_arcs(g);
  Vector phi = Vector::Constant(n, kInf);
  phi(target) = 0;
  double delta = kInf;
  int iter = 0;
  while (iter < opts.max_iters) {
    ++iter;
    delta = 0;
    // Gauss-Seidel sweep; from +inf the iterates decrease monotonically.
    for (Eigen::Index i = 0; i < n; ++i) {
      if (i == target) continue;
      const double next =
          soft_min_update(arcs[static_cast<std::size_t>(i)], phi, theta);
      delta = std::max(delta, change(phi(i), next));
      phi(i) = next;
    }
    if (delta < opts.tolerance) return phi;
  }
  throw NoConvergence(iter, delta, std::move(phi));
}

Vector potential_to_target(const BopModel& m, std::size_t k,
                           RecurrenceOptions opts) {
  return potential_to_target(m.graph(), m.theta(), k, opts);
}

DistanceMatrix distance_by_recurrence(const Graph& g, double theta,
                                      Measure measure,
                                      RecurrenceOptions opts) {
  const auto n = static_cast<Eigen::Index>(g.size());
  Matrix phi(n, n);
  for (Eigen::Index k = 0; k < n; ++k) {
    phi.col(k) = potential_to_target(g, theta, static_cast<std::size_t>(k),
                                     opts);
  }
  Matrix d = symmetrize_potentials(phi);
  if (measure == Measure::kPotential) {
    return {std::move(d), measure, theta};
  }

  // log Z_h = log sum_ij exp(-theta phi(i, j)); every term is in (0, 1]
  // since potentials are non-negative, and the diagonal adds n.
  double acc = 0;
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      if (std::isfinite(phi(i, j))) acc += std::exp(-theta * phi(i, j));
    }
  }
  const double log_partition = std::log(acc);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      if (i != j && std::isfinite(d(i, j))) {
        d(i, j) = theta * d(i, j) + log_partition;
      }
    }
  }
  return {std::move(d), measure, theta};
}

bool prefers_recurrence(const Graph& g, double theta) {
  const double cmin = g.min_arc_cost();
  return std::isfinite(cmin) && theta * cmin > kRecurrenceThreshold;
}

DistanceMatrix compute_distance(const Graph& g, double theta,
                                Measure measure) {
  if (prefers_recurrence(g, theta)) {
    return distance_by_recurrence(g, theta, measure);
  }
  const BopModel m = BopModel::build(g, theta);
  return measure == Measure::kPotential ? potential_distance(m)
                                        : surprisal_distance(m);
}

std::vector<LimitRow> distance_limits_report(const Graph& g,
                                             std::span<const double> thetas,
                                             DistanceRoute route) {
  const Matrix& a = g.affinities();
  const Matrix& c = g.costs();
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = i + 1; j < a.cols(); ++j) {
      if (a(i, j) != a(j, i) || c(i, j) != c(j, i)) {
        throw NotUndirected(static_cast<std::size_t>(i),
                            static_cast<std::size_t>(j));
      }
    }
  }

  const Matrix sp = oracle::shortest_path_matrix(g);
  const Matrix cc = oracle::commute_cost_matrix(g);
  auto gap = [](double x, double y) {
    if (x == y) return 0.0;
    return std::abs(x - y);
  };

  std::vector<LimitRow> rows;
  rows.reserve(thetas.size());
  for (double theta : thetas) {
    DistanceMatrix dm;
    switch (route) {
      case DistanceRoute::kAuto:
        dm = compute_distance(g, theta, Measure::kPotential);
        break;
      case DistanceRoute::kDense:
        dm = potential_distance(BopModel::build(g, theta));
        break;
      case DistanceRoute::kRecurrence:
        dm = distance_by_recurrence(g, theta, Measure::kPotential);
        break;
    }
    LimitRow row{theta, 0, 0};
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
      for (Eigen::Index j = 0; j < a.cols(); ++j) {
        if (i == j) continue;
        row.max_shortest_path_error =
            std::max(row.max_shortest_path_error, gap(dm.d(i, j), sp(i, j)));
        row.max_commute_cost_error = std::max(
            row.max_commute_cost_error, gap(2 * dm.d(i, j), cc(i, j)));
      }
    }
    rows.push_back(row);
  }
  return rows;
}

void write_distances(std::ostream& out, const DistanceMatrix& dm) {
  out << "# measure=" << to_string(dm.measure)
      << " theta=" << format_double(dm.theta) << '\n';
  write_tsv(out, dm.d);
}

}  // namespace bopdist
