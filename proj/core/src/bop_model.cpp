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

#include "bopdist/bop_model.hpp"

#include <cmath>
#include <ostream>
#include <string>
#include <vector>

#include "bopdist/errors.hpp"
#include "bopdist/matrix_io.hpp"

namespace bopdist {

namespace {

constexpr double kResidualLimit = 1e-6;

Matrix weight_matrix(const Graph& g, const Matrix& p_ref, double theta,
                     std::vector<std::pair<std::size_t, std::size_t>>& lost) {
  const Matrix& c = g.costs();
  const Eigen::Index n = c.rows();
  Matrix w = Matrix::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      if (p_ref(i, j) == 0) continue;  // no arc: exp(-theta * inf) == 0
      w(i, j) = p_ref(i, j) * std::exp(-theta * c(i, j));
      if (w(i, j) == 0) {
        lost.emplace_back(static_cast<std::size_t>(i),
                          static_cast<std::size_t>(j));
      }
    }
  }
  return w;
}

// reach[i][j]: a walk (possibly empty) leads from i to j.
std::vector<std::vector<bool>> reachability(const Matrix& w) {
  const auto n = static_cast<std::size_t>(w.rows());
  std::vector<std::vector<bool>> reach(n, std::vector<bool>(n, false));
  std::vector<std::size_t> stack;
  for (std::size_t s = 0; s < n; ++s) {
    auto& seen = reach[s];
    seen[s] = true;
    stack.assign(1, s);
    while (!stack.empty()) {
      const std::size_t u = stack.back();
      stack.pop_back();
      for (std::size_t v = 0; v < n; ++v) {
        if (!seen[v] && w(static_cast<Eigen::Index>(u),
                          static_cast<Eigen::Index>(v)) > 0) {
          seen[v] = true;
          stack.push_back(v);
        }
      }
    }
  }
  return reach;
}

void check_node(const BopModel& m, std::size_t j) {
  if (j >= m.size()) throw NodeOutOfRange(j, m.size());
}

}  // namespace

BopModel BopModel::build(Graph g, double theta) {
  if (!(theta > 0) || !std::isfinite(theta)) throw NonPositiveTheta(theta);

  const TransitionMatrix ref = reference_transitions(g);
  std::vector<std::pair<std::size_t, std::size_t>> lost;
  Matrix w = weight_matrix(g, ref.p, theta, lost);
  const Eigen::Index n = w.rows();
  const Matrix i_minus_w = Matrix::Identity(n, n) - w;

  Eigen::PartialPivLU<Matrix> lu(i_minus_w);
  Matrix z = lu.solve(Matrix::Identity(n, n));
  if (!z.allFinite()) {
    throw SingularSystem("I - W is singular at theta " +
                         format_double(theta));
  }
  const double residual =
      (i_minus_w * z - Matrix::Identity(n, n)).cwiseAbs().maxCoeff();
  if (!(residual <= kResidualLimit)) {
    throw SingularSystem("I - W is numerically singular at theta " +
                         format_double(theta) + " (residual " +
                         format_double(residual) + ")");
  }

  // z_ij > 0 exactly when j is reachable from i through arcs with w > 0.
  // Pin the unreachable entries to zero (the LU leaves rounding noise there)
  // and clamp negative noise elsewhere.
  const std::vector<std::vector<bool>> reach = reachability(w);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      if (!reach[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] ||
          z(i, j) < 0) {
        z(i, j) = 0;
      }
    }
  }

  Matrix z_h = z * z.diagonal().cwiseInverse().asDiagonal();
  z_h.diagonal().setOnes();

  auto state = std::make_shared<State>(State{std::move(g), theta,
                                             std::move(w), std::move(lu),
                                             std::move(z), std::move(z_h),
                                             residual, std::move(lost)});
  return BopModel(std::move(state));
}

Vector BopModel::solve(const Vector& b) const { return state_->lu.solve(b); }

std::string_view to_string(ProbabilityKind kind) {
  switch (kind) {
    case ProbabilityKind::kRegular:
      return "regular";
    case ProbabilityKind::kRegularNonzero:
      return "regular-nonzero";
    case ProbabilityKind::kHitting:
      return "hitting";
    case ProbabilityKind::kHittingNonzero:
      return "hitting-nonzero";
  }
  return "unknown";
}

namespace {

ProbabilityMatrix normalize(Matrix mass, ProbabilityKind kind) {
  const double total = mass.sum();
  if (!(total > 0)) {
    throw DegeneratePartition(std::string(to_string(kind)) +
                              " partition function is zero");
  }
  mass /= total;
  return {std::move(mass), kind, total};
}

}  // namespace

ProbabilityMatrix regular_probabilities(const BopModel& m,
                                        bool include_zero_length) {
  Matrix mass = m.z();
  if (include_zero_length) {
    return normalize(std::move(mass), ProbabilityKind::kRegular);
  }
  // W^0 = I is exactly the zero-length contribution; the clamp removes the
  // sub-ulp negatives left when z_ii rounds to 1.
  mass.diagonal().array() -= 1.0;
  mass = mass.cwiseMax(0.0);
  return normalize(std::move(mass), ProbabilityKind::kRegularNonzero);
}

ProbabilityMatrix hitting_probabilities(const BopModel& m,
                                        bool include_zero_length) {
  Matrix mass = m.z_hitting();
  if (include_zero_length) {
    return normalize(std::move(mass), ProbabilityKind::kHitting);
  }
  mass.diagonal().setZero();
  return normalize(std::move(mass), ProbabilityKind::kHittingNonzero);
}

Vector hitting_column_direct(const BopModel& m, std::size_t j) {
  check_node(m, j);
  const auto n = static_cast<Eigen::Index>(m.size());
  const auto jj = static_cast<Eigen::Index>(j);
  Matrix w = m.w();
  w.row(jj).setZero();
  const Matrix system = Matrix::Identity(n, n) - w;
  Eigen::PartialPivLU<Matrix> lu(system);
  Vector rhs = Vector::Unit(n, jj);
  Vector x = lu.solve(rhs);
  if (!x.allFinite()) throw SingularSystem("I - W^(-j) is singular");
  const double residual = (system * x - rhs).cwiseAbs().maxCoeff();
  if (!(residual <= kResidualLimit)) {
    throw SingularSystem("I - W^(-j) is numerically singular (residual " +
                         format_double(residual) + ")");
  }
  return x;
}

std::pair<double, double> bounded_partition_check(const BopModel& m,
                                                  int t_max) {
  const auto n = static_cast<Eigen::Index>(m.size());
  Vector walk = Vector::Ones(n);  // W^t e
  double total = static_cast<double>(n);
  for (int t = 1; t <= t_max; ++t) {
    walk = m.w() * walk;
    total += walk.sum();
  }
  return {total, m.z().sum()};
}

void write_probabilities(std::ostream& out, const ProbabilityMatrix& pm,
                         double theta) {
  out << "# kind=" << to_string(pm.kind) << " theta=" << format_double(theta)
      << " partition=" << format_double(pm.partition) << '\n';
  write_tsv(out, pm.p);
}

}  // namespace bopdist
