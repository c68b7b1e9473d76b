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

#include "bopdist/oracle.hpp"

#include <cmath>
#include <limits>
#include <vector>

#include "bopdist/errors.hpp"

namespace bopdist::oracle {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

using Dense = std::vector<std::vector<double>>;

Dense natural_walk(const Graph& g) {
  const std::size_t n = g.size();
  const Matrix& a = g.affinities();
  Dense p(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i) {
    double row = 0;
    for (std::size_t j = 0; j < n; ++j) {
      row += a(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
    }
    for (std::size_t j = 0; j < n; ++j) {
      p[i][j] =
          a(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) / row;
    }
  }
  return p;
}

double cost(const Graph& g, std::size_t i, std::size_t j) {
  return g.costs()(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
}

struct Walker {
  const Graph& g;
  const Dense& p;
  double theta;
  std::size_t source;
  std::size_t target;
  int t_max;
  bool hitting;
  double mass = 0;
  std::uint64_t count = 0;

  void visit(std::size_t node, int depth, double prob, double total_cost) {
    if (node == target) {
      mass += prob * std::exp(-theta * total_cost);
      ++count;
      if (hitting) return;
    }
    if (depth == t_max) return;
    for (std::size_t next = 0; next < p.size(); ++next) {
      if (p[node][next] > 0) {
        visit(next, depth + 1, prob * p[node][next],
              total_cost + cost(g, node, next));
      }
    }
  }
};

// Solves a x = b in place by Gaussian elimination with partial pivoting.
std::vector<double> gauss_solve(Dense a, std::vector<double> b) {
  const std::size_t n = b.size();
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    for (std::size_t r = col + 1; r < n; ++r) {
      if (std::abs(a[r][col]) > std::abs(a[pivot][col])) pivot = r;
    }
    if (a[pivot][col] == 0) {
      throw SingularSystem("first-passage system is singular");
    }
    std::swap(a[pivot], a[col]);
    std::swap(b[pivot], b[col]);
    for (std::size_t r = col + 1; r < n; ++r) {
      const double f = a[r][col] / a[col][col];
      if (f == 0) continue;
      for (std::size_t c = col; c < n; ++c) a[r][c] -= f * a[col][c];
      b[r] -= f * b[col];
    }
  }
  std::vector<double> x(n);
  for (std::size_t r = n; r-- > 0;) {
    double s = b[r];
    for (std::size_t c = r + 1; c < n; ++c) s -= a[r][c] * x[c];
    x[r] = s / a[r][r];
  }
  return x;
}

}  // namespace

PathEnumeration enumerate_path_mass(const Graph& g, double theta,
                                    std::size_t source, std::size_t target,
                                    int t_max, bool hitting) {
  if (t_max > kMaxEnumerationDepth) {
    throw DepthLimitExceeded(t_max, kMaxEnumerationDepth);
  }
  if (source >= g.size()) throw NodeOutOfRange(source, g.size());
  if (target >= g.size()) throw NodeOutOfRange(target, g.size());
  const Dense p = natural_walk(g);
  Walker walker{g, p, theta, source, target, t_max, hitting};
  if (t_max >= 0) walker.visit(source, 0, 1.0, 0.0);
  return {source, target, t_max, walker.mass, walker.count};
}

Matrix shortest_path_matrix(const Graph& g) {
  const std::size_t n = g.size();
  Matrix sp = Matrix::Constant(static_cast<Eigen::Index>(n),
                               static_cast<Eigen::Index>(n), kInf);
  for (std::size_t s = 0; s < n; ++s) {
    std::vector<double> dist(n, kInf);
    std::vector<bool> done(n, false);
    dist[s] = 0;
    for (std::size_t round = 0; round < n; ++round) {
      std::size_t u = n;
      for (std::size_t v = 0; v < n; ++v) {
        if (!done[v] && dist[v] < kInf && (u == n || dist[v] < dist[u])) u = v;
      }
      if (u == n) break;
      done[u] = true;
      for (std::size_t v = 0; v < n; ++v) {
        if (g.has_arc(u, v) && dist[u] + cost(g, u, v) < dist[v]) {
          dist[v] = dist[u] + cost(g, u, v);
        }
      }
    }
    for (std::size_t v = 0; v < n; ++v) {
      sp(static_cast<Eigen::Index>(s), static_cast<Eigen::Index>(v)) = dist[v];
    }
  }
  return sp;
}

Vector first_passage_cost(const Graph& g, std::size_t k) {
  const std::size_t n = g.size();
  if (k >= n) throw NodeOutOfRange(k, n);
  const Dense p = natural_walk(g);

  // Nodes that can reach k at all.
  std::vector<bool> reaches(n, false);
  reaches[k] = true;
  std::vector<std::size_t> stack{k};
  while (!stack.empty()) {
    const std::size_t v = stack.back();
    stack.pop_back();
    for (std::size_t u = 0; u < n; ++u) {
      if (!reaches[u] && p[u][v] > 0) {
        reaches[u] = true;
        stack.push_back(u);
      }
    }
  }
  // m is infinite wherever the walk can, before hitting k, enter a node that
  // never reaches k.
  std::vector<bool> infinite(n, false);
  for (std::size_t v = 0; v < n; ++v) {
    if (!reaches[v]) {
      infinite[v] = true;
      stack.push_back(v);
    }
  }
  while (!stack.empty()) {
    const std::size_t v = stack.back();
    stack.pop_back();
    for (std::size_t u = 0; u < n; ++u) {
      if (u != k && !infinite[u] && p[u][v] > 0) {
        infinite[u] = true;
        stack.push_back(u);
      }
    }
  }

  std::vector<std::size_t> unknown;
  for (std::size_t i = 0; i < n; ++i) {
    if (i != k && !infinite[i]) unknown.push_back(i);
  }
  // m_i - sum_{j != k} p_ij m_j = sum_j p_ij c_ij over the finite nodes.
  const std::size_t u = unknown.size();
  Dense sys(u, std::vector<double>(u, 0.0));
  std::vector<double> rhs(u, 0.0);
  for (std::size_t r = 0; r < u; ++r) {
    const std::size_t i = unknown[r];
    sys[r][r] = 1.0;
    for (std::size_t j = 0; j < n; ++j) {
      if (p[i][j] > 0) rhs[r] += p[i][j] * cost(g, i, j);
    }
    for (std::size_t s = 0; s < u; ++s) sys[r][s] -= p[i][unknown[s]];
  }
  const std::vector<double> sol = gauss_solve(std::move(sys), std::move(rhs));

  Vector m = Vector::Constant(static_cast<Eigen::Index>(n), kInf);
  m(static_cast<Eigen::Index>(k)) = 0;
  for (std::size_t r = 0; r < u; ++r) {
    m(static_cast<Eigen::Index>(unknown[r])) = sol[r];
  }
  return m;
}

Matrix commute_cost_matrix(const Graph& g) {
  const auto n = static_cast<Eigen::Index>(g.size());
  Matrix m(n, n);  // m(i, k): first-passage cost from i to k
  for (Eigen::Index k = 0; k < n; ++k) {
    m.col(k) = first_passage_cost(g, static_cast<std::size_t>(k));
  }
  Matrix cc = Matrix::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      if (i != j) cc(i, j) = m(i, j) + m(j, i);
    }
  }
  return cc;
}

}  // namespace bopdist::oracle
