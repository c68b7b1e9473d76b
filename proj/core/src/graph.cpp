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

#include "bopdist/graph.hpp"

#include <charconv>
#include <cmath>
#include <istream>
#include <limits>
#include <map>
#include <ostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "bopdist/errors.hpp"
#include "bopdist/matrix_io.hpp"

namespace bopdist {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::size_t idx(Eigen::Index i) { return static_cast<std::size_t>(i); }

}  // namespace

Graph Graph::build(Matrix affinities, std::optional<Matrix> costs) {
  const Eigen::Index n = affinities.rows();
  if (n == 0 || affinities.cols() != n) {
    throw ShapeMismatch("affinity matrix must be square and non-empty, got " +
                        std::to_string(affinities.rows()) + "x" +
                        std::to_string(affinities.cols()));
  }
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      const double a = affinities(i, j);
      if (!(a >= 0) || !std::isfinite(a)) {
        throw NegativeEntry(idx(i), idx(j), "affinity");
      }
    }
  }

  Matrix c;
  if (costs) {
    if (costs->rows() != n || costs->cols() != n) {
      throw ShapeMismatch("cost matrix is " + std::to_string(costs->rows()) +
                          "x" + std::to_string(costs->cols()) +
                          ", affinities are " + std::to_string(n) + "x" +
                          std::to_string(n));
    }
    c = std::move(*costs);
    for (Eigen::Index i = 0; i < n; ++i) {
      for (Eigen::Index j = 0; j < n; ++j) {
        const double cij = c(i, j);
        if (!(cij >= 0)) throw NegativeEntry(idx(i), idx(j), "cost");
        if ((affinities(i, j) > 0) != std::isfinite(cij)) {
          throw ShapeMismatch("arc support mismatch at (" +
                              std::to_string(i) + ", " + std::to_string(j) +
                              "): affinity " +
                              format_double(affinities(i, j)) + ", cost " +
                              format_double(cij));
        }
      }
    }
  } else {
    c.resize(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
      for (Eigen::Index j = 0; j < n; ++j) {
        const double a = affinities(i, j);
        c(i, j) = a > 0 ? 1.0 / a : kInf;
      }
    }
  }

  for (Eigen::Index i = 0; i < n; ++i) {
    if (!(affinities.row(i).sum() > 0)) throw ZeroOutDegree(idx(i));
  }
  return Graph(std::move(affinities), std::move(c));
}

double Graph::min_arc_cost() const {
  double best = kInf;
  for (Eigen::Index i = 0; i < c_.rows(); ++i) {
    for (Eigen::Index j = 0; j < c_.cols(); ++j) {
      if (a_(i, j) > 0 && c_(i, j) < best) best = c_(i, j);
    }
  }
  return best;
}

bool Graph::is_undirected() const {
  for (Eigen::Index i = 0; i < a_.rows(); ++i) {
    for (Eigen::Index j = i + 1; j < a_.cols(); ++j) {
      if (a_(i, j) != a_(j, i) || c_(i, j) != c_(j, i)) return false;
    }
  }
  return true;
}

TransitionMatrix reference_transitions(const Graph& g) {
  const Matrix& a = g.affinities();
  Matrix p(a.rows(), a.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    p.row(i) = a.row(i) / a.row(i).sum();
  }
  return {std::move(p)};
}

namespace {

struct ArcLine {
  std::size_t from;
  std::size_t to;
  double affinity;
  std::optional<double> cost;
  std::size_t line;
};

template <typename T>
bool parse_field(const std::string& tok, T& out) {
  const char* first = tok.data();
  const char* last = tok.data() + tok.size();
  auto [ptr, ec] = std::from_chars(first, last, out);
  return ec == std::errc() && ptr == last;
}

}  // namespace

Graph load_edge_list(std::istream& in) {
  std::vector<ArcLine> arcs;
  std::map<std::pair<std::size_t, std::size_t>, std::size_t> seen;
  std::size_t max_id = 0;
  bool any = false;

  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    if (auto hash = raw.find('#'); hash != std::string::npos) {
      raw.erase(hash);
    }
    std::istringstream fields(raw);
    std::vector<std::string> tok;
    for (std::string t; fields >> t;) tok.push_back(std::move(t));
    if (tok.empty()) continue;
    if (tok.size() != 3 && tok.size() != 4) {
      throw ParseError(line_no, "expected \"i j a [c]\", got " +
                                    std::to_string(tok.size()) + " fields");
    }
    ArcLine arc{};
    arc.line = line_no;
    if (!parse_field(tok[0], arc.from) || !parse_field(tok[1], arc.to)) {
      throw ParseError(line_no, "node ids must be non-negative integers");
    }
    if (!parse_field(tok[2], arc.affinity)) {
      throw ParseError(line_no, "bad affinity '" + tok[2] + "'");
    }
    if (arc.affinity < 0) {
      throw ParseError(line_no, "negative affinity");
    }
    if (!(arc.affinity > 0) || !std::isfinite(arc.affinity)) {
      throw ParseError(line_no, "affinity must be positive and finite");
    }
    if (tok.size() == 4) {
      double c = 0;
      if (!parse_field(tok[3], c)) {
        throw ParseError(line_no, "bad cost '" + tok[3] + "'");
      }
      if (!(c >= 0) || !std::isfinite(c)) {
        throw ParseError(line_no, "cost must be non-negative and finite");
      }
      arc.cost = c;
    }
    auto key = std::make_pair(arc.from, arc.to);
    if (seen.contains(key)) throw DuplicateArc(arc.from, arc.to, line_no);
    seen.emplace(key, line_no);
    max_id = std::max({max_id, arc.from, arc.to});
    any = true;
    arcs.push_back(arc);
  }
  if (!any) throw ParseError(line_no, "edge list contains no arcs");

  const auto n = static_cast<Eigen::Index>(max_id + 1);
  Matrix a = Matrix::Zero(n, n);
  Matrix c = Matrix::Constant(n, n, kInf);
  for (const auto& arc : arcs) {
    const auto i = static_cast<Eigen::Index>(arc.from);
    const auto j = static_cast<Eigen::Index>(arc.to);
    a(i, j) = arc.affinity;
    c(i, j) = arc.cost ? *arc.cost : 1.0 / arc.affinity;
  }
  return Graph::build(std::move(a), std::move(c));
}

void write_edge_list(std::ostream& out, const Graph& g) {
  const Matrix& a = g.affinities();
  const Matrix& c = g.costs();
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      if (a(i, j) > 0) {
        out << i << ' ' << j << ' ' << format_double(a(i, j)) << ' '
            << format_double(c(i, j)) << '\n';
      }
    }
  }
}

}  // namespace bopdist
