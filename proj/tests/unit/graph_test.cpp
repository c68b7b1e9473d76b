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

#include <cmath>
#include <limits>
#include <random>
#include <sstream>

#include <gtest/gtest.h>

#include "bopdist/errors.hpp"
#include "bopdist/graph.hpp"
#include "bopdist/matrix_io.hpp"
#include "graphs.hpp"

namespace bopdist {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

TEST(BuildGraph, ReciprocalCostsByDefault) {
  Matrix a(2, 2);
  a << 0, 1, 1, 0;
  const Graph g = Graph::build(a);
  EXPECT_EQ(g.costs()(0, 1), 1.0);
  EXPECT_EQ(g.costs()(1, 0), 1.0);
  EXPECT_EQ(g.costs()(0, 0), kInf);
  EXPECT_EQ(g.costs()(1, 1), kInf);

  a << 0, 2, 4, 0;
  const Graph h = Graph::build(a);
  EXPECT_EQ(h.costs()(0, 1), 0.5);
  EXPECT_EQ(h.costs()(1, 0), 0.25);
}

TEST(BuildGraph, RejectsEmptyRow) {
  Matrix a(2, 2);
  a << 0, 1, 0, 0;
  try {
    Graph::build(a);
    FAIL() << "expected ZeroOutDegree";
  } catch (const ZeroOutDegree& e) {
    EXPECT_EQ(e.node(), 1u);
  }
}

TEST(BuildGraph, RejectsNegativeAndMismatchedInput) {
  Matrix a(2, 2);
  a << 0, -1, 1, 0;
  EXPECT_THROW(Graph::build(a), NegativeEntry);

  a << 0, 1, 1, 0;
  Matrix c(2, 2);
  c << kInf, -1, 1, kInf;
  EXPECT_THROW(Graph::build(a, c), NegativeEntry);

  c << kInf, 1, 1, 3;  // cost on a missing arc
  EXPECT_THROW(Graph::build(a, c), ShapeMismatch);

  c << kInf, kInf, 1, kInf;  // arc without a finite cost
  EXPECT_THROW(Graph::build(a, c), ShapeMismatch);

  EXPECT_THROW(Graph::build(a, Matrix::Ones(3, 3)), ShapeMismatch);
  EXPECT_THROW(Graph::build(Matrix::Ones(2, 3)), ShapeMismatch);
}

TEST(BuildGraph, AcceptsSelfLoopsAndZeroCosts) {
  Matrix a(2, 2);
  a << 1, 1, 1, 0;
  Matrix c(2, 2);
  c << 0, 0, 2, kInf;
  const Graph g = Graph::build(a, c);
  EXPECT_TRUE(g.has_arc(0, 0));
  EXPECT_EQ(g.min_arc_cost(), 0.0);
}

TEST(ReferenceTransitions, NormalizesRows) {
  EXPECT_EQ(reference_transitions(testing::two_node_graph()).p,
            (Matrix(2, 2) << 0, 1, 1, 0).finished());

  const Matrix p = reference_transitions(testing::path_graph()).p;
  EXPECT_EQ(p(1, 0), 0.5);
  EXPECT_EQ(p(1, 1), 0.0);
  EXPECT_EQ(p(1, 2), 0.5);

  Matrix a(3, 3);
  a << 0, 1, 3, 1, 0, 0, 3, 0, 0;
  const Matrix q = reference_transitions(Graph::build(a)).p;
  EXPECT_EQ(q(0, 0), 0.0);
  EXPECT_EQ(q(0, 1), 0.25);
  EXPECT_EQ(q(0, 2), 0.75);
}

TEST(ReferenceTransitions, RowsSumToOneOnRandomGraphs) {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 2 + rng() % 40;
    const Graph g = testing::random_strongly_connected(n, rng() % (2 * n), rng);
    const Matrix p = reference_transitions(g).p;
    for (Eigen::Index i = 0; i < p.rows(); ++i) {
      EXPECT_NEAR(p.row(i).sum(), 1.0, 1e-12);
      for (Eigen::Index j = 0; j < p.cols(); ++j) {
        const bool arc = g.affinities()(i, j) > 0;
        EXPECT_EQ(p(i, j) > 0, arc);
        EXPECT_EQ(std::isfinite(g.costs()(i, j)), arc);
      }
    }
  }
}

TEST(EdgeList, ParsesMinimalInput) {
  std::istringstream in("0 1 1\n1 0 1\n");
  const Graph g = load_edge_list(in);
  ASSERT_EQ(g.size(), 2u);
  EXPECT_EQ(g.affinities(), testing::two_node_graph().affinities());
  EXPECT_EQ(g.costs(), testing::two_node_graph().costs());
}

TEST(EdgeList, ExplicitCostsCommentsAndBlankLines) {
  std::istringstream in("# header\n\n0 1 1 5   # trailing\n1 0 1 5\n");
  const Graph g = load_edge_list(in);
  EXPECT_EQ(g.costs()(0, 1), 5.0);
  EXPECT_EQ(g.costs()(1, 0), 5.0);
}

TEST(EdgeList, RejectsDuplicates) {
  std::istringstream in("0 1 1\n0 1 2\n");
  try {
    load_edge_list(in);
    FAIL() << "expected DuplicateArc";
  } catch (const DuplicateArc& e) {
    EXPECT_EQ(e.from(), 0u);
    EXPECT_EQ(e.to(), 1u);
    EXPECT_EQ(e.line(), 2u);
  }
}

TEST(EdgeList, ReportsLineOfMalformedInput) {
  for (const char* text : {"0 1 1\n1 0\n", "0 1 1\nx 0 1\n", "0 1 1\n1 0 0\n",
                           "0 1 1\n1 0 -2\n", "0 1 1\n1 0 1 -1\n",
                           "0 1 1\n1 0 1 2 3\n", "0 1 1\n-1 0 1\n"}) {
    std::istringstream in(text);
    try {
      load_edge_list(in);
      FAIL() << "expected ParseError for " << text;
    } catch (const ParseError& e) {
      EXPECT_EQ(e.line(), 2u) << text;
    }
  }
  std::istringstream empty("# nothing\n");
  EXPECT_THROW(load_edge_list(empty), ParseError);
}

TEST(EdgeList, DanglingNodeIsRejected) {
  std::istringstream in("0 1 1\n");
  EXPECT_THROW(load_edge_list(in), ZeroOutDegree);
}

TEST(EdgeList, RoundTripIsBitExact) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t n = 2 + rng() % 20;
    const Graph g = trial % 2
                        ? testing::random_strongly_connected(n, n, rng)
                        : testing::random_undirected(n, n / 2, 5, rng);
    std::ostringstream out;
    write_edge_list(out, g);
    std::istringstream in(out.str());
    const Graph back = load_edge_list(in);
    EXPECT_EQ(back.affinities(), g.affinities());
    EXPECT_EQ(back.costs(), g.costs());
  }
}

TEST(MatrixIo, TsvRoundTripKeepsInfinityAndFullPrecision) {
  Matrix m(2, 3);
  m << 0.1, 1.0 / 3.0, kInf, -2.5e-300, 12345678.901234567, 0;
  std::ostringstream out;
  out << "# comment\n";
  write_tsv(out, m);
  EXPECT_NE(out.str().find("inf"), std::string::npos);
  std::istringstream in(out.str());
  EXPECT_EQ(read_tsv(in), m);
}

TEST(MatrixIo, RejectsRaggedRows) {
  std::istringstream in("1\t2\n3\n");
  EXPECT_THROW(read_tsv(in), ParseError);
}

}  // namespace
}  // namespace bopdist
