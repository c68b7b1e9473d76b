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
#include <vector>

#include <Eigen/Eigenvalues>
#include <gtest/gtest.h>

#include "bopdist/errors.hpp"
#include "bopdist/kernel.hpp"
#include "bopdist/ssl.hpp"
#include "graphs.hpp"

namespace bopdist {
namespace {

DistanceMatrix make_distances(Matrix d) {
  return {std::move(d), Measure::kPotential, 1.0};
}

Matrix centered(const Matrix& k) {
  const Eigen::Index n = k.rows();
  const Matrix h =
      Matrix::Identity(n, n) - Matrix::Constant(n, n, 1.0 / double(n));
  return h * k * h;
}

TEST(Kernel, TwoNodeValues) {
  Matrix d(2, 2);
  d << 0, 1, 1, 0;
  const KernelMatrix k = distance_to_kernel(make_distances(d));
  Matrix want(2, 2);
  want << 0.25, -0.25, -0.25, 0.25;
  EXPECT_LE((k.k - want).cwiseAbs().maxCoeff(), 1e-15);
  EXPECT_FALSE(k.psd_clipped);

  const Embedding e = top_eigenvectors(k, 1);
  EXPECT_NEAR(e.eigenvalues(0), 0.5, 1e-14);
  EXPECT_NEAR(e.vectors(0, 0), 1 / std::sqrt(2.0), 1e-14);
  EXPECT_NEAR(e.vectors(1, 0), -1 / std::sqrt(2.0), 1e-14);
}

TEST(Kernel, RejectsInfiniteDistances) {
  const BopModel m = BopModel::build(testing::two_components(), 1.0);
  EXPECT_THROW(distance_to_kernel(potential_distance(m)), InfiniteDistance);
}

TEST(Kernel, CenteredSymmetricAndReconstructs) {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 10; ++trial) {
    const std::size_t n = 2 + rng() % 25;
    const BopModel m = BopModel::build(
        testing::random_strongly_connected(n, n, rng), 0.1 + (rng() % 10) / 5.0);
    for (bool clip : {false, true}) {
      const KernelMatrix k = distance_to_kernel(potential_distance(m), clip);
      EXPECT_EQ(k.k, k.k.transpose());
      EXPECT_LE(k.k.rowwise().sum().cwiseAbs().maxCoeff(), 1e-10);
      EXPECT_LE((centered(k.k) - k.k).cwiseAbs().maxCoeff(), 1e-10);
      const Eigen::SelfAdjointEigenSolver<Matrix> es(k.k);
      if (clip) EXPECT_GE(es.eigenvalues().minCoeff(), -1e-8);

      const int dims = static_cast<int>(n);
      const Embedding e = top_eigenvectors(k, dims);
      const Matrix back = e.vectors * e.eigenvalues.asDiagonal() *
                          e.vectors.transpose();
      EXPECT_LE((back - k.k).cwiseAbs().maxCoeff(), 1e-9);
      for (int c = 1; c < dims; ++c) {
        EXPECT_GE(e.eigenvalues(c - 1), e.eigenvalues(c));
      }
    }
  }
}

TEST(Kernel, IgnoresConstantShiftOfSquaredDistances) {
  Matrix d(3, 3);
  d << 0, 1, 2, 1, 0, 1.5, 2, 1.5, 0;
  Matrix shifted = (d.array().square() + 3.0).sqrt().matrix();
  shifted.diagonal().setZero();
  const Matrix a = distance_to_kernel(make_distances(d)).k;
  // The shift applies off-diagonal only, so only the off-diagonal part of
  // -1/2 * 3 (ee' - I) survives centering: 3/2 H.
  const Matrix b = distance_to_kernel(make_distances(shifted)).k;
  const Matrix h = Matrix::Identity(3, 3) - Matrix::Constant(3, 3, 1.0 / 3);
  EXPECT_LE((b - a - 1.5 * h).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(Embedding, SignConventionAndDeterminism) {
  std::mt19937_64 rng(33);
  const BopModel m =
      BopModel::build(testing::random_strongly_connected(12, 12, rng), 0.5);
  const KernelMatrix k = distance_to_kernel(potential_distance(m));
  const Embedding a = top_eigenvectors(k, 4);
  const Embedding b = top_eigenvectors(k, 4);
  EXPECT_EQ(a.vectors, b.vectors);
  for (int c = 0; c < 4; ++c) {
    EXPECT_NEAR(a.vectors.col(c).norm(), 1.0, 1e-12);
    for (Eigen::Index i = 0; i < a.vectors.rows(); ++i) {
      if (std::abs(a.vectors(i, c)) > 1e-10) {
        EXPECT_GT(a.vectors(i, c), 0.0);
        break;
      }
    }
  }
  EXPECT_THROW(top_eigenvectors(k, 0), ValidationError);
  EXPECT_THROW(top_eigenvectors(k, 13), ValidationError);
}

TEST(Embedding, LeadingVectorSeparatesBlocks) {
  const std::vector<std::size_t> sizes{20, 20};
  const ssl::LabeledGraphDataset ds =
      ssl::stochastic_block_model(sizes, 0.5, 0.02, 35);
  const DistanceMatrix d = compute_distance(ds.graph(), 0.5, Measure::kPotential);
  const Embedding e = top_eigenvectors(distance_to_kernel(d), 1);
  const double s0 = e.vectors(0, 0) > 0 ? 1.0 : -1.0;
  for (std::size_t i = 0; i < ds.size(); ++i) {
    const double side = s0 * e.vectors(static_cast<Eigen::Index>(i), 0);
    if (*ds.labels()[i] == 0) {
      EXPECT_GT(side, 0.0) << i;
    } else {
      EXPECT_LT(side, 0.0) << i;
    }
  }
}

TEST(Kernel, SerializationHeaders) {
  Matrix d(2, 2);
  d << 0, 1, 1, 0;
  const KernelMatrix k = distance_to_kernel(make_distances(d), true);
  std::ostringstream out;
  write_kernel(out, k);
  EXPECT_EQ(out.str().substr(0, out.str().find('\n')),
            "# kernel measure=potential psd_clipped=1");
  std::ostringstream emb;
  write_embedding(emb, top_eigenvectors(k, 1));
  EXPECT_EQ(emb.str().substr(0, emb.str().find('\n')),
            "# dims=1 measure=potential");
}

}  // namespace
}  // namespace bopdist
