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

#include "bopdist/kernel.hpp"

#include <cmath>
#include <ostream>
#include <string>

#include <Eigen/Eigenvalues>

#include "bopdist/errors.hpp"
#include "bopdist/matrix_io.hpp"

namespace bopdist {

namespace {

// Components below this magnitude do not decide an eigenvector's sign.
constexpr double kSignThreshold = 1e-10;

// H m H for symmetric m, H = I - ee'/n, returned exactly symmetric.
Matrix double_center(const Matrix& m) {
  const Eigen::Index n = m.rows();
  const Vector row_mean = m.rowwise().mean();
  const double grand = row_mean.mean();
  Matrix k(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      k(i, j) = m(i, j) - row_mean(i) - row_mean(j) + grand;
    }
  }
  return (k + k.transpose()) / 2;
}

}  // namespace

KernelMatrix distance_to_kernel(const DistanceMatrix& d, bool clip_negative) {
  const Eigen::Index n = d.d.rows();
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      if (!std::isfinite(d.d(i, j))) {
        throw InfiniteDistance(static_cast<std::size_t>(i),
                               static_cast<std::size_t>(j));
      }
    }
  }
  const Matrix squared = d.d.cwiseProduct(d.d);
  Matrix k = -0.5 * double_center((squared + squared.transpose()) / 2);

  if (clip_negative) {
    Eigen::SelfAdjointEigenSolver<Matrix> eig(k);
    const Vector clipped = eig.eigenvalues().cwiseMax(0.0);
    const Matrix& v = eig.eigenvectors();
    // Re-centering keeps the result PSD (x'HKHx = (Hx)'K(Hx)) and removes
    // the drift the reconstruction adds to the row sums.
    k = double_center(v * clipped.asDiagonal() * v.transpose());
  }
  return {std::move(k), d.measure, clip_negative};
}

Embedding top_eigenvectors(const KernelMatrix& k, int dims) {
  const Eigen::Index n = k.k.rows();
  if (dims <= 0 || dims > n) {
    throw ValidationError("embedding dims must be in [1, " +
                          std::to_string(n) + "], got " +
                          std::to_string(dims));
  }
  Eigen::SelfAdjointEigenSolver<Matrix> eig(k.k);
  if (eig.info() != Eigen::Success) {
    throw NumericalError("eigendecomposition of the kernel failed");
  }
  Embedding e;
  e.dims = dims;
  e.measure = k.source_measure;
  e.vectors.resize(n, dims);
  e.eigenvalues.resize(dims);
  for (int c = 0; c < dims; ++c) {
    const Eigen::Index src = n - 1 - c;  // eigenvalues come ascending
    Vector v = eig.eigenvectors().col(src).normalized();
    for (Eigen::Index i = 0; i < n; ++i) {
      if (std::abs(v(i)) > kSignThreshold) {
        if (v(i) < 0) v = -v;
        break;
      }
    }
    e.vectors.col(c) = v;
    e.eigenvalues(c) = eig.eigenvalues()(src);
  }
  return e;
}

void write_embedding(std::ostream& out, const Embedding& e) {
  out << "# dims=" << e.dims << " measure=" << to_string(e.measure) << '\n';
  write_tsv(out, e.vectors);
}

void write_kernel(std::ostream& out, const KernelMatrix& k) {
  out << "# kernel measure=" << to_string(k.source_measure)
      << " psd_clipped=" << (k.psd_clipped ? 1 : 0) << '\n';
  write_tsv(out, k.k);
}

}  // namespace bopdist
