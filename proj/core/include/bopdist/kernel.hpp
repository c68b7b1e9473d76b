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

#ifndef BOPDIST_KERNEL_HPP_
#define BOPDIST_KERNEL_HPP_

#include <iosfwd>

#include "bopdist/distance.hpp"

namespace bopdist {

/// Double-centered kernel K = -1/2 H D^(2) H, H = I - ee'/n.
struct KernelMatrix {
  Matrix k;
  Measure source_measure;
  bool psd_clipped = false;
};

struct Embedding {
  Matrix vectors;      // n x dims, one row per node
  Vector eigenvalues;  // dims, non-increasing
  int dims = 0;
  Measure measure;
};

/// Squares the distances, double-centers them and optionally zeroes the
/// negative part of the spectrum. Throws InfiniteDistance on any +inf entry.
KernelMatrix distance_to_kernel(const DistanceMatrix& d,
                                bool clip_negative = false);

/// The `dims` leading eigenvectors (unit norm, largest eigenvalue first).
/// Each vector is oriented so that its first non-negligible component is
/// positive. Throws ValidationError when dims is 0 or exceeds n.
Embedding top_eigenvectors(const KernelMatrix& k, int dims);

/// Writes "# dims=<k> measure=<measure>" then one row per node.
void write_embedding(std::ostream& out, const Embedding& e);

/// Writes "# kernel measure=<measure> psd_clipped=<0|1>" then the TSV.
void write_kernel(std::ostream& out, const KernelMatrix& k);

}  // namespace bopdist

#endif  // BOPDIST_KERNEL_HPP_
