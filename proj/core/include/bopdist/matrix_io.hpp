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

#ifndef BOPDIST_MATRIX_IO_HPP_
#define BOPDIST_MATRIX_IO_HPP_

#include <iosfwd>
#include <string>

#include <Eigen/Core>

namespace bopdist {

// Tab-separated matrices: one row per line, 17 significant digits, "inf"
// for +infinity. Lines starting with '#' are headers/comments.

/// Shortest round-trip-safe text for a double ("inf", "-inf", "nan" for the
/// non-finite values).
std::string format_double(double v);

void write_tsv(std::ostream& out, const Eigen::MatrixXd& m);

/// Reads a TSV matrix, skipping '#' lines. Throws ParseError on ragged rows
/// or unparsable fields.
Eigen::MatrixXd read_tsv(std::istream& in);

}  // namespace bopdist

#endif  // BOPDIST_MATRIX_IO_HPP_
