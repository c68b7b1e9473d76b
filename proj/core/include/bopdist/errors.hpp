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

#ifndef BOPDIST_ERRORS_HPP_
#define BOPDIST_ERRORS_HPP_

#include <cstddef>
#include <stdexcept>
#include <string>

#include <Eigen/Core>

namespace bopdist {

// Two families: bad input (ValidationError) and numerical breakdown
// (NumericalError). Front ends map them to distinct exit statuses.

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ValidationError : public Error {
 public:
  using Error::Error;
};

class NumericalError : public Error {
 public:
  using Error::Error;
};

class ZeroOutDegree : public ValidationError {
 public:
  explicit ZeroOutDegree(std::size_t node)
      : ValidationError("node " + std::to_string(node) +
                        " has no outgoing arc"),
        node_(node) {}
  std::size_t node() const { return node_; }

 private:
  std::size_t node_;
};

class ShapeMismatch : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class NegativeEntry : public ValidationError {
 public:
  NegativeEntry(std::size_t row, std::size_t col, const std::string& what)
      : ValidationError(what + " at (" + std::to_string(row) + ", " +
                        std::to_string(col) + ") is negative or NaN"),
        row_(row),
        col_(col) {}
  std::size_t row() const { return row_; }
  std::size_t col() const { return col_; }

 private:
  std::size_t row_;
  std::size_t col_;
};

class ParseError : public ValidationError {
 public:
  ParseError(std::size_t line, const std::string& why)
      : ValidationError("line " + std::to_string(line) + ": " + why),
        line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

class DuplicateArc : public ValidationError {
 public:
  DuplicateArc(std::size_t from, std::size_t to, std::size_t line)
      : ValidationError("line " + std::to_string(line) + ": duplicate arc (" +
                        std::to_string(from) + ", " + std::to_string(to) +
                        ")"),
        from_(from),
        to_(to),
        line_(line) {}
  std::size_t from() const { return from_; }
  std::size_t to() const { return to_; }
  std::size_t line() const { return line_; }

 private:
  std::size_t from_;
  std::size_t to_;
  std::size_t line_;
};

class NonPositiveTheta : public ValidationError {
 public:
  explicit NonPositiveTheta(double theta)
      : ValidationError("theta must be positive, got " +
                        std::to_string(theta)) {}
};

class NodeOutOfRange : public ValidationError {
 public:
  NodeOutOfRange(std::size_t node, std::size_t n)
      : ValidationError("node " + std::to_string(node) +
                        " out of range for graph with " + std::to_string(n) +
                        " nodes") {}
};

class NotUndirected : public ValidationError {
 public:
  NotUndirected(std::size_t row, std::size_t col)
      : ValidationError("graph is not undirected: arc (" +
                        std::to_string(row) + ", " + std::to_string(col) +
                        ") differs from its reverse") {}
};

class DepthLimitExceeded : public ValidationError {
 public:
  DepthLimitExceeded(int t_max, int limit)
      : ValidationError("path enumeration depth " + std::to_string(t_max) +
                        " exceeds limit " + std::to_string(limit)) {}
};

class InfiniteDistance : public ValidationError {
 public:
  InfiniteDistance(std::size_t row, std::size_t col)
      : ValidationError("distance (" + std::to_string(row) + ", " +
                        std::to_string(col) + ") is infinite"),
        row_(row),
        col_(col) {}
  std::size_t row() const { return row_; }
  std::size_t col() const { return col_; }

 private:
  std::size_t row_;
  std::size_t col_;
};

class InsufficientClassSize : public ValidationError {
 public:
  InsufficientClassSize(int label, std::size_t have, std::size_t need)
      : ValidationError("class " + std::to_string(label) + " has " +
                        std::to_string(have) + " labeled nodes, need " +
                        std::to_string(need)) {}
};

class DegenerateTraining : public ValidationError {
 public:
  explicit DegenerateTraining(int label)
      : ValidationError("class " + std::to_string(label) +
                        " has no training examples") {}
};

class SingularSystem : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class DegeneratePartition : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

// Carries the last iterate so callers can inspect how far the fixed point got.
class NoConvergence : public NumericalError {
 public:
  NoConvergence(int iterations, double residual, Eigen::VectorXd last)
      : NumericalError("no convergence after " + std::to_string(iterations) +
                       " iterations (residual " + std::to_string(residual) +
                       ")"),
        iterations_(iterations),
        residual_(residual),
        last_(std::move(last)) {}
  int iterations() const { return iterations_; }
  double residual() const { return residual_; }
  const Eigen::VectorXd& last_iterate() const { return last_; }

 private:
  int iterations_;
  double residual_;
  Eigen::VectorXd last_;
};

}  // namespace bopdist

#endif  // BOPDIST_ERRORS_HPP_
