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

#ifndef BOPDIST_SSL_HPP_
#define BOPDIST_SSL_HPP_

// Semi-supervised node classification with bag-of-paths kernels: spectral
// embedding of the kernel, a one-vs-rest linear classifier, and nested
// stratified cross-validation for (theta, regularization).

#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include "bopdist/distance.hpp"
#include "bopdist/graph.hpp"

namespace bopdist::ssl {

/// A graph plus optional per-node class ids in [0, classes).
class LabeledGraphDataset {
 public:
  /// Throws ValidationError when a label is out of range or the label vector
  /// has the wrong length, and InsufficientClassSize when some class has no
  /// labeled node.
  static LabeledGraphDataset create(Graph graph,
                                    std::vector<std::optional<int>> labels,
                                    int classes);

  const Graph& graph() const { return graph_; }
  const std::vector<std::optional<int>>& labels() const { return labels_; }
  int classes() const { return classes_; }
  std::size_t size() const { return graph_.size(); }

  /// Ids of labeled nodes, ascending.
  std::vector<std::size_t> labeled_nodes() const;

 private:
  LabeledGraphDataset(Graph g, std::vector<std::optional<int>> labels,
                      int classes)
      : graph_(std::move(g)), labels_(std::move(labels)), classes_(classes) {}

  Graph graph_;
  std::vector<std::optional<int>> labels_;
  int classes_;
};

struct Fold {
  std::vector<std::size_t> train;
  std::vector<std::size_t> test;
};

/// Partitions the labeled nodes into n_folds test sets, class by class, so
/// each fold holds its share of every class to within one node. Deterministic
/// in `seed` on every platform.
///
/// Throws InsufficientClassSize when a class has fewer than n_folds labeled
/// nodes, ValidationError when n_folds < 2.
std::vector<Fold> stratified_folds(const LabeledGraphDataset& ds, int n_folds,
                                   std::uint64_t seed);

/// One-vs-rest ridge classifier: for each class c, an affine score fitted by
/// least squares to +1/-1 targets with an L2 penalty on the weights (the
/// intercept is not penalized).
class LinearClassifier {
 public:
  LinearClassifier(Matrix weights, Vector bias)
      : weights_(std::move(weights)), bias_(std::move(bias)) {}

  int classes() const { return static_cast<int>(bias_.size()); }
  const Matrix& weights() const { return weights_; }  // features x classes
  const Vector& bias() const { return bias_; }

  Vector scores(const Eigen::Ref<const Vector>& row) const;

  /// argmax of the scores; ties go to the lowest class id.
  int predict(const Eigen::Ref<const Vector>& row) const;

 private:
  Matrix weights_;
  Vector bias_;
};

/// Fits on the rows `nodes` of `features` with the matching `labels`.
///
/// Throws DegenerateTraining when a class in [0, classes) has no example and
/// ValidationError when reg_strength <= 0 or fewer than 2 classes.
LinearClassifier train_linear_classifier(const Matrix& features,
                                         std::span<const std::size_t> nodes,
                                         std::span<const int> labels,
                                         int classes, double reg_strength);

/// Where evaluate() read a ground-truth label.
enum class LabelUse {
  kSubsetSelection,  // stratified draw of the labeled subset
  kOuterSplit,       // stratifying the outer folds
  kInnerCv,          // hyper-parameter search inside one outer fold
  kFinalTraining,    // refit on the outer-train nodes
  kScoring,          // accuracy on the unlabeled nodes
};

/// Called on every label read; `fold` is the outer fold or -1.
using LabelAudit = std::function<void(LabelUse use, int fold, std::size_t node)>;

struct HyperParams {
  double theta;
  double reg_strength;
};

struct EvalOptions {
  Measure measure = Measure::kPotential;
  double labeling_rate = 0.1;
  std::vector<double> theta_grid = {0.01, 0.1, 0.2, 0.3, 0.4, 0.5,
                                    0.6,  0.7, 0.8, 0.9, 1.0};
  // 1/C for C in {0.001, ..., 1000}.
  std::vector<double> reg_grid = {1000, 100, 10, 1, 0.1, 0.01, 0.001};
  int dims = 5;
  std::uint64_t seed = 0;
  int outer_folds = 10;
  int inner_folds = 5;
  LabelAudit audit;
};

struct EvalReport {
  double mean_accuracy = 0;
  double std_accuracy = 0;  // sample standard deviation over folds
  std::vector<double> fold_accuracies;
  std::vector<HyperParams> chosen_hyperparams;
  std::size_t labeled_count = 0;
  std::size_t scored_count = 0;
};

/// Nested cross-validation on a fixed, stratified labeled subset of size
/// labeling_rate * (labeled nodes), drawn from `seed`:
///
///  - the subset is split into outer folds; each outer fold trains on the
///    subset minus that fold,
///  - an inner stratified CV over the outer-train nodes picks (theta, reg)
///    by pooled accuracy, ties to the smallest theta then smallest reg,
///  - the refit classifier is scored on every labeled node outside the
///    subset.
///
/// Fold counts shrink to the subset size when it is smaller; a class may then
/// be missing from some folds. Inner folds whose training part lacks a class
/// are not scored.
EvalReport evaluate(const LabeledGraphDataset& ds, const EvalOptions& opts);

/// Two-or-more-block stochastic block model with unit affinities and costs;
/// node labels are block ids.
LabeledGraphDataset stochastic_block_model(std::span<const std::size_t> sizes,
                                           double p_in, double p_out,
                                           std::uint64_t seed);

/// Randomly permutes the labels among the labeled nodes.
LabeledGraphDataset shuffle_labels(const LabeledGraphDataset& ds,
                                   std::uint64_t seed);

/// Reads "node_id class_id" lines ('#' comments, blank lines skipped).
/// Throws ParseError on malformed lines, out-of-range ids or repeats.
std::vector<std::optional<int>> load_labels(std::istream& in, std::size_t n);

/// One header line plus one record:
/// measure, labeling_rate, folds, labeled, scored, mean_accuracy, std_accuracy.
void write_report(std::ostream& out, const EvalReport& r,
                  const EvalOptions& opts);

/// One line per fold: fold, accuracy, theta, reg_strength.
void write_fold_details(std::ostream& out, const EvalReport& r);

}  // namespace bopdist::ssl

#endif  // BOPDIST_SSL_HPP_
