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

#include "bopdist/ssl.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <istream>
#include <ostream>
#include <random>
#include <sstream>
#include <string>

#include <Eigen/Cholesky>

#include "bopdist/errors.hpp"
#include "bopdist/kernel.hpp"
#include "bopdist/matrix_io.hpp"

namespace bopdist::ssl {

namespace {

// std::shuffle and the std distributions are not specified bit-for-bit, so
// draws are built directly on mt19937_64, whose output sequence is.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  // Uniform in [0, bound), by rejection.
  std::uint64_t below(std::uint64_t bound) {
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
    std::uint64_t x = 0;
    do {
      x = engine_();
    } while (x >= limit);
    return x % bound;
  }

  double unit() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      std::swap(v[i - 1], v[below(i)]);
    }
  }

 private:
  std::mt19937_64 engine_;
};

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
  // splitmix64 finalizer over (seed, stream)
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Splits `nodes` into `folds` groups: each class is shuffled and dealt
// round-robin, the deal continuing across classes, so every group gets its
// share of each class to within one node.
std::vector<std::vector<std::size_t>> deal_stratified(
    const std::vector<std::size_t>& nodes, const std::vector<int>& labels,
    int classes, std::size_t folds, Rng& rng) {
  std::vector<std::vector<std::size_t>> by_class(
      static_cast<std::size_t>(classes));
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    by_class[static_cast<std::size_t>(labels[i])].push_back(nodes[i]);
  }
  std::vector<std::vector<std::size_t>> out(folds);
  std::size_t slot = 0;
  for (auto& members : by_class) {
    rng.shuffle(members);
    for (std::size_t node : members) {
      out[slot].push_back(node);
      slot = (slot + 1) % folds;
    }
  }
  for (auto& f : out) std::sort(f.begin(), f.end());
  return out;
}

std::vector<std::size_t> complement(const std::vector<std::size_t>& all,
                                    const std::vector<std::size_t>& removed) {
  std::vector<std::size_t> out;
  std::set_difference(all.begin(), all.end(), removed.begin(), removed.end(),
                      std::back_inserter(out));
  return out;
}

}  // namespace

LabeledGraphDataset LabeledGraphDataset::create(
    Graph graph, std::vector<std::optional<int>> labels, int classes) {
  if (labels.size() != graph.size()) {
    throw ValidationError("label vector has " + std::to_string(labels.size()) +
                          " entries for " + std::to_string(graph.size()) +
                          " nodes");
  }
  if (classes < 1) throw ValidationError("need at least one class");
  std::vector<std::size_t> counts(static_cast<std::size_t>(classes), 0);
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (!labels[i]) continue;
    const int c = *labels[i];
    if (c < 0 || c >= classes) {
      throw ValidationError("node " + std::to_string(i) + " has label " +
                            std::to_string(c) + " outside [0, " +
                            std::to_string(classes) + ")");
    }
    ++counts[static_cast<std::size_t>(c)];
  }
  for (int c = 0; c < classes; ++c) {
    if (counts[static_cast<std::size_t>(c)] == 0) {
      throw InsufficientClassSize(c, 0, 1);
    }
  }
  return LabeledGraphDataset(std::move(graph), std::move(labels), classes);
}

std::vector<std::size_t> LabeledGraphDataset::labeled_nodes() const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < labels_.size(); ++i) {
    if (labels_[i]) out.push_back(i);
  }
  return out;
}

std::vector<Fold> stratified_folds(const LabeledGraphDataset& ds, int n_folds,
                                   std::uint64_t seed) {
  if (n_folds < 2) {
    throw ValidationError("need at least 2 folds, got " +
                          std::to_string(n_folds));
  }
  const std::vector<std::size_t> nodes = ds.labeled_nodes();
  std::vector<int> labels;
  std::vector<std::size_t> counts(static_cast<std::size_t>(ds.classes()), 0);
  for (std::size_t node : nodes) {
    labels.push_back(*ds.labels()[node]);
    ++counts[static_cast<std::size_t>(labels.back())];
  }
  for (int c = 0; c < ds.classes(); ++c) {
    const std::size_t have = counts[static_cast<std::size_t>(c)];
    if (have < static_cast<std::size_t>(n_folds)) {
      throw InsufficientClassSize(c, have, static_cast<std::size_t>(n_folds));
    }
  }
  Rng rng(seed);
  const auto tests = deal_stratified(nodes, labels, ds.classes(),
                                     static_cast<std::size_t>(n_folds), rng);
  std::vector<Fold> folds;
  folds.reserve(tests.size());
  for (const auto& test : tests) {
    folds.push_back({complement(nodes, test), test});
  }
  return folds;
}

Vector LinearClassifier::scores(const Eigen::Ref<const Vector>& row) const {
  return weights_.transpose() * row + bias_;
}

int LinearClassifier::predict(const Eigen::Ref<const Vector>& row) const {
  const Vector s = scores(row);
  Eigen::Index best = 0;
  for (Eigen::Index c = 1; c < s.size(); ++c) {
    if (s(c) > s(best)) best = c;
  }
  return static_cast<int>(best);
}

LinearClassifier train_linear_classifier(const Matrix& features,
                                         std::span<const std::size_t> nodes,
                                         std::span<const int> labels,
                                         int classes, double reg_strength) {
  if (!(reg_strength > 0)) {
    throw ValidationError("regularization strength must be positive");
  }
  if (classes < 2) throw ValidationError("need at least 2 classes");
  if (nodes.size() != labels.size()) {
    throw ValidationError("nodes and labels differ in length");
  }
  std::vector<std::size_t> counts(static_cast<std::size_t>(classes), 0);
  for (int y : labels) {
    if (y < 0 || y >= classes) {
      throw ValidationError("training label " + std::to_string(y) +
                            " out of range");
    }
    ++counts[static_cast<std::size_t>(y)];
  }
  for (int c = 0; c < classes; ++c) {
    if (counts[static_cast<std::size_t>(c)] == 0) throw DegenerateTraining(c);
  }

  const auto m = static_cast<Eigen::Index>(nodes.size());
  const Eigen::Index k = features.cols();
  Matrix x(m, k);
  for (Eigen::Index r = 0; r < m; ++r) {
    x.row(r) = features.row(static_cast<Eigen::Index>(
        nodes[static_cast<std::size_t>(r)]));
  }
  Matrix targets = Matrix::Constant(m, classes, -1.0);
  for (Eigen::Index r = 0; r < m; ++r) {
    targets(r, labels[static_cast<std::size_t>(r)]) = 1.0;
  }

  // Centering both sides leaves the intercept out of the penalty.
  const Vector x_mean = x.colwise().mean();
  const Vector t_mean = targets.colwise().mean();
  const Matrix xc = x.rowwise() - x_mean.transpose();
  const Matrix tc = targets.rowwise() - t_mean.transpose();
  const Matrix gram =
      xc.transpose() * xc + reg_strength * Matrix::Identity(k, k);
  Matrix weights = gram.ldlt().solve(xc.transpose() * tc);
  Vector bias = t_mean - weights.transpose() * x_mean;
  return LinearClassifier(std::move(weights), std::move(bias));
}

EvalReport evaluate(const LabeledGraphDataset& ds, const EvalOptions& opts) {
  if (!(opts.labeling_rate > 0 && opts.labeling_rate < 1)) {
    throw ValidationError("labeling rate must be in (0, 1)");
  }
  if (opts.theta_grid.empty() || opts.reg_grid.empty()) {
    throw ValidationError("hyper-parameter grids must be non-empty");
  }
  if (opts.outer_folds < 2 || opts.inner_folds < 2) {
    throw ValidationError("need at least 2 outer and 2 inner folds");
  }
  for (double r : opts.reg_grid) {
    if (!(r > 0)) throw ValidationError("regularization values must be > 0");
  }
  std::vector<double> thetas = opts.theta_grid;
  std::vector<double> regs = opts.reg_grid;
  std::sort(thetas.begin(), thetas.end());
  thetas.erase(std::unique(thetas.begin(), thetas.end()), thetas.end());
  std::sort(regs.begin(), regs.end());
  regs.erase(std::unique(regs.begin(), regs.end()), regs.end());

  const int classes = ds.classes();
  auto label = [&](LabelUse use, int fold, std::size_t node) {
    if (opts.audit) opts.audit(use, fold, node);
    return *ds.labels()[node];
  };
  auto labels_of = [&](const std::vector<std::size_t>& nodes, LabelUse use,
                       int fold) {
    std::vector<int> out;
    out.reserve(nodes.size());
    for (std::size_t node : nodes) out.push_back(label(use, fold, node));
    return out;
  };

  // Fixed labeled subset, stratified; everything else labeled is scored.
  const std::vector<std::size_t> all = ds.labeled_nodes();
  std::vector<std::vector<std::size_t>> by_class(
      static_cast<std::size_t>(classes));
  for (std::size_t node : all) {
    by_class[static_cast<std::size_t>(
                 label(LabelUse::kSubsetSelection, -1, node))]
        .push_back(node);
  }
  Rng subset_rng(derive_seed(opts.seed, 0));
  std::vector<std::size_t> subset;
  for (int c = 0; c < classes; ++c) {
    auto& members = by_class[static_cast<std::size_t>(c)];
    const auto quota = static_cast<std::size_t>(std::floor(
        opts.labeling_rate * static_cast<double>(members.size()) + 1e-9));
    if (quota < 2) throw InsufficientClassSize(c, quota, 2);
    subset_rng.shuffle(members);
    subset.insert(subset.end(), members.begin(),
                  members.begin() + static_cast<std::ptrdiff_t>(quota));
  }
  std::sort(subset.begin(), subset.end());
  const std::vector<std::size_t> scored = complement(all, subset);
  if (scored.empty()) {
    throw ValidationError("labeling rate leaves no node to score");
  }

  // Embeddings depend on theta only; no label is involved.
  std::vector<Matrix> embeddings;
  embeddings.reserve(thetas.size());
  for (double theta : thetas) {
    const DistanceMatrix d = compute_distance(ds.graph(), theta, opts.measure);
    embeddings.push_back(
        top_eigenvectors(distance_to_kernel(d, false), opts.dims).vectors);
  }

  Rng outer_rng(derive_seed(opts.seed, 1));
  const std::size_t outer_count =
      std::min(static_cast<std::size_t>(opts.outer_folds), subset.size());
  const auto outer = deal_stratified(
      subset, labels_of(subset, LabelUse::kOuterSplit, -1), classes,
      outer_count, outer_rng);

  EvalReport report;
  report.labeled_count = subset.size();
  report.scored_count = scored.size();
  for (std::size_t f = 0; f < outer.size(); ++f) {
    const int fold = static_cast<int>(f);
    const std::vector<std::size_t> train = complement(subset, outer[f]);

    const std::vector<int> train_labels =
        labels_of(train, LabelUse::kInnerCv, fold);
    Rng inner_rng(derive_seed(opts.seed, 2 + f));
    const std::size_t inner_count =
        std::min(static_cast<std::size_t>(opts.inner_folds), train.size());
    const auto inner =
        deal_stratified(train, train_labels, classes, inner_count, inner_rng);

    auto label_in_train = [&](std::size_t node) {
      const auto it = std::lower_bound(train.begin(), train.end(), node);
      return train_labels[static_cast<std::size_t>(it - train.begin())];
    };

    std::vector<std::vector<std::size_t>> correct(
        thetas.size(), std::vector<std::size_t>(regs.size(), 0));
    for (const auto& validation : inner) {
      const std::vector<std::size_t> fit = complement(train, validation);
      std::vector<int> fit_labels;
      std::vector<bool> present(static_cast<std::size_t>(classes), false);
      for (std::size_t node : fit) {
        fit_labels.push_back(label_in_train(node));
        present[static_cast<std::size_t>(fit_labels.back())] = true;
      }
      if (std::find(present.begin(), present.end(), false) != present.end()) {
        continue;  // a class is missing from this split
      }
      for (std::size_t t = 0; t < thetas.size(); ++t) {
        for (std::size_t r = 0; r < regs.size(); ++r) {
          const LinearClassifier clf = train_linear_classifier(
              embeddings[t], fit, fit_labels, classes, regs[r]);
          for (std::size_t node : validation) {
            if (clf.predict(embeddings[t].row(
                    static_cast<Eigen::Index>(node)).transpose()) ==
                label_in_train(node)) {
              ++correct[t][r];
            }
          }
        }
      }
    }

    std::size_t best_t = 0;
    std::size_t best_r = 0;
    for (std::size_t t = 0; t < thetas.size(); ++t) {
      for (std::size_t r = 0; r < regs.size(); ++r) {
        if (correct[t][r] > correct[best_t][best_r]) {
          best_t = t;
          best_r = r;
        }
      }
    }

    const LinearClassifier clf = train_linear_classifier(
        embeddings[best_t], train,
        labels_of(train, LabelUse::kFinalTraining, fold), classes,
        regs[best_r]);
    std::size_t hits = 0;
    for (std::size_t node : scored) {
      if (clf.predict(embeddings[best_t].row(
              static_cast<Eigen::Index>(node)).transpose()) ==
          label(LabelUse::kScoring, fold, node)) {
        ++hits;
      }
    }
    report.fold_accuracies.push_back(static_cast<double>(hits) /
                                     static_cast<double>(scored.size()));
    report.chosen_hyperparams.push_back({thetas[best_t], regs[best_r]});
  }

  const auto folds = static_cast<double>(report.fold_accuracies.size());
  double sum = 0;
  for (double a : report.fold_accuracies) sum += a;
  report.mean_accuracy = sum / folds;
  double sq = 0;
  for (double a : report.fold_accuracies) {
    sq += (a - report.mean_accuracy) * (a - report.mean_accuracy);
  }
  report.std_accuracy = folds > 1 ? std::sqrt(sq / (folds - 1)) : 0.0;
  return report;
}

LabeledGraphDataset stochastic_block_model(std::span<const std::size_t> sizes,
                                           double p_in, double p_out,
                                           std::uint64_t seed) {
  if (sizes.empty()) throw ValidationError("need at least one block");
  if (!(p_in >= 0 && p_in <= 1 && p_out >= 0 && p_out <= 1)) {
    throw ValidationError("block probabilities must lie in [0, 1]");
  }
  std::vector<int> block;
  for (std::size_t b = 0; b < sizes.size(); ++b) {
    block.insert(block.end(), sizes[b], static_cast<int>(b));
  }
  const auto n = static_cast<Eigen::Index>(block.size());
  Matrix a = Matrix::Zero(n, n);
  Rng rng(seed);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) {
      const bool same = block[static_cast<std::size_t>(i)] ==
                        block[static_cast<std::size_t>(j)];
      if (rng.unit() < (same ? p_in : p_out)) a(i, j) = a(j, i) = 1.0;
    }
  }
  std::vector<std::optional<int>> labels(block.begin(), block.end());
  return LabeledGraphDataset::create(Graph::build(std::move(a)),
                                     std::move(labels),
                                     static_cast<int>(sizes.size()));
}

LabeledGraphDataset shuffle_labels(const LabeledGraphDataset& ds,
                                   std::uint64_t seed) {
  const std::vector<std::size_t> nodes = ds.labeled_nodes();
  std::vector<int> values;
  for (std::size_t node : nodes) values.push_back(*ds.labels()[node]);
  Rng rng(seed);
  rng.shuffle(values);
  std::vector<std::optional<int>> labels(ds.size());
  for (std::size_t i = 0; i < nodes.size(); ++i) labels[nodes[i]] = values[i];
  return LabeledGraphDataset::create(ds.graph(), std::move(labels),
                                     ds.classes());
}

std::vector<std::optional<int>> load_labels(std::istream& in, std::size_t n) {
  std::vector<std::optional<int>> labels(n);
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    if (auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
    std::istringstream fields(raw);
    std::vector<std::string> tok;
    for (std::string t; fields >> t;) tok.push_back(std::move(t));
    if (tok.empty()) continue;
    if (tok.size() != 2) {
      throw ParseError(line_no, "expected \"node_id class_id\"");
    }
    std::size_t node = 0;
    int cls = 0;
    auto parse = [](const std::string& s, auto& out) {
      auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
      return ec == std::errc() && ptr == s.data() + s.size();
    };
    if (!parse(tok[0], node) || !parse(tok[1], cls) || cls < 0) {
      throw ParseError(line_no, "ids must be non-negative integers");
    }
    if (node >= n) {
      throw ParseError(line_no, "node " + tok[0] + " not in graph of " +
                                    std::to_string(n) + " nodes");
    }
    if (labels[node]) {
      throw ParseError(line_no, "node " + tok[0] + " labeled twice");
    }
    labels[node] = cls;
  }
  return labels;
}

void write_report(std::ostream& out, const EvalReport& r,
                  const EvalOptions& opts) {
  out << "# measure\tlabeling_rate\tfolds\tlabeled\tscored\tmean_accuracy\t"
         "std_accuracy\n";
  out << to_string(opts.measure) << '\t' << format_double(opts.labeling_rate)
      << '\t' << r.fold_accuracies.size() << '\t' << r.labeled_count << '\t'
      << r.scored_count << '\t' << format_double(r.mean_accuracy) << '\t'
      << format_double(r.std_accuracy) << '\n';
}

void write_fold_details(std::ostream& out, const EvalReport& r) {
  out << "# fold\taccuracy\ttheta\treg_strength\n";
  for (std::size_t f = 0; f < r.fold_accuracies.size(); ++f) {
    out << f << '\t' << format_double(r.fold_accuracies[f]) << '\t'
        << format_double(r.chosen_hyperparams[f].theta) << '\t'
        << format_double(r.chosen_hyperparams[f].reg_strength) << '\n';
  }
}

}  // namespace bopdist::ssl
