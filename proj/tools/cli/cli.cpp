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

#include "cli.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "bopdist/bop_model.hpp"
#include "bopdist/errors.hpp"
#include "bopdist/graph.hpp"
#include "bopdist/kernel.hpp"
#include "bopdist/matrix_io.hpp"
#include "bopdist/oracle.hpp"
#include "bopdist/ssl.hpp"

namespace bopdist::cli {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// A validation error tagged with the file it came from.
class FileError : public ValidationError {
 public:
  FileError(const std::string& path, const std::string& why)
      : ValidationError(path + ": " + why) {}
};

Graph read_graph(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw FileError(path, "cannot open for reading");
  try {
    return load_edge_list(in);
  } catch (const ValidationError& e) {
    throw FileError(path, e.what());
  }
}

std::vector<std::optional<int>> read_labels(const std::string& path,
                                            std::size_t n) {
  std::ifstream in(path);
  if (!in) throw FileError(path, "cannot open for reading");
  try {
    return ssl::load_labels(in, n);
  } catch (const ValidationError& e) {
    throw FileError(path, e.what());
  }
}

bool to_stdout(const std::string& path) { return path.empty() || path == "-"; }

// Renders into memory first so a failed command leaves no partial file.
template <typename Writer>
void emit(const CliConfig& cfg, std::ostream& out, Writer&& write) {
  std::ostringstream buffer;
  write(buffer);
  if (to_stdout(cfg.output_path)) {
    out << buffer.str();
    return;
  }
  std::ofstream file(cfg.output_path, std::ios::binary | std::ios::trunc);
  if (!file) throw FileError(cfg.output_path, "cannot open for writing");
  file << buffer.str();
  if (!file.flush()) throw FileError(cfg.output_path, "write failed");
}

double require_theta(const CliConfig& cfg) {
  if (!cfg.theta) throw ValidationError("--theta is required");
  if (!(*cfg.theta > 0) || !std::isfinite(*cfg.theta)) {
    throw NonPositiveTheta(*cfg.theta);
  }
  return *cfg.theta;
}

int run_probs(const CliConfig& cfg, std::ostream& out, std::ostream& err) {
  const BopModel m = BopModel::build(read_graph(cfg.input_path),
                                     require_theta(cfg));
  const ProbabilityMatrix pm =
      cfg.hitting_paths ? hitting_probabilities(m, cfg.include_zero_paths)
                        : regular_probabilities(m, cfg.include_zero_paths);
  emit(cfg, out,
       [&](std::ostream& o) { write_probabilities(o, pm, m.theta()); });
  if (cfg.self_test) {
    const double total = pm.p.sum();
    if (std::abs(total - 1.0) > 1e-10) {
      err << "bopdist: self-test FAILED: entries sum to "
          << format_double(total) << "\n";
      return kExitNumerical;
    }
    err << "bopdist: self-test passed: entries sum to "
        << format_double(total) << "\n";
  }
  return kExitOk;
}

int run_dist(const CliConfig& cfg, std::ostream& out) {
  const DistanceMatrix d = compute_distance(read_graph(cfg.input_path),
                                            require_theta(cfg), cfg.measure);
  emit(cfg, out, [&](std::ostream& o) { write_distances(o, d); });
  return kExitOk;
}

int run_kernel(const CliConfig& cfg, std::ostream& out) {
  const KernelMatrix k = distance_to_kernel(
      compute_distance(read_graph(cfg.input_path), require_theta(cfg),
                       cfg.measure),
      cfg.clip_negative);
  emit(cfg, out, [&](std::ostream& o) { write_kernel(o, k); });
  return kExitOk;
}

int run_embed(const CliConfig& cfg, std::ostream& out) {
  const Embedding e = top_eigenvectors(
      distance_to_kernel(compute_distance(read_graph(cfg.input_path),
                                          require_theta(cfg), cfg.measure),
                         cfg.clip_negative),
      cfg.dims);
  emit(cfg, out, [&](std::ostream& o) { write_embedding(o, e); });
  return kExitOk;
}

// ---- check -----------------------------------------------------------------

enum class Verdict { kPass, kFail, kSkip };

struct CheckRow {
  std::string name;
  Verdict verdict;
  std::string detail;
};

std::string sci(double v) {
  std::ostringstream s;
  s.precision(3);
  s << std::scientific << v;
  return s.str();
}

CheckRow bounded(std::string name, double observed, double limit) {
  return {std::move(name), observed <= limit ? Verdict::kPass : Verdict::kFail,
          "max error " + sci(observed) + " (limit " + sci(limit) + ")"};
}

CheckRow check_normalization(const BopModel& m) {
  double worst = 0;
  for (bool hitting : {false, true}) {
    for (bool include : {true, false}) {
      try {
        const ProbabilityMatrix pm = hitting
                                         ? hitting_probabilities(m, include)
                                         : regular_probabilities(m, include);
        worst = std::max(worst, std::abs(pm.p.sum() - 1.0));
      } catch (const DegeneratePartition&) {
        return {"probability normalization", Verdict::kSkip,
                "no path of positive length"};
      }
    }
  }
  const double diag = (m.z_hitting().diagonal().array() - 1.0).abs().maxCoeff();
  if (diag > 1e-12) {
    return {"probability normalization", Verdict::kFail,
            "hitting diagonal off by " + sci(diag)};
  }
  return bounded("probability normalization", worst, 1e-10);
}

// Walk enumeration is exponential in depth; pick the deepest affordable one.
CheckRow check_enumeration(const BopModel& m) {
  const Graph& g = m.graph();
  const auto n = static_cast<double>(g.size());
  double branching = 1;
  for (Eigen::Index i = 0; i < g.affinities().rows(); ++i) {
    branching = std::max(
        branching,
        static_cast<double>((g.affinities().row(i).array() > 0).count()));
  }
  int t_max = 15;
  constexpr double kBudget = 4e6;
  if (branching > 1) {
    t_max = std::min(
        t_max, static_cast<int>(std::log(kBudget / (n * n)) /
                                std::log(branching)));
  }
  if (t_max < 3) {
    return {"walk enumeration", Verdict::kSkip, "graph too large to enumerate"};
  }
  const double sigma = m.w().rowwise().sum().maxCoeff();
  const double limit = n * std::pow(sigma, t_max + 1) / (1 - sigma);
  double worst = 0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    for (std::size_t j = 0; j < g.size(); ++j) {
      const auto a = static_cast<Eigen::Index>(i);
      const auto b = static_cast<Eigen::Index>(j);
      const double all =
          oracle::enumerate_path_mass(g, m.theta(), i, j, t_max, false).mass;
      const double hit =
          oracle::enumerate_path_mass(g, m.theta(), i, j, t_max, true).mass;
      worst = std::max(worst, std::abs(m.z()(a, b) - all));
      worst = std::max(worst, std::abs(m.z_hitting()(a, b) - hit));
    }
  }
  CheckRow row = bounded("walk enumeration", worst, limit);
  row.detail += " depth " + std::to_string(t_max);
  return row;
}

CheckRow check_hitting_identity(const BopModel& m) {
  double worst = 0;
  for (std::size_t j = 0; j < m.size(); ++j) {
    const Vector direct = hitting_column_direct(m, j);
    worst = std::max(
        worst, (direct - m.z_hitting().col(static_cast<Eigen::Index>(j)))
                   .cwiseAbs()
                   .maxCoeff());
  }
  return bounded("hitting identity", worst, 1e-9);
}

CheckRow check_recurrence(const BopModel& m) {
  const Matrix phi = potentials(m);
  double worst = 0;
  for (std::size_t k = 0; k < m.size(); ++k) {
    const Vector col = potential_to_target(m.graph(), m.theta(), k);
    for (Eigen::Index i = 0; i < col.size(); ++i) {
      const double dense = phi(i, static_cast<Eigen::Index>(k));
      if (std::isinf(dense) != std::isinf(col(i))) {
        return {"recurrence consistency", Verdict::kFail,
                "finite/infinite mismatch at (" + std::to_string(i) + ", " +
                    std::to_string(k) + ")"};
      }
      if (std::isfinite(dense)) {
        worst = std::max(worst, std::abs(dense - col(i)));
      }
    }
  }
  return bounded("recurrence consistency", worst, 1e-8);
}

// Largest violation of the metric axioms, or +inf for a hard failure.
double metric_violation(const Matrix& d) {
  const Eigen::Index n = d.rows();
  double worst = 0;
  for (Eigen::Index i = 0; i < n; ++i) {
    if (d(i, i) != 0) return kInf;
    for (Eigen::Index j = 0; j < n; ++j) {
      if (d(i, j) != d(j, i)) return kInf;
      if (i != j && !(d(i, j) > 0)) return kInf;
      for (Eigen::Index k = 0; k < n; ++k) {
        const double via = d(i, j) + d(j, k);
        if (std::isfinite(via)) worst = std::max(worst, d(i, k) - via);
      }
    }
  }
  return worst;
}

CheckRow check_metric(const BopModel& m, Measure measure) {
  const DistanceMatrix d = measure == Measure::kSurprisal
                               ? surprisal_distance(m)
                               : potential_distance(m);
  return bounded("metric axioms (" + std::string(to_string(measure)) + ")",
                 metric_violation(d.d), 1e-9);
}

// Over hitting paths the potential is a soft minimum of path costs, so it
// lies between the cheapest path and the expected first-passage cost.
CheckRow check_cost_bounds(const BopModel& m) {
  const Matrix sp = oracle::shortest_path_matrix(m.graph());
  const Matrix cc = oracle::commute_cost_matrix(m.graph());
  const Matrix d = potential_distance(m).d;
  double worst = 0;
  for (Eigen::Index i = 0; i < d.rows(); ++i) {
    for (Eigen::Index j = 0; j < d.cols(); ++j) {
      if (!std::isfinite(d(i, j))) continue;
      const double lower = (sp(i, j) + sp(j, i)) / 2;
      const double upper = cc(i, j) / 2;
      const double tol = 1e-9 * (1 + std::abs(d(i, j)));
      worst = std::max(worst, lower - d(i, j) - tol);
      if (std::isfinite(upper)) worst = std::max(worst, d(i, j) - upper - tol);
    }
  }
  return {"shortest-path and commute bounds",
          worst <= 0 ? Verdict::kPass : Verdict::kFail,
          "largest violation " + sci(std::max(worst, 0.0))};
}

CheckRow check_kernel(const BopModel& m) {
  const DistanceMatrix d = potential_distance(m);
  if (!d.d.allFinite()) {
    return {"kernel centering", Verdict::kSkip, "distances not all finite"};
  }
  double worst = 0;
  for (bool clip : {false, true}) {
    const KernelMatrix k = distance_to_kernel(d, clip);
    worst = std::max(worst, k.k.rowwise().sum().cwiseAbs().maxCoeff());
    worst = std::max(worst, k.k.colwise().sum().cwiseAbs().maxCoeff());
  }
  return bounded("kernel centering", worst, 1e-8);
}

int run_check(const CliConfig& cfg, std::ostream& out) {
  const BopModel m =
      BopModel::build(read_graph(cfg.input_path), require_theta(cfg));
  std::vector<CheckRow> rows;
  rows.push_back(check_normalization(m));
  rows.push_back(check_enumeration(m));
  rows.push_back(check_hitting_identity(m));
  rows.push_back(check_recurrence(m));
  rows.push_back(check_metric(m, Measure::kSurprisal));
  rows.push_back(check_metric(m, Measure::kPotential));
  rows.push_back(check_cost_bounds(m));
  rows.push_back(check_kernel(m));

  bool ok = true;
  std::ostringstream table;
  for (const CheckRow& r : rows) {
    const char* tag = r.verdict == Verdict::kPass   ? "PASS"
                      : r.verdict == Verdict::kFail ? "FAIL"
                                                    : "SKIP";
    ok = ok && r.verdict != Verdict::kFail;
    table << tag << '\t' << r.name << '\t' << r.detail << '\n';
  }
  emit(cfg, out, [&](std::ostream& o) { o << table.str(); });
  return ok ? kExitOk : kExitNumerical;
}

int run_ssl(const CliConfig& cfg, std::ostream& out) {
  if (cfg.labels_path.empty()) throw ValidationError("--labels is required");
  Graph g = read_graph(cfg.input_path);
  auto labels = read_labels(cfg.labels_path, g.size());
  int classes = 0;
  for (const auto& l : labels) {
    if (l) classes = std::max(classes, *l + 1);
  }
  const ssl::LabeledGraphDataset ds =
      ssl::LabeledGraphDataset::create(std::move(g), std::move(labels), classes);
  ssl::EvalOptions opts;
  opts.measure = cfg.measure;
  opts.labeling_rate = cfg.labeling_rate;
  opts.dims = cfg.dims;
  opts.seed = cfg.seed;
  if (cfg.theta) opts.theta_grid = {require_theta(cfg)};
  const ssl::EvalReport report = ssl::evaluate(ds, opts);
  emit(cfg, out, [&](std::ostream& o) { ssl::write_report(o, report, opts); });
  if (!to_stdout(cfg.output_path)) {
    CliConfig folds = cfg;
    folds.output_path = cfg.output_path + ".folds.tsv";
    emit(folds, out,
         [&](std::ostream& o) { ssl::write_fold_details(o, report); });
  }
  return kExitOk;
}

}  // namespace

ParseResult parse_args(int argc, const char* const* argv, std::ostream& out,
                       std::ostream& err) {
  CLI::App app{"Bag-of-paths node distances on weighted directed graphs",
               "bopdist"};
  app.require_subcommand(1);

  CliConfig cfg;
  std::string measure = "potential";
  std::string zero_paths = "include";
  std::string paths = "hitting";

  auto input = [&](CLI::App* sub) {
    sub->add_option("input", cfg.input_path, "Edge list: i j a [c] per line")
        ->required();
    sub->add_option("--output", cfg.output_path, "Output file (default stdout)");
  };
  auto theta = [&](CLI::App* sub, bool required) {
    auto* opt = sub->add_option("--theta", cfg.theta,
                                "Inverse temperature, > 0");
    if (required) opt->required();
  };
  auto measure_opt = [&](CLI::App* sub) {
    sub->add_option("--measure", measure, "surprisal or potential")
        ->check(CLI::IsMember({"surprisal", "potential"}))
        ->capture_default_str();
  };

  auto* probs = app.add_subcommand("probs", "Bag-of-paths probability matrix");
  input(probs);
  theta(probs, true);
  probs->add_option("--zero-paths", zero_paths, "include or exclude")
      ->check(CLI::IsMember({"include", "exclude"}))
      ->capture_default_str();
  probs->add_option("--paths", paths, "hitting or regular")
      ->check(CLI::IsMember({"hitting", "regular"}))
      ->capture_default_str();
  probs->add_flag("--self-test", cfg.self_test,
                  "Fail unless the entries sum to 1 within 1e-10");

  auto* dist = app.add_subcommand("dist", "Distance matrix");
  input(dist);
  theta(dist, true);
  measure_opt(dist);

  auto* kernel = app.add_subcommand("kernel", "Double-centered kernel");
  input(kernel);
  theta(kernel, true);
  measure_opt(kernel);
  kernel->add_flag("--clip-negative", cfg.clip_negative,
                   "Zero the negative eigenvalues");

  auto* embed = app.add_subcommand("embed", "Leading kernel eigenvectors");
  input(embed);
  theta(embed, true);
  measure_opt(embed);
  embed->add_option("--dims", cfg.dims, "Number of eigenvectors")
      ->capture_default_str();
  embed->add_flag("--clip-negative", cfg.clip_negative,
                  "Zero the negative eigenvalues first");

  auto* check = app.add_subcommand("check", "Oracle comparisons");
  input(check);
  theta(check, true);

  auto* ssl_cmd = app.add_subcommand("ssl", "Nested cross-validated accuracy");
  input(ssl_cmd);
  theta(ssl_cmd, false);
  measure_opt(ssl_cmd);
  ssl_cmd->add_option("--labels", cfg.labels_path, "node_id class_id lines")
      ->required();
  ssl_cmd->add_option("--labeling-rate", cfg.labeling_rate,
                      "Fraction of labeled nodes used for training")
      ->capture_default_str();
  ssl_cmd->add_option("--dims", cfg.dims, "Embedding dimension")
      ->capture_default_str();
  ssl_cmd->add_option("--seed", cfg.seed, "Seed for subset and folds")
      ->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return {std::nullopt, code == 0 ? kExitOk : kExitValidation};
  }

  const std::pair<CLI::App*, Command> table[] = {
      {probs, Command::kProbs},   {dist, Command::kDist},
      {kernel, Command::kKernel}, {embed, Command::kEmbed},
      {check, Command::kCheck},   {ssl_cmd, Command::kSsl}};
  for (const auto& [sub, command] : table) {
    if (sub->parsed()) cfg.command = command;
  }
  cfg.measure = *parse_measure(measure);
  cfg.include_zero_paths = zero_paths == "include";
  cfg.hitting_paths = paths == "hitting";
  return {cfg, kExitOk};
}

int run(const CliConfig& config, std::ostream& out, std::ostream& err) {
  try {
    switch (config.command) {
      case Command::kProbs:
        return run_probs(config, out, err);
      case Command::kDist:
        return run_dist(config, out);
      case Command::kKernel:
        return run_kernel(config, out);
      case Command::kEmbed:
        return run_embed(config, out);
      case Command::kCheck:
        return run_check(config, out);
      case Command::kSsl:
        return run_ssl(config, out);
    }
  } catch (const ValidationError& e) {
    err << "bopdist: error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const NumericalError& e) {
    err << "bopdist: numerical failure: " << e.what() << '\n';
    return kExitNumerical;
  }
  return kExitValidation;
}

}  // namespace bopdist::cli
