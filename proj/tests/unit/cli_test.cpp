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

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "bopdist/graph.hpp"
#include "bopdist/matrix_io.hpp"
#include "bopdist/ssl.hpp"
#include "cli.hpp"
#include "graphs.hpp"

namespace bopdist::cli {
namespace {

namespace fs = std::filesystem;

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("bopdist_cli_" + std::to_string(std::random_device{}()));
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string write_file(const std::string& name, const std::string& body) {
    const fs::path p = dir_ / name;
    std::ofstream(p) << body;
    return p.string();
  }

  std::string graph_file(const std::string& name, const Graph& g) {
    std::ostringstream s;
    write_edge_list(s, g);
    return write_file(name, s.str());
  }

  static std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), {}};
  }

  // Parses then runs; stdout and stderr land in out_/err_.
  int invoke(std::vector<std::string> args) {
    out_.str("");
    err_.str("");
    args.insert(args.begin(), "bopdist");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    const ParseResult parsed = parse_args(static_cast<int>(argv.size()),
                                          argv.data(), out_, err_);
    if (!parsed.config) return parsed.exit_code;
    return run(*parsed.config, out_, err_);
  }

  fs::path dir_;
  std::ostringstream out_;
  std::ostringstream err_;
};

Matrix body_of(const std::string& text) {
  std::istringstream in(text);
  return read_tsv(in);
}

TEST_F(CliTest, DistOnTwoNodes) {
  const std::string in = write_file("two.txt", "0 1 1\n1 0 1\n");
  ASSERT_EQ(invoke({"dist", in, "--theta", "1", "--measure", "potential"}),
            kExitOk);
  const Matrix d = body_of(out_.str());
  ASSERT_EQ(d.rows(), 2);
  EXPECT_EQ(d(0, 0), 0.0);
  EXPECT_EQ(d(1, 1), 0.0);
  EXPECT_NEAR(d(0, 1), 1.0, 1e-12);
  EXPECT_NEAR(d(1, 0), 1.0, 1e-12);
}

TEST_F(CliTest, ProbsSelfTest) {
  std::mt19937_64 rng(41);
  const std::string in =
      graph_file("g.txt", testing::random_strongly_connected(9, 9, rng));
  for (const char* paths : {"hitting", "regular"}) {
    for (const char* zero : {"include", "exclude"}) {
      ASSERT_EQ(invoke({"probs", in, "--theta", "1", "--zero-paths", zero,
                        "--paths", paths, "--self-test"}),
                kExitOk)
          << err_.str();
      EXPECT_NEAR(body_of(out_.str()).sum(), 1.0, 1e-10);
      EXPECT_NE(err_.str().find("self-test passed"), std::string::npos);
    }
  }
}

TEST_F(CliTest, CheckPassesOnPath) {
  const std::string in = graph_file("path.txt", testing::path_graph());
  ASSERT_EQ(invoke({"check", in, "--theta", "1"}), kExitOk) << out_.str();
  const std::string table = out_.str();
  EXPECT_EQ(table.find("FAIL"), std::string::npos);
  EXPECT_NE(table.find("PASS\twalk enumeration"), std::string::npos);
  EXPECT_NE(table.find("PASS\trecurrence consistency"), std::string::npos);
}

TEST_F(CliTest, KernelAndEmbedHeaders) {
  const std::string in = graph_file("path.txt", testing::path_graph());
  ASSERT_EQ(invoke({"kernel", in, "--theta", "0.5", "--clip-negative"}),
            kExitOk);
  EXPECT_EQ(out_.str().rfind("# kernel measure=potential psd_clipped=1\n", 0),
            0u);
  ASSERT_EQ(invoke({"embed", in, "--theta", "0.5", "--dims", "2", "--measure",
                    "surprisal"}),
            kExitOk);
  EXPECT_EQ(out_.str().rfind("# dims=2 measure=surprisal\n", 0), 0u);
  EXPECT_EQ(invoke({"embed", in, "--theta", "0.5", "--dims", "4"}),
            kExitValidation);
}

TEST_F(CliTest, OutputFilesAreBitIdentical) {
  std::mt19937_64 rng(43);
  const std::string in =
      graph_file("g.txt", testing::random_strongly_connected(12, 20, rng));
  const std::string a = (dir_ / "a.tsv").string();
  const std::string b = (dir_ / "b.tsv").string();
  ASSERT_EQ(invoke({"dist", in, "--theta", "0.7", "--output", a}), kExitOk);
  ASSERT_EQ(invoke({"dist", in, "--theta", "0.7", "--output", b}), kExitOk);
  EXPECT_FALSE(slurp(a).empty());
  EXPECT_EQ(slurp(a), slurp(b));
}

TEST_F(CliTest, SslWritesReportAndFolds) {
  std::ostringstream edges;
  std::ostringstream labels;
  const std::vector<std::size_t> sizes{30, 30};
  const ssl::LabeledGraphDataset ds =
      ssl::stochastic_block_model(sizes, 0.4, 0.02, 3);
  write_edge_list(edges, ds.graph());
  for (std::size_t i = 0; i < ds.size(); ++i) {
    labels << i << ' ' << *ds.labels()[i] << '\n';
  }
  const std::string in = write_file("sbm.txt", edges.str());
  const std::string lab = write_file("sbm.labels", labels.str());
  const std::string report = (dir_ / "report.tsv").string();
  ASSERT_EQ(invoke({"ssl", in, "--labels", lab, "--labeling-rate", "0.2",
                    "--theta", "0.5", "--dims", "3", "--seed", "9",
                    "--output", report}),
            kExitOk)
      << err_.str();
  const std::string text = slurp(report);
  EXPECT_EQ(text.rfind("# measure\t", 0), 0u);
  EXPECT_NE(text.find("\npotential\t0.20000000000000001\t10\t12\t48\t"),
            std::string::npos)
      << text;
  const std::string folds = slurp(report + ".folds.tsv");
  EXPECT_EQ(std::count(folds.begin(), folds.end(), '\n'), 11);

  const std::string again = (dir_ / "again.tsv").string();
  ASSERT_EQ(invoke({"ssl", in, "--labels", lab, "--labeling-rate", "0.2",
                    "--theta", "0.5", "--dims", "3", "--seed", "9",
                    "--output", again}),
            kExitOk);
  EXPECT_EQ(slurp(again), text);
}

TEST_F(CliTest, ValidationErrorsExitOne) {
  const std::string good = write_file("two.txt", "0 1 1\n1 0 1\n");
  EXPECT_EQ(invoke({"dist", good, "--theta", "0"}), kExitValidation);
  EXPECT_EQ(invoke({"dist", good}), kExitValidation);
  EXPECT_EQ(invoke({"dist", good, "--theta", "1", "--measure", "euclid"}),
            kExitValidation);
  EXPECT_EQ(invoke({"frobnicate"}), kExitValidation);
  EXPECT_EQ(invoke({"dist", (dir_ / "missing").string(), "--theta", "1"}),
            kExitValidation);

  const std::string bad = write_file("bad.txt", "0 1 1\n1 0 x\n");
  EXPECT_EQ(invoke({"dist", bad, "--theta", "1"}), kExitValidation);
  EXPECT_NE(err_.str().find("bad.txt: line 2"), std::string::npos)
      << err_.str();

  const std::string dup = write_file("dup.txt", "0 1 1\n1 0 1\n0 1 2\n");
  EXPECT_EQ(invoke({"dist", dup, "--theta", "1"}), kExitValidation);
  EXPECT_NE(err_.str().find("line 3"), std::string::npos);
  EXPECT_NE(err_.str().find("(0, 1)"), std::string::npos);

  const std::string sink = write_file("sink.txt", "0 1 1\n");
  EXPECT_EQ(invoke({"dist", sink, "--theta", "1"}), kExitValidation);
  EXPECT_NE(err_.str().find("node 1"), std::string::npos) << err_.str();
}

TEST_F(CliTest, NumericalFailureExitsTwo) {
  const std::string zero = write_file("zero.txt", "0 1 1 0\n1 0 1 0\n");
  EXPECT_EQ(invoke({"dist", zero, "--theta", "1"}), kExitNumerical);
  EXPECT_NE(err_.str().find("numerical failure"), std::string::npos);
}

TEST_F(CliTest, HelpExitsZero) {
  EXPECT_EQ(invoke({"--help"}), kExitOk);
  EXPECT_NE(out_.str().find("dist"), std::string::npos);
}

}  // namespace
}  // namespace bopdist::cli
