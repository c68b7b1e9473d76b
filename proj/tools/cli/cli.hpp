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

#ifndef BOPDIST_TOOLS_CLI_HPP_
#define BOPDIST_TOOLS_CLI_HPP_

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>

#include "bopdist/distance.hpp"

namespace bopdist::cli {

enum class Command { kProbs, kDist, kKernel, kEmbed, kCheck, kSsl };

struct CliConfig {
  Command command = Command::kDist;
  std::string input_path;
  std::optional<double> theta;  // for ssl, pins the theta grid to one value
  Measure measure = Measure::kPotential;
  bool include_zero_paths = true;
  bool hitting_paths = true;  // probs: hitting or regular path set
  bool self_test = false;     // probs: verify the entries sum to 1
  bool clip_negative = false;  // kernel: zero the negative spectrum
  std::string output_path;     // empty or "-" means stdout
  std::uint64_t seed = 0;
  int dims = 5;
  std::string labels_path;
  double labeling_rate = 0.1;
};

inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 1;
inline constexpr int kExitNumerical = 2;

struct ParseResult {
  std::optional<CliConfig> config;  // empty when the process should exit
  int exit_code = kExitOk;
};

/// Parses long-form flags. Usage errors go to `err` with exit code 1; --help
/// goes to `out` with exit code 0.
ParseResult parse_args(int argc, const char* const* argv, std::ostream& out,
                       std::ostream& err);

/// Runs one command. Results go to config.output_path (or `out`), tables and
/// diagnostics to `out`/`err`. Returns 0, 1 on invalid input, 2 on numerical
/// failure or a failed check.
int run(const CliConfig& config, std::ostream& out, std::ostream& err);

}  // namespace bopdist::cli

#endif  // BOPDIST_TOOLS_CLI_HPP_
