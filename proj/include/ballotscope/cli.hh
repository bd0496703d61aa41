/*
 * Copyright (c) 2026, The ballotscope Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
*/

#ifndef BALLOTSCOPE_CLI_HH_
#define BALLOTSCOPE_CLI_HH_

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ballotscope/equivalence.hh"
#include "ballotscope/model.hh"
#include "ballotscope/scenario.hh"

namespace ballotscope {

/// Exit codes shared by every subcommand.
enum ExitCode {
  kExitEquivalent = 0,
  kExitAttack = 1,
  kExitInconclusive = 2,
  kExitError = 3,
};

struct RunConfig {
  std::string model = "star_base";
  std::string scenario = "dy1";
  std::optional<int> voters;  // default 2, or 3 under DY3
  std::vector<std::string> candidates{"a", "b"};
  std::string ext;
  int depth = kDefaultDepth;
  std::size_t max_states = 5'000'000;
  Property property = Property::kTraceEq;
  /// Explicit vote pair; all ordered pairs of distinct candidates if unset.
  std::optional<std::pair<std::string, std::string>> pair;
  std::string format = "text";
  std::string out;

  int voter_count() const;
  Bounds bounds() const;
};

/// The instantiated biprocess for one vote pair.
Model build_model(const RunConfig& cfg, const std::string& first,
                  const std::string& second);

/// Vote pairs checked for the configuration, in order.
std::vector<std::pair<std::string, std::string>> vote_pairs(const RunConfig& cfg);

struct CheckOutcome {
  /// Verdict reported for the whole run: the first ATTACK, else the first
  /// INCONCLUSIVE, else EQUIVALENT.
  Verdict verdict;
  std::vector<std::pair<std::string, Verdict>> per_pair;
  /// Diagnosis of the reported ATTACK, empty otherwise.
  std::string report;
};

CheckOutcome run_check(const RunConfig& cfg);

int exit_code(Result r);

/// Entry point of the command-line tool.
int run_cli(int argc, const char* const* argv, std::ostream& out,
            std::ostream& err);

}  // namespace ballotscope

#endif  // BALLOTSCOPE_CLI_HH_
