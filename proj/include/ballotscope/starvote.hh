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

#ifndef BALLOTSCOPE_STARVOTE_HH_
#define BALLOTSCOPE_STARVOTE_HH_

#include <string>
#include <string_view>
#include <vector>

#include "ballotscope/model.hh"
#include "ballotscope/scenario.hh"

namespace ballotscope {

struct StarExtensions {
  bool counting = false;
  bool pins = false;
  bool hashchain = false;
};

/// Parses "counting,pins" style lists; throws Error on unknown names.
StarExtensions parse_extensions(std::string_view list);

struct StarParams {
  int voters = 2;
  std::vector<std::string> candidates{"a", "b"};
  StarExtensions ext;
  /// Votes compared for the two swapped voters; default the first two
  /// candidates. Voter 1 votes choice[first,second], voter 2 the reverse,
  /// everyone else votes the first candidate.
  std::string first;
  std::string second;
};

/// Shipped model for the extension set (templates, not instantiated).
Model star_template(const StarExtensions& ext);

/// Instantiated biprocess for the parameters.
Model build_star_model(const StarParams& p);
Model build_hashchain_model(const StarParams& p);

/**
 * Scenario for corrupted agents: "terminal", "ballotbox", "controller",
 * "board" or a voter id such as "v3". The agents' keys are revealed and
 * their channels fully controlled, on top of DY1 observation.
 */
Scenario corruption_scenario(const std::vector<std::string>& agents);

/// Names of the shipped models and scenarios.
std::vector<std::string> shipped_model_names();
std::vector<std::string> shipped_scenario_names();
std::string shipped_model_source(std::string_view name);
std::string shipped_scenario_source(std::string_view name);

/// A shipped model by name ("star_base") or a path to a .spv file.
Model load_model(const std::string& name_or_path);

/// A built-in (dy1, dy2, dy3, honest), a shipped scenario file name
/// (corrupt_tb), "corrupt:terminal,ballotbox" or a path to a file.
Scenario load_scenario(const std::string& name_or_path);

}  // namespace ballotscope

#endif  // BALLOTSCOPE_STARVOTE_HH_
