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

#ifndef BALLOTSCOPE_SCENARIO_HH_
#define BALLOTSCOPE_SCENARIO_HH_

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "ballotscope/deduction.hh"
#include "ballotscope/model.hh"

namespace ballotscope {

/// Intruder capability bits on one channel.
enum Capability : std::uint8_t {
  kObserve = 1,
  kIntercept = 2,
  kInject = 4,
};
using Caps = std::uint8_t;

inline constexpr Caps kFullCaps = kObserve | kIntercept | kInject;

std::string render_caps(Caps c);

/**
 * Grants capabilities on a set of channels. Selection is by visibility
 * ("public" or "all"), by endpoint, or by exact channel text; the set can
 * then be narrowed by a banned endpoint and by excluded message tags.
 */
struct CapabilityRule {
  std::string channels = "all";  // "all" | "public" | "endpoint:A" | "a.b.t"
  std::string without_endpoint;
  std::vector<std::string> exclude_tags;
  Caps grant = kObserve;
};

/**
 * Attacker configuration before it is applied to a model. Agent lists may
 * use "voters" for every voter instance; `honest` removes agents again.
 */
struct Scenario {
  std::string name;
  std::vector<CapabilityRule> rules;
  std::vector<std::string> corrupt;
  std::vector<std::string> honest;
  /// Extra initial knowledge, term text over the model's names.
  std::vector<std::string> knowledge;
  /// Grant every public name, public key and candidate (default on).
  bool default_knowledge = true;
};

/// Scenario applied to an instantiated model.
struct ResolvedScenario {
  std::string name;
  std::map<Channel, Caps> caps;
  std::set<std::string> corrupted;
  /// Recipe leaves: public names, known terms and corrupted agents' keys.
  std::vector<Term> leaves;
  /// Keys handed over by corruption, in leaf order.
  std::vector<Term> revealed;

  Caps caps_of(const Channel& ch) const {
    auto it = caps.find(ch);
    return it == caps.end() ? Caps{0} : it->second;
  }
  DeductionContext context() const;
};

/// DY1, DY2, DY3 and the alias "honest" (= DY1). Throws Error otherwise.
Scenario builtin_scenario(std::string_view name);

/// Names accepted by builtin_scenario, in display order.
const std::vector<std::string>& builtin_scenario_names();

/// Parses the key-value scenario format (a TOML subset).
Scenario parse_scenario(std::string_view text);
std::string render_scenario(const Scenario& s);

/// Agent identifiers in a model: voter ids and role names.
std::set<std::string> model_agents(const Model& m);

/// Applies a scenario to an instantiated model. Throws ModelError on
/// unknown agents or channels.
ResolvedScenario resolve(const Scenario& s, const Model& m);

}  // namespace ballotscope

#endif  // BALLOTSCOPE_SCENARIO_HH_
