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

#ifndef BALLOTSCOPE_MODEL_HH_
#define BALLOTSCOPE_MODEL_HH_

#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "ballotscope/process.hh"
#include "ballotscope/term.hh"

namespace ballotscope {

enum class Visibility { kPublic, kPrivate };

struct ChannelDecl {
  Channel channel;
  Visibility visibility = Visibility::kPrivate;
  SourcePos pos;
};

enum class RoleKind {
  kVoter,     // one instance per voter, parameterised by the vote
  kSession,   // one instance per voter
  kSingle,    // exactly one instance
  kInstance,  // concrete instance produced by instantiate()
};

struct Role {
  std::string name;
  RoleKind kind = RoleKind::kSingle;
  std::string param;  // vote parameter of a voter template
  int instance = 0;   // voter index for kInstance, 0 for singletons
  Proc body;
  SourcePos pos;
};

/**
 * A protocol model: declarations, a channel table and role processes whose
 * terms may carry choice. Templates (voter/session roles) refer to the
 * current voter through the agent placeholder `V` in channel triples, and
 * to per-voter channels through a trailing `%` on a component.
 */
struct Model {
  std::string name;
  std::vector<std::string> free_names;
  std::vector<std::string> private_names;
  std::map<std::string, std::vector<std::string>> keys;
  std::vector<ChannelDecl> channels;
  std::vector<Term> known;
  std::vector<Role> roles;
  int min_voters = 2;
  int max_voters = 4;

  bool instantiated = false;
  int voters = 0;
  std::vector<std::string> candidates;

  const ChannelDecl* find_channel(const Channel& ch) const;
  bool has_templates() const;
  bool is_biprocess() const;
  /// Distinct barrier phases in increasing order.
  std::vector<int> barrier_phases() const;
};

Model parse_model(std::string_view source, std::string name = {});

/// Canonical source text; parse_model(render_model(m)) equals m.
std::string render_model(const Model& m);

struct Diagnostic {
  SourcePos pos;
  std::string message;
  std::string str() const;
};

/// Well-formedness diagnostics ordered by source position; empty means ok.
std::vector<Diagnostic> check_wellformed(const Model& m);

inline constexpr int kMinVoters = 2;
inline constexpr int kMaxVoters = 4;

struct InstanceParams {
  int voters = 2;
  std::vector<std::string> candidates{"a", "b"};
  /// Per-voter votes; defaults to v1 = choice[c1,c2], v2 = choice[c2,c1]
  /// and the first candidate for every further voter.
  std::vector<Term> votes;
};

/// Default votes for the swap comparison of two candidates.
std::vector<Term> swap_votes(int voters, const std::string& first,
                             const std::string& second);

/// Expands templates into concrete per-voter instances with deterministic
/// fresh names (`bid#1`, `bid#2`, ...). Throws BoundError on unsupported
/// counts.
Model instantiate(const Model& m, const InstanceParams& params);

/// Gives every restricted name a unique `name#k` spelling. Applied by
/// instantiate(); exposed for template-free models.
Model freshen(const Model& m);

Model project(const Model& m, Side side);

bool equal(const Model& a, const Model& b);

}  // namespace ballotscope

#endif  // BALLOTSCOPE_MODEL_HH_
