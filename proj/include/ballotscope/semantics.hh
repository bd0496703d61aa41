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

#ifndef BALLOTSCOPE_SEMANTICS_HH_
#define BALLOTSCOPE_SEMANTICS_HH_

#include <algorithm>
#include <cstddef>
#include <memory>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "ballotscope/deduction.hh"
#include "ballotscope/model.hh"
#include "ballotscope/process.hh"
#include "ballotscope/scenario.hh"

namespace ballotscope {

/// Trace label. Rendering: `out(ch,wN)`, `in(ch,R)`, `event(l)`,
/// `phase(k)`, `tau`.
struct Action {
  enum class Kind { kTau, kOut, kIn, kEvent, kPhase };
  Kind kind = Kind::kTau;
  Channel channel;
  Term term;  // handle for outputs, recipe for inputs
  std::string label;
  int phase = 0;

  bool observable() const { return kind != Kind::kTau; }
  std::string str() const;
  friend bool operator==(const Action& a, const Action& b) {
    return a.str() == b.str();
  }
};

/// Parses the rendering produced by Action::str().
Action parse_action(std::string_view text);

/**
 * A state of the system: the live processes, the intruder frame (biterms
 * when the model is a biprocess), the barrier phase reached so far and
 * whether some process has become permanently stuck (which keeps later
 * barriers closed).
 */
struct Config {
  std::vector<Proc> procs;
  std::vector<Term> frame;
  int phase = 0;
  bool stuck = false;

  /// Memo key: invariant under reordering of processes and under
  /// consistent renaming of fresh names.
  std::string key() const;
  /// Frame rendering with fresh names canonicalised.
  std::string frame_key() const;
};

/// Why the two sides of a biprocess stopped moving in lockstep.
struct Divergence {
  enum class Kind { kAction, kCondition, kFrame };
  Kind kind;
  std::string detail;
  std::optional<Distinguisher> distinguisher;

  std::string str() const;
};

struct Transition {
  Action action;
  Config target;
};

struct StepResult {
  std::vector<Transition> transitions;
  /// Set only for biprocesses: a step that one side can take and the other
  /// cannot. Transitions are still listed for the agreeing steps.
  std::optional<Divergence> divergence;
};

struct Bounds {
  std::size_t max_states = 5'000'000;
  /// Resident memory cap in MiB; 0 reads BALLOTSCOPE_MAX_MEM, else none.
  std::size_t max_memory_mb = 0;
  int depth = kDefaultDepth;
  /// Depth of injected recipes; 0 means `depth`.
  int inject_depth = 0;
};

/// Memory cap from BALLOTSCOPE_MAX_MEM (MiB), or 0 if unset.
std::size_t memory_cap_from_env();
/// Current resident set size in MiB (0 where unavailable).
std::size_t resident_mb();

/**
 * Operational semantics of an instantiated model under a resolved
 * scenario. Silent steps that commute with everything else (conditionals,
 * restriction, unobserved point-to-point communication on channels with a
 * single sender and receiver) are applied eagerly while settling a state.
 */
class Semantics {
 public:
  Semantics(const Model& m, ResolvedScenario s, Bounds bounds = {});

  bool bi() const { return bi_; }
  const ResolvedScenario& scenario() const { return scen_; }
  const Model& model() const { return model_; }
  const Bounds& bounds() const { return bounds_; }
  const DeductionContext& context() const { return ctx_; }

  /// Settled initial state; a divergence found while settling is returned
  /// through `div` (biprocesses only).
  Config initial(std::optional<Divergence>* div = nullptr) const;

  StepResult step(const Config& c) const;
  /// Only the silent transitions of step(c); no injections are enumerated.
  StepResult silent_step(const Config& c) const;

  /// Recipe classes over the frame of `c` (one frame, or both sides).
  const Enumeration& recipes(const Config& c) const;

  /// Projects a biprocess state to one side.
  Config project(const Config& c, Side side) const;

 private:
  struct Flow;
  // Recipe classes of a frame with the sendable values precomputed.
  struct Injections {
    Enumeration e;
    std::vector<std::pair<std::size_t, Term>> sendable;  // class index, value
  };
  const Injections& injections(const Config& c) const;
  int inject_depth() const {
    return bounds_.inject_depth > 0 ? std::min(bounds_.inject_depth, bounds_.depth)
                                    : bounds_.depth;
  }
  void settle(Config& c, std::optional<Divergence>& div) const;
  StepResult successors(const Config& c, bool silent_only) const;
  bool fires_alone(const Channel& ch, Caps caps) const;
  int count_outputs(const Channel& ch) const;
  int count_inputs(const Channel& ch) const;

  Model model_;
  ResolvedScenario scen_;
  Bounds bounds_;
  DeductionContext ctx_;
  bool bi_;
  std::vector<Term> candidates_;
  std::map<Channel, std::pair<int, int>> usage_;  // outputs, inputs
  mutable std::unordered_map<std::string, std::shared_ptr<Injections>> enum_cache_;
};

/// Labelled transition system produced by explore().
struct Lts {
  std::vector<std::string> states;  // canonical keys; 0 is initial
  struct Edge {
    std::size_t from;
    std::string action;
    std::size_t to;
  };
  std::vector<Edge> transitions;
  bool complete = true;
  std::string bound_hit;  // "states" or "memory" when incomplete
  std::size_t frontier = 0;
  std::size_t max_frame = 0;

  std::string to_json() const;
};

/// Breadth-first exploration with memoisation. Stops at the bounds and
/// reports which one was hit.
Lts explore(const Semantics& sem);
Lts explore(const Model& m, const ResolvedScenario& s, Bounds bounds = {});

/// Up to `limit` observable traces in breadth-first order (prefixes of
/// longer traces are listed when they are maximal or the limit allows).
std::vector<std::vector<Action>> observable_traces(const Semantics& sem,
                                                   std::size_t limit);

}  // namespace ballotscope

#endif  // BALLOTSCOPE_SEMANTICS_HH_
