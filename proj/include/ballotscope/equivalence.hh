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

#ifndef BALLOTSCOPE_EQUIVALENCE_HH_
#define BALLOTSCOPE_EQUIVALENCE_HH_

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ballotscope/model.hh"
#include "ballotscope/scenario.hh"
#include "ballotscope/semantics.hh"

namespace ballotscope {

enum class Result { kEquivalent, kAttack, kInconclusive };

/// "EQUIVALENT", "ATTACK" or "INCONCLUSIVE".
std::string to_string(Result r);

enum class Property { kTraceEq, kDiffEq };

std::string to_string(Property p);

struct AttackTrace {
  /// Observable actions leading to the divergence.
  std::vector<Action> actions;
  Divergence divergence;
};

struct Stats {
  std::size_t states = 0;
  std::size_t frame_len = 0;
  long long ms = 0;
};

struct Verdict {
  Result result = Result::kInconclusive;
  Property property = Property::kTraceEq;
  std::string scenario;
  std::string model;
  Stats stats;
  std::optional<AttackTrace> witness;
  /// Bound that was hit, for INCONCLUSIVE ("states", "memory", "recipes").
  std::string bound;
  /// Swap plan behind a biprocess verdict, e.g. "swap@1"; empty otherwise.
  std::string plan;

  /// {result, scenario, model, stats{states,frame_len,ms},
  ///  witness{trace[],divergence}} plus property, plan and bound.
  std::string to_json(int indent = 2) const;
  /// Same content without timings; stable across runs.
  std::string fingerprint() const;
};

/// One flag per barrier phase: exchange the swapped voters' data there.
struct SwapPlan {
  std::vector<std::pair<int, bool>> phases;
  std::string str() const;
};

inline constexpr int kMaxSwapPhases = 8;

/**
 * The 2^P swap plans of a biprocess with P barrier phases, plan 0 being
 * "swap nowhere". Barriers stay in the produced models; a swapped phase
 * is marked on its barriers and performed by the semantics when the phase
 * opens. Throws BoundError for P > kMaxSwapPhases.
 */
std::vector<std::pair<SwapPlan, Model>> compile_barriers(const Model& b);

/// Trace equivalence of two choice-free instantiated models.
Verdict trace_equivalent(const Model& m1, const Model& m2, const Scenario& s,
                         const Bounds& bounds = {});

/// Diff-equivalence of one biprocess, barriers executed as annotated.
Verdict diff_equivalent(const Model& b, const Scenario& s,
                        const Bounds& bounds = {});

/// Diff-equivalence over every swap plan: EQUIVALENT if some plan is, else
/// the first ATTACK by plan index, else INCONCLUSIVE.
Verdict verify_biprocess(const Model& b, const Scenario& s,
                         const Bounds& bounds = {});

/// Replays a witness against the models and re-checks the divergence.
/// For trace equivalence pass both models; for diff-equivalence pass the
/// biprocess (with the verdict's plan applied) and nullptr.
bool replay(const Verdict& v, const Model& m1, const Model* m2,
            const Scenario& s, const Bounds& bounds = {});

/// Step-by-step report of an ATTACK. Throws Error("nothing to diagnose")
/// for other verdicts and InternalError if the witness does not replay.
std::string diagnose(const Verdict& v, const Model& m1, const Model* m2,
                     const Scenario& s, const Bounds& bounds = {});

/// Applies the verdict's swap plan to a biprocess (identity when empty).
Model plan_model(const Model& b, const std::string& plan);

}  // namespace ballotscope

#endif  // BALLOTSCOPE_EQUIVALENCE_HH_
