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

#ifndef BALLOTSCOPE_DEDUCTION_HH_
#define BALLOTSCOPE_DEDUCTION_HH_

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ballotscope/term.hh"

namespace ballotscope {

/// A term over frame handles `wN`, public leaves and function symbols.
using Recipe = Term;

/// Intruder frame: observed messages in order. Handle wN is entries[N-1].
struct Knowledge {
  std::vector<Term> entries;
};

/// Left and right frames of equal length.
struct FramePair {
  Knowledge left;
  Knowledge right;
};

inline constexpr int kDefaultDepth = 4;

struct DeductionContext {
  /// Terms usable as recipe leaves besides handles (public names, public
  /// keys). Private names are never leaves.
  std::vector<Term> public_leaves;
  /// Largest tuple arity the intruder may build or project.
  int max_tuple_arity = 4;
  /// Upper bound on distinct recipe classes before giving up.
  std::size_t max_classes = 400000;
};

/// Evaluates a recipe against a frame. Returns nullopt if some destructor
/// applied by the recipe does not reduce (the computation fails).
std::optional<Term> evaluate(const Recipe& recipe,
                             std::span<const Term> frame);

/// One recipe class: a minimal recipe together with its value on each
/// frame being enumerated.
struct RecipeClass {
  Recipe recipe;
  std::vector<Term> values;
  int size;
};

/// Test that tells two frames apart.
struct Distinguisher {
  enum class Kind {
    kEquality,  // first = second holds on `holds_on` only
    kSuccess,   // first evaluates without failure on `holds_on` only
  };
  Kind kind;
  Recipe first;
  Recipe second;
  Side holds_on;

  std::string str() const;
  /// Re-evaluates the test on both frames; true if it still separates them.
  bool separates(std::span<const Term> left, std::span<const Term> right) const;
};

struct Enumeration {
  std::vector<RecipeClass> classes;
  std::optional<Distinguisher> distinguisher;
};

/**
 * Enumerates recipe classes of size <= depth over one or two frames of
 * equal length, in deterministic order: by size, then symbol order, then
 * argument classes. Only one representative recipe per class of values is
 * kept and reused for larger recipes. With two frames the enumeration stops
 * at the first test separating them.
 *
 * Throws BoundError if more than ctx.max_classes classes arise.
 */
Enumeration enumerate_classes(std::span<const std::vector<Term>* const> frames,
                              int depth, const DeductionContext& ctx);

/// All terms derivable by recipes of size <= depth, in enumeration order.
std::vector<Term> saturate(const Knowledge& k, int depth,
                           const DeductionContext& ctx = {});

/// Minimal-size recipe producing `target`, if one of size <= depth exists.
std::optional<Recipe> derivable(const Knowledge& k, const Term& target,
                                int depth, const DeductionContext& ctx = {});

struct StaticResult {
  bool equivalent = true;
  std::optional<Distinguisher> witness;
};

/// Static equivalence up to recipes of size <= depth.
StaticResult statically_equivalent(const FramePair& fp, int depth,
                                   const DeductionContext& ctx = {});

}  // namespace ballotscope

#endif  // BALLOTSCOPE_DEDUCTION_HH_
