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

#ifndef BALLOTSCOPE_TERM_HH_
#define BALLOTSCOPE_TERM_HH_

#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace ballotscope {

enum class SymbolKind : std::uint8_t { kConstructor, kDestructor };

/**
 * Function symbol of the message algebra.
 *
 * The built-in signature is {ok/0, pk/1, hash/1, sign/2, dec/2, penc/3,
 * checksign/3, checkzkp/1, zkp/4}. Tuples of arity n >= 2 and their
 * projections proj_i_n are added internally and are not part of the
 * user-visible signature. Symbols have static storage duration and are
 * compared by address.
 */
struct Symbol {
  std::string name;
  int arity;
  SymbolKind kind;
  int tuple_arity = 0;  // n for tupleN and proj_i_n, else 0
  int proj_index = 0;   // i for proj_i_n, else 0

  bool is_constructor() const { return kind == SymbolKind::kConstructor; }
  bool is_destructor() const { return kind == SymbolKind::kDestructor; }
  bool is_tuple() const { return tuple_arity > 0 && proj_index == 0; }
  bool is_projection() const { return proj_index > 0; }
};

namespace sig {
const Symbol& ok();
const Symbol& pk();
const Symbol& hash();
const Symbol& sign();
const Symbol& dec();
const Symbol& penc();
const Symbol& checksign();
const Symbol& checkzkp();
const Symbol& zkp();
}  // namespace sig

inline constexpr int kMaxTupleArity = 8;

/// The nine symbols of the built-in signature, in declaration order.
std::span<const Symbol* const> builtin_signature();

const Symbol& tuple_symbol(int arity);
const Symbol& proj_symbol(int index, int arity);

/// Resolves a built-in, tuple ("tupleN") or projection ("proj_i_n") name.
const Symbol* lookup_symbol(std::string_view name);

enum class Side : std::uint8_t { kLeft, kRight };

/**
 * Immutable symbolic message.
 *
 * A term is a name, a variable, a function application, a biprocess
 * `choice[l,r]` pair, or a recipe handle `wN` referring to the N-th frame
 * entry. Copies share structure. Equality is structural; names compare by
 * identifier only.
 */
class Term {
 public:
  enum class Kind : std::uint8_t { kName, kVar, kApp, kChoice, kHandle };

  Term() = default;

  static Term name(std::string id, bool is_public = false);
  /// Pattern variable; `type` restricts injected values ("cand") or is empty.
  static Term var(std::string id, std::string type = {});
  /// 1-based reference to a frame entry.
  static Term handle(int index);
  /// Throws Error if either side is itself a choice.
  static Term choice(Term left, Term right);

  bool valid() const { return node_ != nullptr; }
  Kind kind() const { return node_->kind; }
  bool is_name() const { return kind() == Kind::kName; }
  bool is_var() const { return kind() == Kind::kVar; }
  bool is_app() const { return kind() == Kind::kApp; }
  bool is_choice() const { return kind() == Kind::kChoice; }
  bool is_handle() const { return kind() == Kind::kHandle; }

  const std::string& id() const { return node_->id; }
  bool is_public() const { return node_->flag; }
  const std::string& type() const { return node_->type; }
  const Symbol& symbol() const { return *node_->symbol; }
  std::span<const Term> args() const { return node_->args; }
  const Term& arg(std::size_t i) const { return node_->args[i]; }
  const Term& left() const { return node_->args[0]; }
  const Term& right() const { return node_->args[1]; }
  int handle_index() const { return node_->index; }

  std::size_t hash() const { return node_->hash; }
  bool is_ground() const { return !(node_->traits & kHasVar); }
  bool has_choice() const { return node_->traits & kHasChoice; }
  bool has_handle() const { return node_->traits & kHasHandle; }
  bool has_destructor() const { return node_->traits & kHasDestructor; }
  std::size_t size() const { return node_->size; }

  /// Canonical text: `f(t1,...,tn)`, `(t1,...,tn)` for tuples,
  /// `choice[l,r]`, bare identifiers, `wN` for handles.
  std::string str() const;

  friend bool operator==(const Term& a, const Term& b);
  friend bool operator!=(const Term& a, const Term& b) { return !(a == b); }
  friend bool operator<(const Term& a, const Term& b) {
    return compare(a, b) < 0;
  }
  /// Total structural order, independent of allocation.
  static int compare(const Term& a, const Term& b);

  friend Term make_term(const Symbol& symbol, std::vector<Term> args);

 private:
  enum Trait : std::uint8_t {
    kHasVar = 1,
    kHasChoice = 2,
    kHasHandle = 4,
    kHasDestructor = 8
  };
  struct Node {
    Kind kind = Kind::kName;
    bool flag = false;
    int index = 0;
    std::uint8_t traits = 0;
    std::size_t size = 1;
    std::size_t hash = 0;
    const Symbol* symbol = nullptr;
    std::string id;
    std::string type;
    std::vector<Term> args;
  };
  explicit Term(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  static Term finish(Node node);

  std::shared_ptr<const Node> node_;
};

/// Application term; throws ArityError on an argument count mismatch.
Term make_term(const Symbol& symbol, std::vector<Term> args);
Term make_tuple(std::vector<Term> items);

struct TermHash {
  std::size_t operator()(const Term& t) const { return t.hash(); }
};

/// Oriented equation; variables of `rhs` occur in `lhs`.
struct RewriteRule {
  std::string label;
  Term lhs;
  Term rhs;
};

/// The three oriented equations for dec, checksign and checkzkp.
const std::vector<RewriteRule>& builtin_rules();

using Substitution = std::map<std::string, Term>;

/// Syntactic first-order matching; nonlinear variables must agree.
std::optional<Substitution> match(const Term& pattern, const Term& subject,
                                  Substitution binding = {});

Term substitute(const Term& t, const Substitution& s);

/// Rewrites `t` at its root if some rule applies (arguments untouched).
std::optional<Term> rewrite_root(const Term& t);

/// Innermost normal form modulo the built-in rules and tuple projections.
/// Stuck destructor applications are left in place.
Term normalize(const Term& t);

/// Replaces every choice by its chosen side.
Term project(const Term& t, Side side);

/// Smallest biterm whose projections are `left` and `right`; the common
/// structure is shared and choice appears only where they differ.
Term combine(const Term& left, const Term& right);

/// True if some destructor in `t` is applied (after normalization this
/// means a stuck application).
inline bool is_message(const Term& t) { return !t.has_destructor(); }

/// Parses the canonical text form. All names are private.
Term parse_term(std::string_view text);

std::ostream& operator<<(std::ostream& os, const Term& t);

}  // namespace ballotscope

#endif  // BALLOTSCOPE_TERM_HH_
