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

#ifndef BALLOTSCOPE_PROCESS_HH_
#define BALLOTSCOPE_PROCESS_HH_

#include <compare>
#include <functional>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <unordered_map>
#include <vector>

#include "ballotscope/term.hh"

namespace ballotscope {

/**
 * Communication channel. Either an endpoint triple `from.to.tag`, which
 * attributes every message to a sender, receiver and message kind, or a
 * plain channel name (from and to empty).
 */
struct Channel {
  std::string from;
  std::string to;
  std::string tag;

  static Channel triple(std::string from, std::string to, std::string tag) {
    return Channel{std::move(from), std::move(to), std::move(tag)};
  }
  static Channel plain(std::string name) { return Channel{{}, {}, std::move(name)}; }

  bool is_triple() const { return !from.empty(); }
  bool has_endpoint(const std::string& agent) const {
    return from == agent || to == agent;
  }
  std::string str() const {
    return is_triple() ? from + "." + to + "." + tag : tag;
  }
  auto operator<=>(const Channel&) const = default;
};

struct SourcePos {
  int line = 0;
  int column = 0;
};

class Process;
using Proc = std::shared_ptr<const Process>;

/**
 * Applied-pi process with barriers and events. Immutable; continuations are
 * shared. Terms may contain choice, which makes the process a biprocess.
 */
class Process {
 public:
  enum class Kind {
    kStop,
    kOutput,    // out(channel, first).next[0]
    kInput,     // in(channel, first).next[0]; first is a pattern
    kParallel,  // next[0] | next[1] | ...
    kRestrict,  // new name.next[0]
    kIfEq,      // if first = second then next[0] else next[1]
    kBarrier,   // barrier phase.next[0]
    kEvent,     // event name(args).next[0]
    kDiff,      // choice[next[0], next[1]] at process level
  };

  Kind kind = Kind::kStop;
  Channel channel;
  Term first;
  Term second;
  std::vector<Term> args;
  std::string name;
  int phase = 0;
  bool swap = false;
  std::vector<Proc> next;
  SourcePos pos;

  const Proc& cont() const { return next[0]; }
  /// Shape-independent rendering cache used for canonical ordering.
  const std::string& masked() const;

 private:
  // Copies start with an empty cache: a copied node is usually edited.
  struct Cache {
    std::string text;
    Cache() = default;
    Cache(const Cache&) {}
    Cache& operator=(const Cache&) {
      text.clear();
      return *this;
    }
  };
  mutable Cache masked_;
};

Proc stop(SourcePos pos = {});
Proc output(Channel ch, Term payload, Proc cont, SourcePos pos = {});
Proc input(Channel ch, Term pattern, Proc cont, SourcePos pos = {});
Proc parallel(std::vector<Proc> parts, SourcePos pos = {});
Proc restrict(std::string name, Proc cont, SourcePos pos = {});
Proc if_eq(Term lhs, Term rhs, Proc then_branch, Proc else_branch,
           SourcePos pos = {});
Proc barrier(int phase, Proc cont, bool swap = false, SourcePos pos = {});
Proc event(std::string label, std::vector<Term> args, Proc cont,
           SourcePos pos = {});
Proc diff(Proc left, Proc right, SourcePos pos = {});

/// Variables bound by an input pattern.
std::set<std::string> pattern_vars(const Term& pattern);

/// Capture-avoiding substitution of variables.
Proc substitute(const Proc& p, const Substitution& s);

/// Renames names (not variables) everywhere, including restrictions.
Proc rename_names(const Proc& p,
                  const std::unordered_map<std::string, std::string>& map);

/// Renames channel components; used when expanding role templates.
Proc map_channels(const Proc& p, const std::function<Channel(const Channel&)>& f);

Proc project(const Proc& p, Side side);

/// Biprocess whose projections are `left` and `right`; nullopt if their
/// control structure differs.
std::optional<Proc> merge(const Proc& left, const Proc& right);

std::set<std::string> free_vars(const Proc& p);

/// Structural equality ignoring source positions.
bool equal(const Proc& a, const Proc& b);

/// Maps fresh names (those containing '#') to canonical indices in order of
/// first use, or masks them entirely. A frozen canon numbers only names it
/// has already seen and masks the others.
class NameCanon {
 public:
  explicit NameCanon(bool mask = false) : mask_(mask) {}
  void append(const std::string& id, std::string& out);
  void freeze(bool on) { frozen_ = on; }

 private:
  bool mask_;
  bool frozen_ = false;
  std::unordered_map<std::string, int> index_;
};

void render_term(const Term& t, std::string& out, NameCanon* canon = nullptr);
void render_process(const Proc& p, std::string& out, NameCanon* canon = nullptr);
std::string render_process(const Proc& p);

}  // namespace ballotscope

#endif  // BALLOTSCOPE_PROCESS_HH_
