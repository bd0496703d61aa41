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

// Independent reference implementations used as test oracles. They follow
// the definitions directly (rewrite anywhere, close values by size, compare
// explicit recipe pairs) and share no algorithm with the library.

#ifndef BALLOTSCOPE_TESTS_ORACLE_HH_
#define BALLOTSCOPE_TESTS_ORACLE_HH_

#include <map>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "ballotscope/term.hh"

namespace oracle {

using ballotscope::Term;

inline bool head_is(const Term& t, const std::string& name) {
  return t.is_app() && t.symbol().name == name;
}

inline Term app(const std::string& name, std::vector<Term> args) {
  return ballotscope::make_term(*ballotscope::lookup_symbol(name),
                                std::move(args));
}

// Applies a rewrite rule or projection at the root, inspecting the
// structure by hand.
inline std::optional<Term> reduce_root(const Term& t) {
  if (!t.is_app()) return std::nullopt;
  const auto& s = t.symbol();
  if (s.name == "dec") {
    const Term& c = t.arg(0);
    if (head_is(c, "penc") && head_is(c.arg(2), "pk") &&
        c.arg(2).arg(0) == t.arg(1)) {
      return c.arg(0);
    }
  } else if (s.name == "checksign") {
    const Term& g = t.arg(0);
    if (head_is(g, "sign") && g.arg(1) == t.arg(1) && head_is(t.arg(2), "pk") &&
        t.arg(2).arg(0) == g.arg(0)) {
      return app("ok", {});
    }
  } else if (s.name == "checkzkp") {
    const Term& z = t.arg(0);
    if (head_is(z, "zkp") && head_is(z.arg(0), "pk") &&
        head_is(z.arg(3), "penc")) {
      const Term& c = z.arg(3);
      if (c.arg(0) == z.arg(2) && c.arg(1) == z.arg(1) && c.arg(2) == z.arg(0)) {
        return app("ok", {});
      }
    }
  } else if (s.name.rfind("proj_", 0) == 0) {
    int i = 0, n = 0;
    std::sscanf(s.name.c_str(), "proj_%d_%d", &i, &n);
    const Term& u = t.arg(0);
    if (head_is(u, "tuple" + std::to_string(n))) return u.arg(i - 1);
  }
  return std::nullopt;
}

using Path = std::vector<std::size_t>;

inline void collect_redexes(const Term& t, Path& at, std::vector<Path>& out) {
  if (!t.is_app()) return;
  if (reduce_root(t)) out.push_back(at);
  for (std::size_t i = 0; i < t.args().size(); ++i) {
    at.push_back(i);
    collect_redexes(t.arg(i), at, out);
    at.pop_back();
  }
}

inline Term replace_at(const Term& t, const Path& p, std::size_t pos,
                       const Term& sub) {
  if (pos == p.size()) return sub;
  std::vector<Term> args(t.args().begin(), t.args().end());
  args[p[pos]] = replace_at(args[p[pos]], p, pos + 1, sub);
  return ballotscope::make_term(t.symbol(), std::move(args));
}

inline const Term& at_path(const Term& t, const Path& p) {
  const Term* cur = &t;
  for (std::size_t i : p) cur = &cur->arg(i);
  return *cur;
}

// Rewrites at a randomly chosen redex position until none is left.
template <class Rng>
Term normalize_anywhere(Term t, Rng& rng) {
  for (;;) {
    std::vector<Path> found;
    Path at;
    collect_redexes(t, at, found);
    if (found.empty()) return t;
    std::uniform_int_distribution<std::size_t> pick(0, found.size() - 1);
    const Path& p = found[pick(rng)];
    t = replace_at(t, p, 0, *reduce_root(at_path(t, p)));
  }
}

inline bool has_redex(const Term& t) {
  std::vector<Path> found;
  Path at;
  collect_redexes(t, at, found);
  return !found.empty();
}

// Symbols an intruder may apply, as names.
inline std::vector<std::string> recipe_symbols(int max_tuple) {
  std::vector<std::string> out = {"pk",  "hash",      "sign",     "dec",
                                  "penc", "checksign", "checkzkp", "zkp"};
  for (int n = 2; n <= max_tuple; ++n) out.push_back("tuple" + std::to_string(n));
  for (int n = 2; n <= max_tuple; ++n) {
    for (int i = 1; i <= n; ++i) {
      out.push_back("proj_" + std::to_string(i) + "_" + std::to_string(n));
    }
  }
  return out;
}

inline bool is_destructor_name(const std::string& s) {
  return s == "dec" || s == "checksign" || s == "checkzkp" ||
         s.rfind("proj_", 0) == 0;
}

inline int arity_of(const std::string& s) {
  return ballotscope::lookup_symbol(s)->arity;
}

// Calls fn(parts) for every composition of `total` into `k` parts >= 1.
template <class Fn>
void compositions(int total, int k, std::vector<int>& parts, Fn&& fn) {
  if (k == 0) {
    if (total == 0) fn(parts);
    return;
  }
  for (int first = 1; first <= total - (k - 1); ++first) {
    parts.push_back(first);
    compositions(total - first, k - 1, parts, fn);
    parts.pop_back();
  }
}

// Applies a symbol to argument values; nullopt if a destructor fails.
inline std::optional<Term> apply(const std::string& f, std::vector<Term> args) {
  Term t = app(f, std::move(args));
  if (!is_destructor_name(f)) return t;
  return reduce_root(t);
}

// Least recipe size for every value derivable with recipes of size <= depth,
// computed by closing the sets of values reachable at each exact size.
inline std::map<Term, int> value_closure(const std::vector<Term>& frame,
                                         const std::vector<Term>& leaves,
                                         int depth, int max_tuple = 4) {
  std::vector<std::set<Term>> exact(depth + 1);
  if (depth >= 1) {
    for (const Term& t : frame) exact[1].insert(t);
    exact[1].insert(app("ok", {}));
    for (const Term& t : leaves) exact[1].insert(t);
  }
  const auto symbols = recipe_symbols(max_tuple);
  for (int s = 2; s <= depth; ++s) {
    for (const std::string& f : symbols) {
      int k = arity_of(f);
      std::vector<int> parts;
      compositions(s - 1, k, parts, [&](const std::vector<int>& sizes) {
        std::vector<Term> args(k);
        auto rec = [&](auto&& self, int i) -> void {
          if (i == k) {
            if (auto v = apply(f, args)) exact[s].insert(*v);
            return;
          }
          for (const Term& v : exact[sizes[i]]) {
            args[i] = v;
            self(self, i + 1);
          }
        };
        rec(rec, 0);
      });
    }
  }
  std::map<Term, int> least;
  for (int s = 1; s <= depth; ++s) {
    for (const Term& v : exact[s]) least.emplace(v, s);
  }
  return least;
}

// Evaluates a recipe by direct recursion.
inline std::optional<Term> evaluate(const Term& r,
                                    const std::vector<Term>& frame) {
  if (r.is_handle()) {
    int i = r.handle_index();
    if (i < 1 || i > static_cast<int>(frame.size())) return std::nullopt;
    return frame[i - 1];
  }
  if (!r.is_app()) return r;
  std::vector<Term> args;
  for (const Term& a : r.args()) {
    auto v = evaluate(a, frame);
    if (!v) return std::nullopt;
    args.push_back(*v);
  }
  return apply(r.symbol().name, std::move(args));
}

// Every recipe of size <= depth over handles w1..wn and the given leaves.
inline std::vector<Term> all_recipes(int handles,
                                     const std::vector<Term>& leaves, int depth,
                                     int max_tuple = 4) {
  std::vector<std::vector<Term>> exact(depth + 1);
  if (depth >= 1) {
    for (int i = 1; i <= handles; ++i) exact[1].push_back(Term::handle(i));
    exact[1].push_back(app("ok", {}));
    for (const Term& t : leaves) exact[1].push_back(t);
  }
  const auto symbols = recipe_symbols(max_tuple);
  for (int s = 2; s <= depth; ++s) {
    for (const std::string& f : symbols) {
      int k = arity_of(f);
      std::vector<int> parts;
      compositions(s - 1, k, parts, [&](const std::vector<int>& sizes) {
        std::vector<Term> args(k);
        auto rec = [&](auto&& self, int i) -> void {
          if (i == k) {
            exact[s].push_back(app(f, args));
            return;
          }
          for (const Term& r : exact[sizes[i]]) {
            args[i] = r;
            self(self, i + 1);
          }
        };
        rec(rec, 0);
      });
    }
  }
  std::vector<Term> out;
  for (auto& layer : exact) out.insert(out.end(), layer.begin(), layer.end());
  return out;
}

// Static equivalence by definition: every recipe succeeds on both frames or
// on neither, and every pair of recipes is equal on both or on neither.
inline bool statically_equivalent(const std::vector<Term>& left,
                                  const std::vector<Term>& right,
                                  const std::vector<Term>& leaves, int depth) {
  std::vector<std::pair<Term, Term>> values;
  for (const Term& r : all_recipes(static_cast<int>(left.size()), leaves,
                                   depth)) {
    auto l = evaluate(r, left);
    auto rr = evaluate(r, right);
    if (l.has_value() != rr.has_value()) return false;
    if (l) values.emplace_back(*l, *rr);
  }
  for (std::size_t i = 0; i < values.size(); ++i) {
    for (std::size_t j = i + 1; j < values.size(); ++j) {
      bool eq_l = values[i].first == values[j].first;
      bool eq_r = values[i].second == values[j].second;
      if (eq_l != eq_r) return false;
    }
  }
  return true;
}

// Random ground terms over a small name pool.
class TermGen {
 public:
  explicit TermGen(unsigned seed) : rng_(seed) {}

  std::mt19937& rng() { return rng_; }

  int uniform(int lo, int hi) {
    return std::uniform_int_distribution<int>(lo, hi)(rng_);
  }

  Term name() {
    static const char* pool[] = {"a", "b", "k1", "k2", "r1", "r2", "n1"};
    std::string id = pool[uniform(0, 6)];
    return Term::name(id, id == "a" || id == "b");
  }

  // Constructor-only term of depth <= depth.
  Term message(int depth) {
    if (depth <= 1 || uniform(0, 3) == 0) {
      return uniform(0, 9) == 0 ? app("ok", {}) : name();
    }
    switch (uniform(0, 6)) {
      case 0: return app("pk", {message(depth - 1)});
      case 1: return app("hash", {message(depth - 1)});
      case 2: return app("sign", {key(), message(depth - 1)});
      case 3:
        return app("penc", {message(depth - 1), name(), app("pk", {key()})});
      case 4: {
        Term pub = app("pk", {key()});
        Term m = message(depth - 2 < 1 ? 1 : depth - 2);
        Term r = name();
        return app("zkp", {pub, r, m, app("penc", {m, r, pub})});
      }
      case 5: return app("tuple2", {message(depth - 1), message(depth - 1)});
      default:
        return app("tuple3", {message(depth - 1), message(depth - 1),
                              message(depth - 1)});
    }
  }

  // Arbitrary term of depth <= depth, biased towards redexes.
  Term any(int depth) {
    if (depth <= 1) return uniform(0, 9) == 0 ? app("ok", {}) : name();
    int d = depth - 1;
    switch (uniform(0, 11)) {
      case 0: {
        Term k = key();
        return app("dec", {app("penc", {any(d - 1 < 1 ? 1 : d - 1), name(),
                                        app("pk", {k})}),
                           uniform(0, 3) ? k : any(d)});
      }
      case 1: {
        Term k = key();
        Term m = any(d - 1 < 1 ? 1 : d - 1);
        return app("checksign", {app("sign", {k, m}), uniform(0, 3) ? m : any(d),
                                 app("pk", {k})});
      }
      case 2: {
        Term pub = app("pk", {key()});
        Term m = any(d - 2 < 1 ? 1 : d - 2);
        Term r = name();
        return app("checkzkp",
                   {app("zkp", {pub, r, m, app("penc", {m, r, pub})})});
      }
      case 3: {
        Term u = app("tuple2", {any(d - 1 < 1 ? 1 : d - 1), any(d - 1 < 1 ? 1 : d - 1)});
        return app(uniform(0, 1) ? "proj_1_2" : "proj_2_2", {u});
      }
      case 4: return app("dec", {any(d), any(d)});
      case 5: return app("checksign", {any(d), any(d), any(d)});
      case 6: return app("checkzkp", {any(d)});
      case 7: return app("pk", {any(d)});
      case 8: return app("hash", {any(d)});
      case 9: return app("penc", {any(d), name(), any(d)});
      case 10: return app("tuple2", {any(d), any(d)});
      default: return app("sign", {any(d), any(d)});
    }
  }

  Term key() { return Term::name(uniform(0, 1) ? "k1" : "k2"); }

 private:
  std::mt19937 rng_;
};

inline int term_depth(const Term& t) {
  int d = 0;
  if (t.is_app() || t.is_choice()) {
    for (const Term& a : t.args()) d = std::max(d, term_depth(a));
  }
  return d + 1;
}

}  // namespace oracle

#endif  // BALLOTSCOPE_TESTS_ORACLE_HH_
