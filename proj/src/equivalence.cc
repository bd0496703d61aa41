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

#include "ballotscope/equivalence.hh"

#include <algorithm>
#include <chrono>
#include <deque>
#include <map>
#include <set>
#include <unordered_map>

#include <json.hpp>

#include "ballotscope/error.hh"

namespace ballotscope {

namespace {

using Clock = std::chrono::steady_clock;

long long since(Clock::time_point t0) {
  return std::chrono::duration_cast<std::chrono::milliseconds>(Clock::now() - t0)
      .count();
}

std::vector<Term> side_frame(const std::vector<Term>& frame, Side side) {
  std::vector<Term> out;
  out.reserve(frame.size());
  for (const Term& t : frame) out.push_back(project(t, side));
  return out;
}

// Lazily expanded LTS of one choice-free system.
class SideLts {
 public:
  struct Node {
    Config config;
    int frame = 0;
    bool expanded = false;
    bool silent_known = false;
    std::vector<std::pair<std::string, int>> observable;
    std::vector<int> silent;
  };

  SideLts(const Semantics& sem, std::vector<std::vector<Term>>& frames,
          std::unordered_map<std::string, int>& frame_index)
      : sem_(sem), frames_(frames), frame_index_(frame_index) {}

  int add(Config c) {
    std::string k = c.key();
    auto [it, fresh] = index_.emplace(std::move(k), static_cast<int>(nodes_.size()));
    if (fresh) {
      std::string fk = c.frame_key();
      auto [fit, new_frame] =
          frame_index_.emplace(std::move(fk), static_cast<int>(frames_.size()));
      if (new_frame) frames_.push_back(c.frame);
      nodes_.push_back({std::move(c), fit->second, false, false, {}, {}});
    }
    return it->second;
  }

  Node& expand(int id) {
    if (!nodes_[id].expanded) {
      StepResult r = sem_.step(nodes_[id].config);
      std::vector<std::pair<std::string, int>> obs;
      std::vector<int> silent;
      for (Transition& t : r.transitions) {
        std::string label = t.action.str();
        int target = add(std::move(t.target));
        if (t.action.observable()) {
          obs.emplace_back(std::move(label), target);
        } else {
          silent.push_back(target);
        }
      }
      Node& n = nodes_[id];
      n.observable = std::move(obs);
      n.silent = std::move(silent);
      n.expanded = n.silent_known = true;
    }
    return nodes_[id];
  }

  // Silent successors, computed without enumerating injections.
  const std::vector<int>& silent(int id) {
    if (!nodes_[id].silent_known) {
      StepResult r = sem_.silent_step(nodes_[id].config);
      std::vector<int> out;
      for (Transition& t : r.transitions) out.push_back(add(std::move(t.target)));
      nodes_[id].silent = std::move(out);
      nodes_[id].silent_known = true;
    }
    return nodes_[id].silent;
  }

  std::vector<int> closure(std::vector<int> start) {
    std::set<int> seen(start.begin(), start.end());
    std::deque<int> queue(seen.begin(), seen.end());
    while (!queue.empty()) {
      int id = queue.front();
      queue.pop_front();
      for (int t : silent(id)) {
        if (seen.insert(t).second) queue.push_back(t);
      }
    }
    return {seen.begin(), seen.end()};
  }

  const Node& node(int id) const { return nodes_[id]; }
  std::size_t size() const { return nodes_.size(); }

 private:
  const Semantics& sem_;
  std::vector<std::vector<Term>>& frames_;
  std::unordered_map<std::string, int>& frame_index_;
  std::vector<Node> nodes_;
  std::unordered_map<std::string, int> index_;
};

std::string ids_key(const std::vector<int>& l, const std::vector<int>& r) {
  std::string k;
  for (int i : l) k += std::to_string(i) + ",";
  k += "|";
  for (int i : r) k += std::to_string(i) + ",";
  return k;
}

struct Search {
  std::vector<int> left;
  std::vector<int> right;
  std::vector<Action> trace;
};

// Frames on the two sides of a trace-equivalence node: each frame must have
// a statically equivalent partner on the other side.
class FrameMatcher {
 public:
  FrameMatcher(const std::vector<std::vector<Term>>& frames, int depth,
               const DeductionContext& ctx)
      : frames_(frames), depth_(depth), ctx_(ctx) {}

  const StaticResult& check(int l, int r) {
    auto it = cache_.find({l, r});
    if (it != cache_.end()) return it->second;
    FramePair fp{{frames_[l]}, {frames_[r]}};
    return cache_.emplace(std::make_pair(l, r),
                          statically_equivalent(fp, depth_, ctx_))
        .first->second;
  }

  // Returns a distinguisher if some frame lacks a partner.
  std::optional<Distinguisher> mismatch(const std::set<int>& ls,
                                        const std::set<int>& rs) {
    for (int l : ls) {
      bool found = false;
      for (int r : rs) {
        if (check(l, r).equivalent) {
          found = true;
          break;
        }
      }
      if (!found) return check(l, *rs.begin()).witness;
    }
    for (int r : rs) {
      bool found = false;
      for (int l : ls) {
        if (check(l, r).equivalent) {
          found = true;
          break;
        }
      }
      if (!found) return check(*ls.begin(), r).witness;
    }
    return std::nullopt;
  }

 private:
  const std::vector<std::vector<Term>>& frames_;
  int depth_;
  const DeductionContext& ctx_;
  std::map<std::pair<int, int>, StaticResult> cache_;
};

Verdict start_verdict(Property p, const Scenario& s, const Model& m) {
  Verdict v;
  v.property = p;
  v.scenario = s.name;
  v.model = m.name;
  return v;
}

void set_attack(Verdict& v, std::vector<Action> trace, Divergence d) {
  v.result = Result::kAttack;
  v.witness = AttackTrace{std::move(trace), std::move(d)};
}

Divergence frame_divergence(const Distinguisher& d) {
  return Divergence{Divergence::Kind::kFrame,
                    d.str() + " holds on the " +
                        (d.holds_on == Side::kLeft ? "left" : "right") + " only",
                    d};
}

}  // namespace

std::string to_string(Result r) {
  switch (r) {
    case Result::kEquivalent:
      return "EQUIVALENT";
    case Result::kAttack:
      return "ATTACK";
    case Result::kInconclusive:
      break;
  }
  return "INCONCLUSIVE";
}

std::string to_string(Property p) {
  return p == Property::kTraceEq ? "trace-eq" : "diff-eq";
}

namespace {

nlohmann::ordered_json verdict_json(const Verdict& v, bool timings) {
  nlohmann::ordered_json j;
  j["result"] = to_string(v.result);
  j["scenario"] = v.scenario;
  j["model"] = v.model;
  j["property"] = to_string(v.property);
  j["stats"] = {{"states", v.stats.states}, {"frame_len", v.stats.frame_len}};
  if (timings) j["stats"]["ms"] = v.stats.ms;
  if (v.witness) {
    nlohmann::ordered_json w;
    w["trace"] = nlohmann::ordered_json::array();
    for (const Action& a : v.witness->actions) w["trace"].push_back(a.str());
    w["divergence"] = v.witness->divergence.str();
    j["witness"] = w;
  } else {
    j["witness"] = nullptr;
  }
  j["plan"] = v.plan.empty() ? nlohmann::ordered_json(nullptr)
                             : nlohmann::ordered_json(v.plan);
  j["bound"] = v.bound.empty() ? nlohmann::ordered_json(nullptr)
                               : nlohmann::ordered_json(v.bound);
  return j;
}

}  // namespace

std::string Verdict::to_json(int indent) const {
  return verdict_json(*this, true).dump(indent);
}

std::string Verdict::fingerprint() const {
  return verdict_json(*this, false).dump();
}

// ---------------------------------------------------------------------------
// Trace equivalence

namespace {

Verdict trace_search(const Model& m1, const Model& m2, const Scenario& s,
                     const Bounds& bounds) {
  auto t0 = Clock::now();
  Verdict v = start_verdict(Property::kTraceEq, s, m1);
  if (m1.is_biprocess() || m2.is_biprocess()) {
    throw ModelError("trace equivalence needs choice-free models");
  }
  Semantics left(m1, resolve(s, m1), bounds);
  Semantics right(m2, resolve(s, m2), bounds);
  std::vector<std::vector<Term>> frames;
  std::unordered_map<std::string, int> frame_index;
  SideLts lts_l(left, frames, frame_index), lts_r(right, frames, frame_index);
  FrameMatcher matcher(frames, bounds.depth, left.context());
  std::size_t cap_mb = left.bounds().max_memory_mb;

  try {
    std::deque<Search> queue;
    std::set<std::string> seen;
    Search init{lts_l.closure({lts_l.add(left.initial())}),
                lts_r.closure({lts_r.add(right.initial())}),
                {}};
    seen.insert(ids_key(init.left, init.right));
    queue.push_back(std::move(init));
    while (!queue.empty()) {
      Search node = std::move(queue.front());
      queue.pop_front();
      std::map<std::string, std::pair<std::vector<int>, std::vector<int>>> labels;
      std::map<std::string, Action> actions;
      for (int id : node.left) {
        for (auto& [label, target] : lts_l.expand(id).observable) {
          labels[label].first.push_back(target);
        }
      }
      for (int id : node.right) {
        for (auto& [label, target] : lts_r.expand(id).observable) {
          labels[label].second.push_back(target);
        }
      }
      bool attacked = false;
      for (auto& [label, targets] : labels) {
        if (targets.first.empty() != targets.second.empty()) {
          std::vector<Action> trace = node.trace;
          trace.push_back(parse_action(label));
          set_attack(v, std::move(trace),
                     Divergence{Divergence::Kind::kAction,
                                label + " is enabled on the " +
                                    (targets.first.empty() ? "right" : "left") +
                                    " only",
                                std::nullopt});
          attacked = true;
          break;
        }
      }
      if (attacked) break;
      for (auto& [label, targets] : labels) {
        std::vector<Action> trace = node.trace;
        trace.push_back(parse_action(label));
        // Silent steps never extend the frame, so frames are compared
        // before the (costly) silent closure.
        std::set<int> lf, rf;
        for (int id : targets.first) lf.insert(lts_l.node(id).frame);
        for (int id : targets.second) rf.insert(lts_r.node(id).frame);
        v.stats.frame_len = std::max(v.stats.frame_len, frames[*lf.begin()].size());
        if (auto d = matcher.mismatch(lf, rf)) {
          set_attack(v, std::move(trace), frame_divergence(*d));
          attacked = true;
          break;
        }
      }
      if (attacked) break;
      for (auto& [label, targets] : labels) {
        Search next{lts_l.closure(targets.first), lts_r.closure(targets.second),
                    node.trace};
        if (!seen.insert(ids_key(next.left, next.right)).second) continue;
        next.trace.push_back(parse_action(label));
        queue.push_back(std::move(next));
      }
      v.stats.states = lts_l.size() + lts_r.size();
      if (v.stats.states > bounds.max_states) {
        v.bound = "states";
        break;
      }
      if (cap_mb && (seen.size() & 255) == 0 && resident_mb() > cap_mb) {
        v.bound = "memory";
        break;
      }
    }
    if (v.result != Result::kAttack) {
      v.result = v.bound.empty() ? Result::kEquivalent : Result::kInconclusive;
    }
  } catch (const BoundError& e) {
    v.result = Result::kInconclusive;
    v.bound = "recipes";
    v.witness.reset();
  }
  v.stats.states = lts_l.size() + lts_r.size();
  v.stats.ms = since(t0);
  if (v.result == Result::kAttack && !replay(v, m1, &m2, s, bounds)) {
    throw InternalError("attack witness does not replay: " +
                        v.witness->divergence.str());
  }
  return v;
}

// ---------------------------------------------------------------------------
// Diff-equivalence

Verdict diff_search(const Model& b, const Scenario& s, const Bounds& bounds) {
  auto t0 = Clock::now();
  Verdict v = start_verdict(Property::kDiffEq, s, b);
  Semantics sem(b, resolve(s, b), bounds);
  struct Entry {
    int parent;
    Action via;
  };
  std::vector<Entry> entries;
  std::unordered_map<std::string, int> index;
  std::unordered_map<std::string, StaticResult> frame_cache;
  std::deque<std::pair<int, Config>> queue;
  std::size_t cap_mb = sem.bounds().max_memory_mb;

  auto trace_to = [&](int id) {
    std::vector<Action> out;
    for (; id > 0; id = entries[id].parent) {
      if (entries[id].via.observable()) out.push_back(entries[id].via);
    }
    std::reverse(out.begin(), out.end());
    return out;
  };

  try {
    std::optional<Divergence> d;
    Config init = sem.initial(&d);
    if (d) {
      set_attack(v, {}, *d);
    } else {
      index.emplace(init.key(), 0);
      entries.push_back({-1, Action{}});
      queue.emplace_back(0, std::move(init));
    }
    while (!queue.empty() && v.result != Result::kAttack) {
      auto [id, c] = std::move(queue.front());
      queue.pop_front();
      v.stats.frame_len = std::max(v.stats.frame_len, c.frame.size());
      StepResult r = sem.step(c);
      if (r.divergence) {
        set_attack(v, trace_to(id), *r.divergence);
        break;
      }
      for (Transition& t : r.transitions) {
        std::string k = t.target.key();
        auto [it, fresh] = index.emplace(std::move(k), static_cast<int>(entries.size()));
        if (!fresh) continue;
        entries.push_back({id, t.action});
        v.stats.frame_len = std::max(v.stats.frame_len, t.target.frame.size());
        if (t.action.kind == Action::Kind::kOut) {
          std::string fk = t.target.frame_key();
          auto fit = frame_cache.find(fk);
          if (fit == frame_cache.end()) {
            FramePair fp{{side_frame(t.target.frame, Side::kLeft)},
                         {side_frame(t.target.frame, Side::kRight)}};
            fit = frame_cache
                      .emplace(fk, statically_equivalent(fp, bounds.depth,
                                                         sem.context()))
                      .first;
          }
          if (!fit->second.equivalent) {
            set_attack(v, trace_to(it->second),
                       frame_divergence(*fit->second.witness));
            break;
          }
        }
        queue.emplace_back(it->second, std::move(t.target));
      }
      if (entries.size() > bounds.max_states) {
        v.bound = "states";
        break;
      }
      if (cap_mb && (entries.size() & 1023) == 0 && resident_mb() > cap_mb) {
        v.bound = "memory";
        break;
      }
    }
    if (v.result != Result::kAttack) {
      v.result = v.bound.empty() ? Result::kEquivalent : Result::kInconclusive;
    }
  } catch (const BoundError&) {
    v.result = Result::kInconclusive;
    v.bound = "recipes";
    v.witness.reset();
  }
  v.stats.states = entries.size();
  v.stats.ms = since(t0);
  if (v.result == Result::kAttack && !replay(v, b, nullptr, s, bounds)) {
    throw InternalError("attack witness does not replay: " +
                        v.witness->divergence.str());
  }
  return v;
}

// Attack-first probe: injections limited to leaf recipes (handles, public
// names). Every trace of the probe is a trace of the full system, so an
// attack found there is an attack; anything else falls through to the
// full search.
Bounds probe_bounds(const Bounds& bounds) {
  Bounds p = bounds;
  p.inject_depth = 1;
  p.max_states = std::max<std::size_t>(bounds.max_states / 4, 1);
  return p;
}

bool wants_probe(const Bounds& bounds) {
  return bounds.inject_depth == 0 && bounds.depth > 1;
}

}  // namespace

Verdict trace_equivalent(const Model& m1, const Model& m2, const Scenario& s,
                         const Bounds& bounds) {
  auto t0 = Clock::now();
  if (wants_probe(bounds)) {
    Verdict v = trace_search(m1, m2, s, probe_bounds(bounds));
    if (v.result == Result::kAttack && replay(v, m1, &m2, s, bounds)) {
      v.stats.ms = since(t0);
      return v;
    }
  }
  Verdict v = trace_search(m1, m2, s, bounds);
  v.stats.ms = since(t0);
  return v;
}

Verdict diff_equivalent(const Model& b, const Scenario& s, const Bounds& bounds) {
  auto t0 = Clock::now();
  if (wants_probe(bounds)) {
    Verdict v = diff_search(b, s, probe_bounds(bounds));
    if (v.result == Result::kAttack && replay(v, b, nullptr, s, bounds)) {
      v.stats.ms = since(t0);
      return v;
    }
  }
  Verdict v = diff_search(b, s, bounds);
  v.stats.ms = since(t0);
  return v;
}

// ---------------------------------------------------------------------------
// Barrier swap plans

std::string SwapPlan::str() const {
  if (phases.empty()) return "none";
  std::string out;
  for (const auto& [phase, swap] : phases) {
    if (!out.empty()) out += ",";
    out += (swap ? "swap@" : "keep@") + std::to_string(phase);
  }
  return out;
}

namespace {

Proc mark_swaps(const Proc& p, const std::set<int>& swapped) {
  Process q = *p;
  if (q.kind == Process::Kind::kBarrier) q.swap = swapped.count(q.phase) > 0;
  for (Proc& n : q.next) n = mark_swaps(n, swapped);
  return std::make_shared<const Process>(std::move(q));
}

}  // namespace

std::vector<std::pair<SwapPlan, Model>> compile_barriers(const Model& b) {
  std::vector<int> phases = b.barrier_phases();
  if (phases.size() > static_cast<std::size_t>(kMaxSwapPhases)) {
    throw BoundError("biprocess has " + std::to_string(phases.size()) +
                     " barrier phases; at most " + std::to_string(kMaxSwapPhases) +
                     " are supported (merge phases or drop swap annotations)");
  }
  std::vector<std::pair<SwapPlan, Model>> out;
  for (unsigned mask = 0; mask < (1u << phases.size()); ++mask) {
    SwapPlan plan;
    std::set<int> swapped;
    for (std::size_t i = 0; i < phases.size(); ++i) {
      bool on = mask & (1u << i);
      plan.phases.emplace_back(phases[i], on);
      if (on) swapped.insert(phases[i]);
    }
    Model m = b;
    for (Role& r : m.roles) r.body = mark_swaps(r.body, swapped);
    out.emplace_back(std::move(plan), std::move(m));
  }
  return out;
}

Model plan_model(const Model& b, const std::string& plan) {
  if (plan.empty()) return b;
  for (auto& [p, m] : compile_barriers(b)) {
    if (p.str() == plan) return m;
  }
  throw Error("unknown swap plan '" + plan + "'");
}

Verdict verify_biprocess(const Model& b, const Scenario& s, const Bounds& bounds) {
  std::vector<Verdict> verdicts;
  for (auto& [plan, m] : compile_barriers(b)) {
    Verdict v = diff_equivalent(m, s, bounds);
    v.plan = plan.str();
    verdicts.push_back(std::move(v));
  }
  for (Result want : {Result::kEquivalent, Result::kAttack}) {
    for (const Verdict& v : verdicts) {
      if (v.result == want) return v;
    }
  }
  return verdicts.front();
}

// ---------------------------------------------------------------------------
// Replay and diagnosis

namespace {

std::vector<Config> closure(const Semantics& sem, std::vector<Config> start) {
  std::vector<Config> out;
  std::set<std::string> seen;
  std::deque<Config> queue;
  for (Config& c : start) {
    if (seen.insert(c.key()).second) queue.push_back(std::move(c));
  }
  while (!queue.empty()) {
    Config c = std::move(queue.front());
    queue.pop_front();
    for (Transition& t : sem.step(c).transitions) {
      if (t.action.observable()) continue;
      if (seen.insert(t.target.key()).second) queue.push_back(std::move(t.target));
    }
    out.push_back(std::move(c));
  }
  return out;
}

std::vector<Config> advance(const Semantics& sem, const std::vector<Config>& set,
                            const Action& a) {
  std::string label = a.str();
  std::vector<Config> next;
  for (const Config& c : set) {
    for (Transition& t : sem.step(c).transitions) {
      if (t.action.observable() && t.action.str() == label) {
        next.push_back(std::move(t.target));
      }
    }
  }
  return closure(sem, std::move(next));
}

bool enabled(const Semantics& sem, const std::vector<Config>& set,
             const Action& a) {
  std::string label = a.str();
  for (const Config& c : set) {
    for (const Transition& t : sem.step(c).transitions) {
      if (t.action.str() == label) return true;
    }
  }
  return false;
}

struct Replayed {
  std::vector<Config> left;
  std::vector<Config> right;
  bool ok = false;
};

Replayed replay_trace(const Verdict& v, const Model& m1, const Model* m2,
                      const Scenario& s, const Bounds& bounds) {
  Replayed out;
  const AttackTrace& w = *v.witness;
  if (!m2) {
    Semantics sem(m1, resolve(s, m1), bounds);
    std::optional<Divergence> d;
    std::vector<Config> set = closure(sem, {sem.initial(&d)});
    if (w.actions.empty() && d) {
      out.ok = d->kind == w.divergence.kind;
      return out;
    }
    for (const Action& a : w.actions) set = advance(sem, set, a);
    for (const Config& c : set) {
      out.left.push_back(sem.project(c, Side::kLeft));
      out.right.push_back(sem.project(c, Side::kRight));
    }
    for (const Config& c : set) {
      if (w.divergence.kind == Divergence::Kind::kFrame) {
        auto l = side_frame(c.frame, Side::kLeft);
        auto r = side_frame(c.frame, Side::kRight);
        if (w.divergence.distinguisher->separates(l, r)) out.ok = true;
      } else {
        auto d2 = sem.step(c).divergence;
        if (d2 && d2->kind == w.divergence.kind) out.ok = true;
      }
    }
    return out;
  }

  Semantics left(m1, resolve(s, m1), bounds);
  Semantics right(*m2, resolve(s, *m2), bounds);
  std::vector<Config> ls = closure(left, {left.initial()});
  std::vector<Config> rs = closure(right, {right.initial()});
  std::size_t n = w.actions.size();
  if (w.divergence.kind == Divergence::Kind::kAction) --n;
  for (std::size_t i = 0; i < n; ++i) {
    ls = advance(left, ls, w.actions[i]);
    rs = advance(right, rs, w.actions[i]);
  }
  out.left = ls;
  out.right = rs;
  if (ls.empty() || rs.empty()) return out;
  if (w.divergence.kind == Divergence::Kind::kAction) {
    const Action& last = w.actions.back();
    out.ok = enabled(left, ls, last) != enabled(right, rs, last);
    if (out.ok) {
      (enabled(left, ls, last) ? out.left : out.right) =
          advance(enabled(left, ls, last) ? left : right,
                  enabled(left, ls, last) ? ls : rs, last);
    }
    return out;
  }
  // Frame divergence: the test separates some left frame from every
  // right frame (or the other way round).
  const Distinguisher& d = *w.divergence.distinguisher;
  auto equivalent = [&](const Config& l, const Config& r) {
    FramePair fp{{l.frame}, {r.frame}};
    return statically_equivalent(fp, bounds.depth, left.context()).equivalent;
  };
  for (const Config& l : ls) {
    bool unmatched = std::none_of(rs.begin(), rs.end(),
                                  [&](const Config& r) { return equivalent(l, r); });
    bool separated = std::any_of(rs.begin(), rs.end(), [&](const Config& r) {
      return d.separates(l.frame, r.frame);
    });
    if (unmatched && separated) out.ok = true;
  }
  for (const Config& r : rs) {
    bool unmatched = std::none_of(ls.begin(), ls.end(),
                                  [&](const Config& l) { return equivalent(l, r); });
    bool separated = std::any_of(ls.begin(), ls.end(), [&](const Config& l) {
      return d.separates(l.frame, r.frame);
    });
    if (unmatched && separated) out.ok = true;
  }
  return out;
}

void collect_handles(const Term& t, std::set<int>& out) {
  if (t.is_handle()) out.insert(t.handle_index());
  if (t.is_app()) {
    for (const Term& a : t.args()) collect_handles(a, out);
  }
}

bool mentions(const Term& t, const Term& leaf) {
  if (t == leaf) return true;
  if (t.is_app()) {
    for (const Term& a : t.args()) {
      if (mentions(a, leaf)) return true;
    }
  }
  return false;
}

}  // namespace

bool replay(const Verdict& v, const Model& m1, const Model* m2, const Scenario& s,
            const Bounds& bounds) {
  if (v.result != Result::kAttack || !v.witness) return false;
  Model b = m2 ? m1 : plan_model(m1, v.plan);
  try {
    return replay_trace(v, b, m2, s, bounds).ok;
  } catch (const BoundError&) {
    throw;
  } catch (const Error&) {
    // A recipe that refers past the frame cannot be replayed.
    return false;
  }
}

std::string diagnose(const Verdict& v, const Model& m1, const Model* m2,
                     const Scenario& s, const Bounds& bounds) {
  if (v.result != Result::kAttack || !v.witness) {
    throw Error("nothing to diagnose");
  }
  Model b = m2 ? m1 : plan_model(m1, v.plan);
  Replayed r = replay_trace(v, b, m2, s, bounds);
  if (!r.ok) {
    throw InternalError("attack witness does not replay: " +
                        v.witness->divergence.str());
  }
  ResolvedScenario rs = resolve(s, b);
  const AttackTrace& w = *v.witness;
  std::string out = "ATTACK on " + v.model + " under " + v.scenario + " (" +
                    to_string(v.property);
  if (!v.plan.empty()) out += ", plan " + v.plan;
  out += ")\n";
  if (!rs.revealed.empty()) {
    out += "revealed by corruption:";
    for (const Term& k : rs.revealed) out += " " + k.str();
    out += "\n";
  }
  const std::vector<Term>& fl = r.left.front().frame;
  const std::vector<Term>& fr = r.right.front().frame;
  auto value = [](const Term& recipe, const std::vector<Term>& frame) {
    auto val = evaluate(recipe, frame);
    return val ? val->str() : std::string("fails");
  };
  std::map<int, std::string> origin;
  out += "trace:\n";
  int handle = 0;
  for (std::size_t i = 0; i < w.actions.size(); ++i) {
    const Action& a = w.actions[i];
    out += "  " + std::to_string(i + 1) + ". " + a.str();
    if (a.kind == Action::Kind::kOut) {
      handle = a.term.handle_index();
      origin[handle] = a.channel.str();
      if (static_cast<std::size_t>(handle) <= fl.size() &&
          static_cast<std::size_t>(handle) <= fr.size()) {
        out += "    payload " + fl[handle - 1].str() + " | " + fr[handle - 1].str();
      }
    } else if (a.kind == Action::Kind::kIn) {
      std::set<int> hs;
      collect_handles(a.term, hs);
      if (hs.empty() || *hs.rbegin() <= static_cast<int>(std::min(fl.size(), fr.size()))) {
        out += "    sends " + value(a.term, fl) + " | " + value(a.term, fr);
      }
    }
    out += "\n";
  }
  out += "divergence: " + w.divergence.str() + "\n";
  if (const auto& d = w.divergence.distinguisher) {
    for (const Term& k : rs.revealed) {
      if (mentions(d->first, k) || (d->second.valid() && mentions(d->second, k))) {
        out += "root: the test uses the revealed key " + k.str() + "\n";
      }
    }
    std::set<int> hs;
    collect_handles(d->first, hs);
    if (d->second.valid()) collect_handles(d->second, hs);
    for (int h : hs) {
      auto it = origin.find(h);
      if (it != origin.end()) {
        out += "root: w" + std::to_string(h) + " observed on " + it->second + "\n";
      }
    }
  }
  out += "replay: confirmed on both sides\n";
  return out;
}

}  // namespace ballotscope
