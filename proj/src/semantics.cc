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

#include "ballotscope/semantics.hh"

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <deque>
#include <fstream>
#include <map>
#include <regex>
#include <set>

#include <json.hpp>

#include "ballotscope/error.hh"
#include "lexer.hh"
#include "term_parser.hh"

namespace ballotscope {

namespace {

using K = Process::Kind;

bool is_broadcast(const Channel& ch, const Model& m) {
  if (ch.to == "pub") return true;
  if (ch.is_triple()) return false;
  const ChannelDecl* d = m.find_channel(ch);
  return d && d->visibility == Visibility::kPublic;
}

void count_usage(const Proc& p, std::map<Channel, std::pair<int, int>>& use) {
  if (p->kind == K::kOutput) ++use[p->channel].first;
  if (p->kind == K::kInput) ++use[p->channel].second;
  for (const Proc& n : p->next) count_usage(n, use);
}

void collect_channels(const Proc& p, std::set<Channel>& outs,
                      std::set<Channel>& ins) {
  if (p->kind == K::kOutput) outs.insert(p->channel);
  if (p->kind == K::kInput) ins.insert(p->channel);
  for (const Proc& n : p->next) collect_channels(n, outs, ins);
}

void typed_vars(const Term& t, std::vector<std::pair<std::string, std::string>>& out) {
  if (t.is_var()) {
    if (!t.type().empty()) out.emplace_back(t.id(), t.type());
  } else if (t.is_app()) {
    for (const Term& a : t.args()) typed_vars(a, out);
  }
}

std::string side_name(Side s) { return s == Side::kLeft ? "left" : "right"; }

}  // namespace

// ---------------------------------------------------------------------------
// Actions

std::string Action::str() const {
  switch (kind) {
    case Kind::kOut:
      return "out(" + channel.str() + "," + term.str() + ")";
    case Kind::kIn:
      return "in(" + channel.str() + "," + term.str() + ")";
    case Kind::kEvent:
      return "event(" + label + ")";
    case Kind::kPhase:
      return "phase(" + std::to_string(phase) + ")";
    case Kind::kTau:
      break;
  }
  return "tau";
}

Action parse_action(std::string_view text) {
  detail::TokenStream ts(detail::tokenize(text));
  Action a;
  std::string head = ts.expect_ident().text;
  if (head == "tau") {
    a.kind = Action::Kind::kTau;
  } else if (head == "event") {
    ts.expect("(");
    a.kind = Action::Kind::kEvent;
    a.label = ts.expect_ident().text;
    ts.expect(")");
  } else if (head == "phase") {
    ts.expect("(");
    a.kind = Action::Kind::kPhase;
    if (ts.peek().kind != detail::Token::Kind::kNumber) ts.fail("expected number");
    a.phase = std::stoi(ts.next().text);
    ts.expect(")");
  } else if (head == "out" || head == "in") {
    a.kind = head == "out" ? Action::Kind::kOut : Action::Kind::kIn;
    ts.expect("(");
    std::string first = ts.expect_ident().text;
    if (ts.accept(".")) {
      std::string to = ts.expect_ident().text;
      ts.expect(".");
      a.channel = Channel::triple(first, to, ts.expect_ident().text);
    } else {
      a.channel = Channel::plain(first);
    }
    ts.expect(",");
    static const std::regex handle_re("w([0-9]+)");
    a.term = detail::parse_term(ts, [](const detail::Token& tok,
                                       detail::TokenStream&) {
      std::smatch mt;
      if (std::regex_match(tok.text, mt, handle_re)) {
        return Term::handle(std::stoi(mt[1]));
      }
      return Term::name(tok.text, true);
    });
    ts.expect(")");
  } else {
    ts.fail("expected action");
  }
  if (!ts.at_end()) ts.fail("expected end of action");
  return a;
}

// ---------------------------------------------------------------------------
// Configurations

std::string Config::key() const {
  std::string out = std::to_string(phase);
  out += stuck ? "!|" : "|";
  NameCanon canon;
  for (const Term& t : frame) {
    render_term(t, out, &canon);
    out += ';';
  }
  // Order processes by a rendering that numbers only names fixed by the
  // frame, so that the result does not depend on the incoming order.
  canon.freeze(true);
  std::vector<std::pair<std::string, const Proc*>> order;
  order.reserve(procs.size());
  for (const Proc& p : procs) {
    std::string text;
    render_process(p, text, &canon);
    order.emplace_back(std::move(text), &p);
  }
  canon.freeze(false);
  std::stable_sort(order.begin(), order.end(),
                   [](const auto& a, const auto& b) { return a.first < b.first; });
  for (const auto& [text, p] : order) {
    out += '|';
    render_process(*p, out, &canon);
  }
  return out;
}

std::string Config::frame_key() const {
  std::string out;
  NameCanon canon;
  for (const Term& t : frame) {
    render_term(t, out, &canon);
    out += ';';
  }
  return out;
}

std::string Divergence::str() const {
  switch (kind) {
    case Kind::kAction:
      return "action enabled on one side only: " + detail;
    case Kind::kCondition:
      return "conditional disagreement: " + detail;
    case Kind::kFrame:
      return "frame distinguisher: " + detail;
  }
  return detail;
}

// ---------------------------------------------------------------------------
// Resource bounds

std::size_t memory_cap_from_env() {
  const char* v = std::getenv("BALLOTSCOPE_MAX_MEM");
  if (!v || !*v) return 0;
  char* end = nullptr;
  unsigned long long n = std::strtoull(v, &end, 10);
  if (end == v) throw Error("BALLOTSCOPE_MAX_MEM must be a number of MiB");
  return static_cast<std::size_t>(n);
}

std::size_t resident_mb() {
  std::ifstream statm("/proc/self/statm");
  std::size_t pages = 0, resident = 0;
  if (!(statm >> pages >> resident)) return 0;
  return resident * 4096 / (1024 * 1024);
}

// ---------------------------------------------------------------------------
// Semantics

struct Semantics::Flow {
  enum Result { kBoth, kNone, kLeftOnly, kRightOnly };
  Result result = kNone;
  Substitution sigma;
};

Semantics::Semantics(const Model& m, ResolvedScenario s, Bounds bounds)
    : model_(m), scen_(std::move(s)), bounds_(bounds) {
  if (!m.instantiated) throw ModelError("model must be instantiated");
  ctx_ = scen_.context();
  bi_ = m.is_biprocess();
  for (const auto& c : m.candidates) candidates_.push_back(Term::name(c, true));
  for (const Role& r : m.roles) count_usage(r.body, usage_);
  if (bounds_.max_memory_mb == 0) bounds_.max_memory_mb = memory_cap_from_env();
}

int Semantics::count_outputs(const Channel& ch) const {
  auto it = usage_.find(ch);
  return it == usage_.end() ? 0 : it->second.first;
}

int Semantics::count_inputs(const Channel& ch) const {
  auto it = usage_.find(ch);
  return it == usage_.end() ? 0 : it->second.second;
}

bool Semantics::fires_alone(const Channel& ch, Caps caps) const {
  return (caps & kIntercept) || is_broadcast(ch, model_);
}

namespace {

// Matches one side; typed variables only accept candidate names.
std::optional<Substitution> match_one(const Term& pattern, const Term& value,
                                      const std::vector<Term>& candidates) {
  auto s = match(pattern, value);
  if (!s) return s;
  std::vector<std::pair<std::string, std::string>> typed;
  typed_vars(pattern, typed);
  for (const auto& [id, type] : typed) {
    if (type != "cand") continue;
    const Term& v = s->at(id);
    if (std::find(candidates.begin(), candidates.end(), v) == candidates.end()) {
      return std::nullopt;
    }
  }
  return s;
}

}  // namespace

namespace {

struct Matcher {
  bool bi;
  const std::vector<Term>& candidates;

  // value is a biterm when bi.
  std::pair<int, Substitution> operator()(const Term& pattern,
                                          const Term& value) const {
    if (!bi || !value.has_choice()) {
      auto s = match_one(pattern, value, candidates);
      return {s ? 3 : 0, s ? *s : Substitution{}};
    }
    return sides(pattern, ballotscope::project(value, Side::kLeft),
                 ballotscope::project(value, Side::kRight));
  }

  // Same, with the two sides of the value already split.
  std::pair<int, Substitution> sides(const Term& pattern, const Term& lv,
                                     const Term& rv) const {
    if (lv == rv) {
      auto s = match_one(pattern, lv, candidates);
      return {s ? 3 : 0, s ? *s : Substitution{}};
    }
    auto l = match_one(pattern, lv, candidates);
    auto r = match_one(pattern, rv, candidates);
    if (l && r) {
      Substitution s;
      for (const auto& [id, lv] : *l) s[id] = combine(lv, r->at(id));
      return {3, std::move(s)};
    }
    return {(l ? 1 : 0) | (r ? 2 : 0), {}};
  }
};

// 0 = then, 1 = else, 2 = blocked (a destructor failed).
int branch(const Term& l, const Term& r) {
  if (l.has_destructor() || r.has_destructor()) return 2;
  return l == r ? 0 : 1;
}

const char* branch_name(int b) {
  return b == 0 ? "then" : b == 1 ? "else" : "blocked";
}

}  // namespace

void Semantics::settle(Config& c, std::optional<Divergence>& div) const {
  Matcher matcher{bi_, candidates_};
  auto diverge = [&](Divergence::Kind k, std::string detail) {
    if (!div) div = Divergence{k, std::move(detail), std::nullopt};
  };
  std::vector<Proc> work = std::move(c.procs);
  std::reverse(work.begin(), work.end());
  std::vector<Proc> done;
  for (;;) {
    while (!work.empty()) {
      Proc p = std::move(work.back());
      work.pop_back();
      switch (p->kind) {
        case K::kStop:
          break;
        case K::kParallel:
          for (auto it = p->next.rbegin(); it != p->next.rend(); ++it) {
            work.push_back(*it);
          }
          break;
        case K::kRestrict:
          work.push_back(p->cont());
          break;
        case K::kIfEq: {
          Term l = normalize(p->first), r = normalize(p->second);
          int bl = branch(ballotscope::project(l, Side::kLeft), ballotscope::project(r, Side::kLeft));
          int br = bi_ ? branch(ballotscope::project(l, Side::kRight), ballotscope::project(r, Side::kRight))
                       : bl;
          if (bl != br) {
            diverge(Divergence::Kind::kCondition,
                    "if " + p->first.str() + " = " + p->second.str() +
                        " takes " + branch_name(bl) + " on the left and " +
                        branch_name(br) + " on the right");
            break;
          }
          if (bl < 2) work.push_back(p->next[bl]);
          break;
        }
        case K::kBarrier:
          if (p->phase <= c.phase) {
            work.push_back(p->cont());
          } else {
            done.push_back(std::move(p));
          }
          break;
        case K::kOutput: {
          Term payload = normalize(p->first);
          bool ml = is_message(ballotscope::project(payload, Side::kLeft));
          bool mr = bi_ ? is_message(ballotscope::project(payload, Side::kRight)) : ml;
          if (ml != mr) {
            diverge(Divergence::Kind::kAction,
                    "out(" + p->channel.str() + "," + payload.str() +
                        ") is a message on the " +
                        side_name(ml ? Side::kLeft : Side::kRight) +
                        " only");
            break;
          }
          if (!ml) break;
          if (payload != p->first) {
            p = output(p->channel, payload, p->cont(), p->pos);
          }
          Caps caps = scen_.caps_of(p->channel);
          if (caps == 0 && fires_alone(p->channel, caps) &&
              count_inputs(p->channel) == 0) {
            work.push_back(p->cont());
          } else {
            done.push_back(std::move(p));
          }
          break;
        }
        case K::kDiff:
          throw ModelError("process-level choice with different shapes at " +
                           std::to_string(p->pos.line) + ":" +
                           std::to_string(p->pos.column));
        default:
          done.push_back(std::move(p));
      }
    }
    // One eager rendezvous per round on unobserved single-use channels.
    bool fired = false;
    for (std::size_t i = 0; i < done.size() && !fired; ++i) {
      const Proc& o = done[i];
      if (o->kind != K::kOutput || scen_.caps_of(o->channel) != 0 ||
          count_outputs(o->channel) != 1 || count_inputs(o->channel) != 1) {
        continue;
      }
      for (std::size_t j = 0; j < done.size(); ++j) {
        const Proc& in = done[j];
        if (in->kind != K::kInput || in->channel != o->channel) continue;
        auto [res, sigma] = matcher(in->first, o->first);
        if (res == 3) {
          work.push_back(o->cont());
          work.push_back(substitute(in->cont(), sigma));
          done.erase(done.begin() + std::max(i, j));
          done.erase(done.begin() + std::min(i, j));
          fired = true;
        } else if (res != 0) {
          diverge(Divergence::Kind::kAction,
                  "communication on " + o->channel.str() + " succeeds on the " +
                      side_name(res == 1 ? Side::kLeft : Side::kRight) +
                      " only");
        }
        break;
      }
    }
    if (!fired) break;
    for (auto& p : done) work.push_back(std::move(p));
    done.clear();
    std::reverse(work.begin(), work.end());
  }

  // Processes that can never act again are dropped; they still keep every
  // later barrier closed.
  std::vector<std::set<Channel>> outs(done.size()), ins(done.size());
  for (std::size_t i = 0; i < done.size(); ++i) {
    collect_channels(done[i], outs[i], ins[i]);
  }
  auto partner = [&](std::size_t self, const Channel& ch, bool want_out) {
    for (std::size_t k = 0; k < done.size(); ++k) {
      if (k != self && (want_out ? outs[k] : ins[k]).count(ch)) return true;
    }
    return false;
  };
  std::vector<Proc> live;
  for (std::size_t i = 0; i < done.size(); ++i) {
    const Proc& p = done[i];
    bool dead = false;
    if (p->kind == K::kInput) {
      Caps caps = scen_.caps_of(p->channel);
      dead = !(caps & kInject) && !partner(i, p->channel, true);
    } else if (p->kind == K::kOutput) {
      Caps caps = scen_.caps_of(p->channel);
      dead = !fires_alone(p->channel, caps) && !partner(i, p->channel, false);
    }
    if (dead) {
      c.stuck = true;
    } else {
      live.push_back(p);
    }
  }
  std::stable_sort(live.begin(), live.end(), [](const Proc& a, const Proc& b) {
    int cmp = a->masked().compare(b->masked());
    if (cmp != 0) return cmp < 0;
    return render_process(a) < render_process(b);
  });
  c.procs = std::move(live);
}

// Exchanges the right-hand sides of the continuations of the two swapped
// voter instances, role by role. `next` holds the continuations in the
// order of `procs`.
static std::optional<std::string> swap_instances(const std::vector<Proc>& procs,
                                                 int phase,
                                                 std::vector<Proc>& next) {
  std::map<std::string, std::pair<std::vector<std::size_t>, std::vector<std::size_t>>>
      by_role;
  for (std::size_t i = 0; i < procs.size(); ++i) {
    const Proc& p = procs[i];
    if (p->phase != phase || p->name.empty()) continue;
    auto slash = p->name.find('/');
    std::string role = p->name.substr(0, slash);
    std::string inst = p->name.substr(slash + 1);
    if (inst == "1") by_role[role].first.push_back(i);
    if (inst == "2") by_role[role].second.push_back(i);
  }
  if (by_role.empty()) return "no instances of the swapped voters reached it";
  for (const auto& [role, pair] : by_role) {
    if (pair.first.size() != pair.second.size()) {
      return "role " + role + " reached it with one swapped instance only";
    }
    for (std::size_t k = 0; k < pair.first.size(); ++k) {
      std::size_t a = pair.first[k], b = pair.second[k];
      auto pa = merge(project(next[a], Side::kLeft), project(next[b], Side::kRight));
      auto pb = merge(project(next[b], Side::kLeft), project(next[a], Side::kRight));
      if (!pa || !pb) return "continuations of role " + role + " differ in shape";
      next[a] = *pa;
      next[b] = *pb;
    }
  }
  return std::nullopt;
}

Config Semantics::initial(std::optional<Divergence>* div) const {
  Config c;
  for (const Role& r : model_.roles) c.procs.push_back(r.body);
  std::optional<Divergence> d;
  settle(c, d);
  if (div) *div = d;
  return c;
}

const Enumeration& Semantics::recipes(const Config& c) const {
  return injections(c).e;
}

const Semantics::Injections& Semantics::injections(const Config& c) const {
  std::string key;
  for (const Term& t : c.frame) key += t.str() + ";";
  auto it = enum_cache_.find(key);
  if (it != enum_cache_.end()) return *it->second;
  std::vector<Term> left, right;
  for (const Term& t : c.frame) {
    left.push_back(ballotscope::project(t, Side::kLeft));
    right.push_back(ballotscope::project(t, Side::kRight));
  }
  std::vector<const std::vector<Term>*> frames{&left};
  if (bi_) frames.push_back(&right);
  auto inj = std::make_shared<Injections>();
  inj->e = enumerate_classes(frames, inject_depth(), ctx_);
  for (std::size_t k = 0; k < inj->e.classes.size(); ++k) {
    const RecipeClass& rc = inj->e.classes[k];
    // Only messages can be sent; a failed computation sends nothing.
    if (!is_message(rc.values[0]) || (bi_ && !is_message(rc.values[1]))) continue;
    inj->sendable.emplace_back(k, bi_ ? combine(rc.values[0], rc.values[1])
                                      : rc.values[0]);
  }
  if (enum_cache_.size() > 20000) enum_cache_.clear();
  return *enum_cache_.emplace(std::move(key), std::move(inj)).first->second;
}

StepResult Semantics::step(const Config& c) const {
  return successors(c, false);
}

StepResult Semantics::silent_step(const Config& c) const {
  return successors(c, true);
}

StepResult Semantics::successors(const Config& c, bool silent_only) const {
  StepResult r;
  Matcher matcher{bi_, candidates_};
  auto diverge = [&](std::string detail) {
    if (!r.divergence) {
      r.divergence = Divergence{Divergence::Kind::kAction, std::move(detail),
                                std::nullopt};
    }
  };
  auto emit = [&](Action a, Config next) {
    std::optional<Divergence> d;
    settle(next, d);
    if (d && !r.divergence) {
      d->detail = "after " + a.str() + ": " + d->detail;
      r.divergence = d;
    }
    r.transitions.push_back({std::move(a), std::move(next)});
  };
  auto without = [&](std::initializer_list<std::size_t> skip) {
    Config n;
    n.frame = c.frame;
    n.phase = c.phase;
    n.stuck = c.stuck;
    for (std::size_t k = 0; k < c.procs.size(); ++k) {
      if (std::find(skip.begin(), skip.end(), k) == skip.end()) {
        n.procs.push_back(c.procs[k]);
      }
    }
    return n;
  };

  for (std::size_t i = 0; i < c.procs.size(); ++i) {
    const Proc& p = c.procs[i];
    if (p->kind == K::kOutput) {
      Caps caps = scen_.caps_of(p->channel);
      if (silent_only && (caps & kObserve)) continue;
      auto send = [&](Config n) {
        Action a;
        if (caps & kObserve) {
          n.frame.push_back(p->first);
          a.kind = Action::Kind::kOut;
          a.channel = p->channel;
          a.term = Term::handle(static_cast<int>(n.frame.size()));
        }
        return std::make_pair(std::move(a), std::move(n));
      };
      if (fires_alone(p->channel, caps)) {
        auto [a, n] = send(without({i}));
        n.procs.push_back(p->cont());
        emit(std::move(a), std::move(n));
      }
      if (caps & kIntercept) continue;
      for (std::size_t j = 0; j < c.procs.size(); ++j) {
        const Proc& q = c.procs[j];
        if (q->kind != K::kInput || q->channel != p->channel) continue;
        auto [res, sigma] = matcher(q->first, p->first);
        if (res == 3) {
          auto [a, n] = send(without({i, j}));
          n.procs.push_back(p->cont());
          n.procs.push_back(substitute(q->cont(), sigma));
          emit(std::move(a), std::move(n));
        } else if (res != 0) {
          diverge("communication on " + p->channel.str() + " succeeds on the " +
                  side_name(res == 1 ? Side::kLeft : Side::kRight) + " only");
        }
      }
    } else if (silent_only) {
      continue;
    } else if (p->kind == K::kInput) {
      Caps caps = scen_.caps_of(p->channel);
      if (!(caps & kInject)) continue;
      const Injections& inj = injections(c);
      for (const auto& [k, value] : inj.sendable) {
        const RecipeClass& rc = inj.e.classes[k];
        auto [res, sigma] = bi_ ? matcher.sides(p->first, rc.values[0], rc.values[1])
                                : matcher(p->first, value);
        Action a;
        a.kind = Action::Kind::kIn;
        a.channel = p->channel;
        a.term = rc.recipe;
        if (res == 3) {
          Config n = without({i});
          n.procs.push_back(substitute(p->cont(), sigma));
          emit(std::move(a), std::move(n));
        } else if (res != 0) {
          diverge(a.str() + " is accepted on the " +
                  side_name(res == 1 ? Side::kLeft : Side::kRight) + " only");
        }
      }
    } else if (p->kind == K::kEvent) {
      Action a;
      a.kind = Action::Kind::kEvent;
      a.label = p->name;
      Config n = without({i});
      n.procs.push_back(p->cont());
      emit(std::move(a), std::move(n));
    }
  }

  bool all_barriers = !silent_only && !c.procs.empty() && !c.stuck &&
                      std::all_of(c.procs.begin(), c.procs.end(), [](const Proc& p) {
                        return p->kind == K::kBarrier;
                      });
  if (all_barriers) {
    int j = c.procs.front()->phase;
    for (const Proc& p : c.procs) j = std::min(j, p->phase);
    Config n;
    n.frame = c.frame;
    n.phase = j;
    for (const Proc& p : c.procs) n.procs.push_back(p->phase == j ? p->cont() : p);
    bool swap = std::any_of(c.procs.begin(), c.procs.end(), [j](const Proc& p) {
      return p->phase == j && p->swap;
    });
    // Swapping only reorders the sides of a biprocess; a plain process
    // has nothing to exchange.
    if (swap && bi_) {
      if (auto failure = swap_instances(c.procs, j, n.procs)) {
        diverge("swap at barrier " + std::to_string(j) + " impossible: " +
                *failure);
        return r;
      }
    }
    Action a;
    a.kind = Action::Kind::kPhase;
    a.phase = j;
    emit(std::move(a), std::move(n));
  }
  return r;
}

Config Semantics::project(const Config& c, Side side) const {
  Config out;
  out.phase = c.phase;
  out.stuck = c.stuck;
  for (const Proc& p : c.procs) out.procs.push_back(ballotscope::project(p, side));
  for (const Term& t : c.frame) out.frame.push_back(ballotscope::project(t, side));
  return out;
}

// ---------------------------------------------------------------------------
// Exploration

std::string Lts::to_json() const {
  nlohmann::json j;
  j["initial"] = 0;
  j["states"] = states;
  j["transitions"] = nlohmann::json::array();
  for (const Edge& e : transitions) {
    j["transitions"].push_back({{"from", e.from}, {"action", e.action}, {"to", e.to}});
  }
  j["complete"] = complete;
  j["bound"] = bound_hit.empty() ? nlohmann::json(nullptr) : nlohmann::json(bound_hit);
  j["frontier"] = frontier;
  return j.dump(2);
}

Lts explore(const Semantics& sem) {
  Lts lts;
  std::unordered_map<std::string, std::size_t> index;
  std::deque<std::pair<std::size_t, Config>> queue;
  Config init = sem.initial();
  std::string k0 = init.key();
  index.emplace(k0, 0);
  lts.states.push_back(std::move(k0));
  queue.emplace_back(0, std::move(init));
  const Bounds& b = sem.bounds();
  while (!queue.empty()) {
    auto [from, c] = std::move(queue.front());
    queue.pop_front();
    lts.max_frame = std::max(lts.max_frame, c.frame.size());
    for (Transition& t : sem.step(c).transitions) {
      std::string k = t.target.key();
      auto it = index.find(k);
      if (it == index.end()) {
        if (lts.states.size() >= b.max_states) {
          lts.complete = false;
          lts.bound_hit = "states";
          queue.emplace_front(from, std::move(c));
          break;
        }
        it = index.emplace(std::move(k), lts.states.size()).first;
        lts.states.push_back(it->first);
        queue.emplace_back(it->second, std::move(t.target));
      }
      lts.transitions.push_back({from, t.action.str(), it->second});
    }
    if (!lts.complete) break;
    if (b.max_memory_mb && (lts.states.size() & 1023) == 0 &&
        resident_mb() > b.max_memory_mb) {
      lts.complete = false;
      lts.bound_hit = "memory";
      break;
    }
  }
  lts.frontier = queue.size();
  return lts;
}

Lts explore(const Model& m, const ResolvedScenario& s, Bounds bounds) {
  return explore(Semantics(m, s, bounds));
}

namespace {

std::vector<Config> tau_closure(const Semantics& sem, std::vector<Config> start) {
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

}  // namespace

std::vector<std::vector<Action>> observable_traces(const Semantics& sem,
                                                   std::size_t limit) {
  std::vector<std::vector<Action>> out;
  if (limit == 0) return out;
  std::deque<std::pair<std::vector<Action>, std::vector<Config>>> queue;
  queue.emplace_back(std::vector<Action>{}, tau_closure(sem, {sem.initial()}));
  while (!queue.empty() && out.size() < limit) {
    auto [trace, set] = std::move(queue.front());
    queue.pop_front();
    std::map<std::string, std::pair<Action, std::vector<Config>>> by_label;
    for (const Config& c : set) {
      for (Transition& t : sem.step(c).transitions) {
        if (!t.action.observable()) continue;
        auto& slot = by_label[t.action.str()];
        slot.first = t.action;
        slot.second.push_back(std::move(t.target));
      }
    }
    for (auto& [label, entry] : by_label) {
      std::vector<Action> next = trace;
      next.push_back(entry.first);
      out.push_back(next);
      if (out.size() == limit) break;
      queue.emplace_back(std::move(next), tau_closure(sem, std::move(entry.second)));
    }
  }
  return out;
}

}  // namespace ballotscope
