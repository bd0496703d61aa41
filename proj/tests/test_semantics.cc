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

#include <doctest.h>

#include <algorithm>
#include <deque>
#include <random>
#include <unordered_map>
#include <unordered_set>

#include "ballotscope/error.hh"
#include "ballotscope/model.hh"
#include "ballotscope/scenario.hh"
#include "ballotscope/semantics.hh"
#include "ballotscope/starvote.hh"

using namespace ballotscope;

namespace {

Model prepare(std::string_view src) {
  return instantiate(parse_model(src), {});
}

Scenario full_on(const std::string& channel) {
  Scenario s;
  s.name = "full";
  s.rules.push_back(CapabilityRule{channel, {}, {}, kFullCaps});
  return s;
}

Model star(const char* ext, int voters) {
  StarParams p;
  p.voters = voters;
  p.ext = parse_extensions(ext);
  return ballotscope::project(build_star_model(p), Side::kLeft);
}

// Every reachable configuration with its outgoing transitions.
std::vector<std::pair<Config, std::vector<Transition>>> reach(
    const Semantics& sem, std::size_t cap = 100000) {
  std::vector<std::pair<Config, std::vector<Transition>>> out;
  std::unordered_set<std::string> seen;
  std::deque<Config> queue{sem.initial()};
  seen.insert(queue.front().key());
  while (!queue.empty() && out.size() < cap) {
    Config c = std::move(queue.front());
    queue.pop_front();
    StepResult r = sem.step(c);
    for (const Transition& t : r.transitions) {
      if (seen.insert(t.target.key()).second) queue.push_back(t.target);
    }
    out.emplace_back(std::move(c), std::move(r.transitions));
  }
  return out;
}

Term rename_term(const Term& t,
                 const std::unordered_map<std::string, std::string>& map) {
  if (t.is_name()) {
    auto it = map.find(t.id());
    return it == map.end() ? t : Term::name(it->second, t.is_public());
  }
  if (!t.is_app()) return t;
  std::vector<Term> args;
  for (const Term& a : t.args()) args.push_back(rename_term(a, map));
  return make_term(t.symbol(), std::move(args));
}

void collect_fresh(const Term& t, std::set<std::string>& out) {
  if (t.is_name() && t.id().find('#') != std::string::npos) out.insert(t.id());
  if (t.is_app()) {
    for (const Term& a : t.args()) collect_fresh(a, out);
  }
}

}  // namespace

TEST_CASE("single public output") {
  Model m = prepare("free m.\nchannel c public.\nout(c, m).0\n");
  Lts lts = explore(m, resolve(builtin_scenario("dy1"), m));
  CHECK(lts.states.size() == 2);
  REQUIRE(lts.transitions.size() == 1);
  CHECK(lts.transitions[0].action == "out(c,w1)");
  CHECK(lts.complete);
  CHECK(lts.max_frame == 1);
}

TEST_CASE("stop has no behaviour") {
  Model m = prepare("0\n");
  Lts lts = explore(m, resolve(builtin_scenario("dy1"), m));
  CHECK(lts.states.size() == 1);
  CHECK(lts.transitions.empty());
}

TEST_CASE("input without sender or injection is blocked") {
  Model m = prepare("channel c private.\nin(c, x).0\n");
  Lts lts = explore(m, resolve(builtin_scenario("dy1"), m));
  CHECK(lts.states.size() == 1);
  CHECK(lts.transitions.empty());
}

TEST_CASE("barrier fires once all processes reach it") {
  Model m = prepare(
      "free m.\nchannel c public.\n(barrier 1. out(c, m).0 | barrier 1. 0)\n");
  Semantics sem(m, resolve(builtin_scenario("dy1"), m));
  StepResult r = sem.step(sem.initial());
  REQUIRE(r.transitions.size() == 1);
  CHECK(r.transitions[0].action.str() == "phase(1)");
  CHECK(r.transitions[0].target.phase == 1);
  StepResult r2 = sem.step(r.transitions[0].target);
  REQUIRE(r2.transitions.size() == 1);
  CHECK(r2.transitions[0].action.str() == "out(c,w1)");
}

TEST_CASE("barrier waits for pending work") {
  Model m = prepare(
      "free m.\nchannel c public.\n(out(c, m). barrier 1. 0 | barrier 1. 0)\n");
  Semantics sem(m, resolve(builtin_scenario("dy1"), m));
  StepResult r = sem.step(sem.initial());
  REQUIRE(r.transitions.size() == 1);
  CHECK(r.transitions[0].action.str() == "out(c,w1)");
}

TEST_CASE("private rendezvous is silent") {
  Model m = prepare(
      "free m.\nchannel c private.\nchannel d public.\n"
      "(out(c, hash(m)).0 | in(c, x). out(d, x).0)\n");
  Semantics sem(m, resolve(builtin_scenario("dy1"), m));
  Config init = sem.initial();
  StepResult r = sem.step(init);
  REQUIRE(r.transitions.size() == 1);
  CHECK(r.transitions[0].action.str() == "out(d,w1)");
  CHECK(r.transitions[0].target.frame[0].str() == "hash(m)");
}

TEST_CASE("intercepted output is not delivered") {
  Model m = prepare(
      "free m.\nchannel c private.\nchannel d public.\n"
      "(out(c, m).0 | in(c, x). out(d, x).0)\n");
  Semantics sem(m, resolve(full_on("c"), m));
  StepResult r = sem.step(sem.initial());
  std::vector<std::string> labels;
  for (const auto& t : r.transitions) labels.push_back(t.action.str());
  CHECK(std::find(labels.begin(), labels.end(), "out(c,w1)") != labels.end());
  for (const auto& t : r.transitions) {
    if (t.action.str() != "out(c,w1)") continue;
    // The receiver still waits; only an injection can feed it.
    for (const auto& u : sem.step(t.target).transitions) {
      CHECK(u.action.kind == Action::Kind::kIn);
    }
  }
}

TEST_CASE("injection enumerates matching recipes") {
  Model m = prepare(
      "free m.\nchannel c private.\nchannel d public.\n"
      "in(c, pk(x)). out(d, x).0\n");
  Scenario s = full_on("c");
  s.rules.push_back(CapabilityRule{"public", {}, {}, kObserve});
  Semantics sem(m, resolve(s, m));
  StepResult r = sem.step(sem.initial());
  REQUIRE_FALSE(r.transitions.empty());
  for (const auto& t : r.transitions) {
    CHECK(t.action.kind == Action::Kind::kIn);
    CHECK(t.action.term.str().rfind("pk(", 0) == 0);
  }
}

TEST_CASE("injection depth limits injected recipes") {
  Model m = prepare("free m.\nchannel c private.\nin(c, x). 0\n");
  Scenario s = full_on("c");
  Bounds shallow;
  shallow.inject_depth = 1;
  Semantics full(m, resolve(s, m)), leaves(m, resolve(s, m), shallow);
  auto wide = full.step(full.initial()).transitions;
  auto narrow = leaves.step(leaves.initial()).transitions;
  CHECK(narrow.size() < wide.size());
  REQUIRE_FALSE(narrow.empty());
  for (const auto& t : narrow) {
    CHECK(t.action.term.str().find('(') == std::string::npos);
  }
}

TEST_CASE("conditionals use normalized equality") {
  Model m = prepare(
      "free m.\nprivate k.\nchannel d public.\n"
      "new r. if dec(penc(m, r, pk(k)), k) = m then out(d, m).0 else 0\n");
  Lts lts = explore(m, resolve(builtin_scenario("dy1"), m));
  CHECK(lts.transitions.size() == 1);
}

TEST_CASE("state bound makes exploration incomplete") {
  Model m = star("", 2);
  Bounds b;
  b.max_states = 3;
  Lts lts = explore(m, resolve(builtin_scenario("dy2"), m), b);
  CHECK_FALSE(lts.complete);
  CHECK(lts.bound_hit == "states");
}

TEST_CASE("exploration is deterministic") {
  Model m = star("", 2);
  ResolvedScenario s = resolve(builtin_scenario("dy2"), m);
  Bounds b;
  b.max_states = 2000;
  CHECK(explore(m, s, b).to_json() == explore(m, s, b).to_json());
  Model c = star("counting", 2);
  ResolvedScenario s1 = resolve(builtin_scenario("dy1"), c);
  CHECK(explore(c, s1).to_json() == explore(c, s1).to_json());
}

TEST_CASE("property: frames grow, phases increase, hidden channels stay hidden") {
  for (const char* ext : {"", "counting"}) {
    for (const char* scen : {"dy1", "dy2", "dy3"}) {
      CAPTURE(ext);
      CAPTURE(scen);
      Model m = star(ext, std::string(scen) == "dy3" ? 3 : 2);
      ResolvedScenario rs = resolve(builtin_scenario(scen), m);
      Semantics sem(m, rs);
      for (const auto& [c, trans] : reach(sem, std::string(scen) == "dy2" ? 150 : 1500)) {
        for (const Transition& t : trans) {
          const Config& d = t.target;
          REQUIRE(d.frame.size() >= c.frame.size());
          CHECK(std::equal(c.frame.begin(), c.frame.end(), d.frame.begin()));
          CHECK(d.phase >= c.phase);
          switch (t.action.kind) {
            case Action::Kind::kOut:
              CHECK((rs.caps_of(t.action.channel) & kObserve) != 0);
              CHECK(d.frame.size() == c.frame.size() + 1);
              break;
            case Action::Kind::kIn:
              CHECK((rs.caps_of(t.action.channel) & kInject) != 0);
              break;
            case Action::Kind::kPhase:
              CHECK(t.action.phase > c.phase);
              CHECK(d.phase == t.action.phase);
              break;
            default:
              CHECK(d.frame.size() == c.frame.size());
              break;
          }
        }
      }
    }
  }
}

TEST_CASE("property: canonical keys ignore process order and fresh names") {
  std::mt19937 rng(5);
  Model m = star("counting", 3);
  Semantics sem(m, resolve(builtin_scenario("dy3"), m));
  int checked = 0;
  for (const auto& [c, trans] : reach(sem, 1000)) {
    std::set<std::string> fresh;
    for (const Term& t : c.frame) collect_fresh(t, fresh);
    std::unordered_map<std::string, std::string> map;
    std::vector<std::string> ids(fresh.begin(), fresh.end());
    std::vector<std::string> perm = ids;
    std::shuffle(perm.begin(), perm.end(), rng);
    for (std::size_t i = 0; i < ids.size(); ++i) {
      map[ids[i]] = perm[i].substr(0, perm[i].find('#')) + "#9" +
                    std::to_string(i);
    }
    Config d = c;
    for (Term& t : d.frame) t = rename_term(t, map);
    for (Proc& p : d.procs) p = rename_names(p, map);
    std::shuffle(d.procs.begin(), d.procs.end(), rng);
    if (ids.empty() || perm == ids) {
      CHECK(d.key() == c.key());
    } else {
      // Renaming across different base names changes the masked text;
      // renaming within a base name must not change the key.
      std::unordered_map<std::string, std::string> same;
      for (const auto& id : ids) same[id] = id.substr(0, id.find('#')) + "#7" + id;
      Config e = c;
      for (Term& t : e.frame) t = rename_term(t, same);
      for (Proc& p : e.procs) p = rename_names(p, same);
      std::shuffle(e.procs.begin(), e.procs.end(), rng);
      CHECK(e.key() == c.key());
    }
    ++checked;
  }
  CHECK(checked > 100);
}

TEST_CASE("counting model keeps plaintexts secret before the tally") {
  Model m = star("counting", 2);
  Semantics sem(m, resolve(builtin_scenario("dy1"), m));
  bool tallied = false;
  for (const auto& [c, trans] : reach(sem)) {
    for (const Term& t : c.frame) {
      bool plain = t.str() == "a" || t.str() == "b";
      if (c.phase == 0) CHECK_FALSE(plain);
      tallied |= plain;
    }
  }
  CHECK(tallied);
}

TEST_CASE("every published ballot carries a valid proof") {
  Model m = star("", 2);
  Semantics sem(m, resolve(builtin_scenario("dy1"), m));
  int posts = 0;
  for (const auto& [c, trans] : reach(sem)) {
    for (const Transition& t : trans) {
      if (t.action.kind != Action::Kind::kOut) continue;
      if (t.action.channel.tag != "post") continue;
      const Term& entry = t.target.frame.back();
      REQUIRE(entry.is_app());
      REQUIRE(entry.args().size() >= 2);
      CHECK(normalize(make_term(sig::checkzkp(), {entry.arg(1)})).str() == "ok");
      ++posts;
    }
  }
  CHECK(posts > 0);
}

TEST_CASE("ballot identifiers stay distinct across sessions") {
  Model m = instantiate(load_model("star_base"), InstanceParams{3, {"a", "b"}, {}});
  std::string text = render_model(m);
  CHECK(text.find("bid#1") != std::string::npos);
  CHECK(text.find("bid#2") != std::string::npos);
  CHECK(text.find("bid#3") != std::string::npos);
  Model hc = build_hashchain_model(StarParams{});
  std::string h = render_model(hc);
  CHECK(h.find("bid1#1") != std::string::npos);
  CHECK(h.find("bid2#1") != std::string::npos);
}

TEST_CASE("observable traces") {
  Model m = star("", 2);
  Semantics sem(m, resolve(builtin_scenario("dy1"), m));
  auto traces = observable_traces(sem, 5);
  REQUIRE(traces.size() == 2);
  CHECK(observable_traces(sem, 1).size() == 1);
  for (const auto& tr : traces) {
    REQUIRE_FALSE(tr.empty());
    for (const Action& a : tr) CHECK(a.observable());
  }
  CHECK(traces[0][0].str() == "out(W.pub.post,w1)");
  CHECK(observable_traces(sem, 0).empty());
}

TEST_CASE("hidden events do not leak the vote under DY1") {
  Model m = star("", 2);
  Semantics sem(m, resolve(builtin_scenario("dy1"), m));
  for (const auto& [c, trans] : reach(sem)) {
    for (const Term& t : c.frame) {
      CHECK_FALSE(t.str() == "a");
      CHECK_FALSE(t.str() == "b");
    }
  }
}

TEST_CASE("parse_action") {
  Action a = parse_action("in(v2.T.vote,w1)");
  CHECK(a.kind == Action::Kind::kIn);
  CHECK(a.term.is_handle());
  CHECK(a.str() == "in(v2.T.vote,w1)");
  CHECK(parse_action("out(W.pub.post,w3)").str() == "out(W.pub.post,w3)");
  CHECK(parse_action("phase(1)").phase == 1);
  CHECK_THROWS_AS(parse_action("jump(x)"), Error);
}
