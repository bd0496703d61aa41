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

// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any
// failure.

#include <chrono>
#include <cstdio>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "ballotscope/cli.hh"
#include "ballotscope/deduction.hh"
#include "ballotscope/equivalence.hh"
#include "ballotscope/error.hh"
#include "ballotscope/starvote.hh"
#include "ballotscope/term.hh"
#include "oracle.hh"

using namespace ballotscope;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

int failures = 0;

void report(int id, bool ok, const std::string& what, const std::string& detail) {
  std::printf("[%s] criterion %d: %s -- %s\n", ok ? "PASS" : "FAIL", id,
              what.c_str(), detail.c_str());
  std::fflush(stdout);
  if (!ok) ++failures;
}

const std::size_t kMatrixStates = 50'000;

RunConfig config(const std::string& model, const std::string& scenario,
                 Property p) {
  RunConfig cfg;
  cfg.model = model;
  cfg.scenario = scenario;
  cfg.property = p;
  cfg.pair = std::make_pair(std::string("a"), std::string("b"));
  cfg.max_states = kMatrixStates;
  return cfg;
}

struct Cell {
  std::string model, scenario;
  Property property;
  bool supported = true;
  std::string error;
  Verdict verdict;
  double seconds = 0;

  std::string name() const {
    return model + "/" + scenario + "/" + to_string(property);
  }
  std::string fingerprint() const {
    return supported ? verdict.fingerprint() : "unsupported: " + error;
  }
};

const std::vector<std::string> kModels = {"star_base", "star_counting",
                                          "star_pins", "star_hashchain"};
const std::vector<std::string> kScenarios = {"dy1", "dy2", "dy3", "honest"};

std::vector<Cell> run_matrix() {
  std::vector<Cell> cells;
  for (const std::string& m : kModels) {
    for (const std::string& s : kScenarios) {
      for (Property p : {Property::kTraceEq, Property::kDiffEq}) {
        Cell c{m, s, p};
        auto t0 = Clock::now();
        try {
          c.verdict = run_check(config(m, s, p)).verdict;
        } catch (const BoundError& e) {
          c.supported = false;
          c.error = e.what();
        }
        c.seconds = seconds_since(t0);
        cells.push_back(std::move(c));
      }
    }
  }
  return cells;
}

const Cell& cell(const std::vector<Cell>& cells, const std::string& m,
                 const std::string& s, Property p) {
  for (const Cell& c : cells) {
    if (c.model == m && c.scenario == s && c.property == p) return c;
  }
  throw Error("no matrix cell " + m + "/" + s);
}

std::string brief(const Cell& c) {
  if (!c.supported) return c.name() + " unsupported";
  char buf[64];
  std::snprintf(buf, sizeof buf, " %.2fs", c.seconds);
  return c.name() + " " + to_string(c.verdict.result) + buf;
}

bool replays(const RunConfig& cfg, const Verdict& v) {
  Model m = build_model(cfg, "a", "b");
  Scenario s = load_scenario(cfg.scenario);
  if (v.property == Property::kTraceEq) {
    Model l = project(m, Side::kLeft), r = project(m, Side::kRight);
    return replay(v, l, &r, s, cfg.bounds());
  }
  Model planned = plan_model(m, v.plan.empty() ? "none" : v.plan);
  return replay(v, planned, nullptr, s, cfg.bounds());
}

// Criterion 1: trace equivalence on the base model.
void base_trace(const std::vector<Cell>& cells) {
  const Cell& d1 = cell(cells, "star_base", "dy1", Property::kTraceEq);
  const Cell& d2 = cell(cells, "star_base", "dy2", Property::kTraceEq);
  const Cell& d3 = cell(cells, "star_base", "dy3", Property::kTraceEq);
  bool ok = d1.verdict.result == Result::kEquivalent &&
            d2.verdict.result == Result::kAttack &&
            d3.verdict.result == Result::kEquivalent;
  bool rep = ok && replays(config("star_base", "dy2", Property::kTraceEq), d2.verdict);
  bool fast = d1.seconds < 60 && d2.seconds < 60 && d3.seconds < 60;
  report(1, ok && rep && fast, "trace-eq on the base model",
         brief(d1) + "; " + brief(d2) + (rep ? " (witness replays)" : " (no replay)") +
             "; " + brief(d3));
}

// Criterion 2: counting model.
void counting(const std::vector<Cell>& a, const std::vector<Cell>& b) {
  const Cell& d1 = cell(a, "star_counting", "dy1", Property::kTraceEq);
  const Cell& d2 = cell(a, "star_counting", "dy2", Property::kTraceEq);
  const Cell& d3 = cell(a, "star_counting", "dy3", Property::kTraceEq);
  const Cell& again = cell(b, "star_counting", "dy2", Property::kTraceEq);
  bool ok = d1.verdict.result == Result::kEquivalent &&
            d3.verdict.result == Result::kEquivalent &&
            d2.verdict.result != Result::kEquivalent &&
            d2.fingerprint() == again.fingerprint();
  report(2, ok, "counting model",
         brief(d1) + "; " + brief(d2) + " (deterministic: " +
             (d2.fingerprint() == again.fingerprint() ? "yes" : "no") + "); " +
             brief(d3));
}

// Criterion 3: diff-equivalence under the honest scenario.
void honest(const std::vector<Cell>& cells) {
  const Cell& base = cell(cells, "star_base", "honest", Property::kDiffEq);
  const Cell& pins = cell(cells, "star_pins", "honest", Property::kDiffEq);
  const Cell& chain = cell(cells, "star_hashchain", "honest", Property::kDiffEq);
  bool ok = base.verdict.result == Result::kEquivalent && base.seconds < 30 &&
            pins.verdict.result == Result::kEquivalent && pins.seconds < 120 &&
            chain.verdict.result == Result::kEquivalent && chain.seconds < 600;
  report(3, ok, "diff-eq under the honest scenario",
         brief(base) + "; " + brief(pins) + "; " + brief(chain));
}

// Criterion 4: corrupted terminal and ballot box.
void corruption() {
  RunConfig cfg = config("star_base", "corrupt:terminal,ballotbox", Property::kDiffEq);
  Verdict v = run_check(cfg).verdict;
  bool ok = v.result == Result::kAttack && replays(cfg, v);
  report(4, ok, "diff-eq under corruption {terminal, ballotbox}",
         "star_base " + to_string(v.result) +
             (v.witness ? ", witness of " + std::to_string(v.witness->actions.size()) +
                              " actions replays"
                        : ""));
}

// Criterion 5: rewriting.
void rewriting() {
  auto t0 = Clock::now();
  bool ok = true;
  ok &= normalize(parse_term("dec(penc(m,r,pk(sk)),sk)")) == parse_term("m");
  ok &= normalize(parse_term("checksign(sign(sk,m),m,pk(sk))")) == parse_term("ok");
  ok &= normalize(parse_term("checkzkp(zkp(pk(sk),r,m,penc(m,r,pk(sk))))")) ==
        parse_term("ok");
  oracle::TermGen gen(101);
  int checked = 0, agree = 0, idem = 0;
  while (checked < 1000) {
    Term t = gen.any(gen.uniform(1, 6));
    if (oracle::term_depth(t) > 6) continue;
    ++checked;
    Term nf = normalize(t);
    agree += nf == oracle::normalize_anywhere(t, gen.rng());
    idem += normalize(nf) == nf;
  }
  double secs = seconds_since(t0);
  ok &= agree == checked && idem == checked && secs < 10;
  char buf[160];
  std::snprintf(buf, sizeof buf,
                "E1-E3 hold; %d/%d terms agree with the oracle, %d idempotent, %.2fs",
                agree, checked, idem, secs);
  report(5, ok, "equational theory", buf);
}

DeductionContext public_ab() {
  DeductionContext ctx;
  ctx.public_leaves = {Term::name("a", true), Term::name("b", true)};
  return ctx;
}

Knowledge random_knowledge(oracle::TermGen& gen, int max_entries, int depth) {
  Knowledge k;
  int n = gen.uniform(1, max_entries);
  while (static_cast<int>(k.entries.size()) < n) {
    Term t = gen.message(gen.uniform(1, depth));
    if (oracle::term_depth(t) <= depth) k.entries.push_back(t);
  }
  return k;
}

// Criterion 6: deduction.
void deduction() {
  auto t0 = Clock::now();
  oracle::TermGen gen(202);
  DeductionContext ctx = public_ab();
  int queries = 0, agree = 0, witnesses = 0, witness_ok = 0;
  for (int round = 0; round < 500; ++round) {
    Knowledge k = random_knowledge(gen, 4, 4);
    int depth = gen.uniform(1, 3);
    auto ref = oracle::value_closure(k.entries, ctx.public_leaves, depth);
    std::vector<Term> targets;
    std::vector<Term> known;
    for (const auto& [t, size] : ref) known.push_back(t);
    while (targets.size() < 20) {
      if (!known.empty() && gen.uniform(0, 1) == 0) {
        targets.push_back(known[gen.uniform(0, static_cast<int>(known.size()) - 1)]);
      } else {
        targets.push_back(gen.message(gen.uniform(1, 3)));
      }
    }
    for (const Term& t : targets) {
      ++queries;
      auto got = derivable(k, t, depth, ctx);
      agree += got.has_value() == (ref.count(t) == 1);
      if (got) {
        ++witnesses;
        witness_ok += oracle::evaluate(*got, k.entries) == t;
      }
    }
  }
  double secs = seconds_since(t0);
  bool ok = agree == queries && witness_ok == witnesses && secs < 60;
  char buf[200];
  std::snprintf(buf, sizeof buf,
                "%d/%d queries agree with the oracle, %d/%d witnesses re-evaluate, %.2fs",
                agree, queries, witness_ok, witnesses, secs);
  report(6, ok, "deducibility", buf);
}

// Criterion 7: static equivalence.
void static_equivalence() {
  oracle::TermGen gen(303);
  DeductionContext ctx = public_ab();
  int reflexive = 0, symmetric = 0;
  for (int round = 0; round < 200; ++round) {
    Knowledge l, r;
    int len = gen.uniform(1, 3);
    for (int i = 0; i < len; ++i) {
      Term t = gen.message(gen.uniform(1, 3));
      l.entries.push_back(t);
      r.entries.push_back(gen.uniform(0, 1) ? t : gen.message(gen.uniform(1, 3)));
    }
    reflexive += statically_equivalent(FramePair{l, l}, 3, ctx).equivalent;
    symmetric += statically_equivalent(FramePair{l, r}, 3, ctx).equivalent ==
                 statically_equivalent(FramePair{r, l}, 3, ctx).equivalent;
  }
  FramePair ct{Knowledge{{parse_term("penc(a,r1,pk(sk))")}},
               Knowledge{{parse_term("penc(b,r2,pk(sk))")}}};
  bool lib = statically_equivalent(ct, 3, ctx).equivalent;
  bool ref = oracle::statically_equivalent(ct.left.entries, ct.right.entries,
                                           ctx.public_leaves, 3);
  bool ok = reflexive == 200 && symmetric == 200 && lib && ref;
  report(7, ok, "static equivalence",
         "reflexive " + std::to_string(reflexive) + "/200, symmetric " +
             std::to_string(symmetric) + "/200; ciphertext example library " +
             (lib ? "EQUIVALENT" : "ATTACK") + ", oracle " +
             (ref ? "EQUIVALENT" : "ATTACK"));
}

// Criterion 8: diff-eq EQUIVALENT implies trace-eq EQUIVALENT.
void implication(const std::vector<Cell>& cells) {
  int compared = 0, skipped = 0;
  std::string broken;
  for (const std::string& m : kModels) {
    for (const std::string& s : kScenarios) {
      const Cell& te = cell(cells, m, s, Property::kTraceEq);
      const Cell& de = cell(cells, m, s, Property::kDiffEq);
      bool decided = te.supported && de.supported &&
                     te.verdict.result != Result::kInconclusive &&
                     de.verdict.result != Result::kInconclusive;
      if (!decided) {
        ++skipped;
        continue;
      }
      ++compared;
      if (de.verdict.result == Result::kEquivalent &&
          te.verdict.result != Result::kEquivalent) {
        broken += " " + m + "/" + s;
      }
    }
  }
  report(8, broken.empty() && compared > 0, "diff-eq implies trace-eq",
         std::to_string(compared) + " model/scenario pairs compared, " +
             std::to_string(skipped) + " outside bounds" +
             (broken.empty() ? "" : "; violated on" + broken));
}

// Criterion 9: determinism of the verdict matrix.
void determinism(const std::vector<Cell>& a, const std::vector<Cell>& b) {
  std::string differ;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i].fingerprint() != b[i].fingerprint()) differ += " " + a[i].name();
  }
  report(9, differ.empty() && a.size() == b.size(), "deterministic verdicts",
         std::to_string(a.size()) + " cells byte-identical across two runs" +
             (differ.empty() ? "" : "; differ:" + differ));
}

}  // namespace

int main() {
  try {
    std::vector<Cell> first = run_matrix();
    std::vector<Cell> second = run_matrix();
    for (const Cell& c : first) std::printf("  matrix %s\n", brief(c).c_str());
    base_trace(first);
    counting(first, second);
    honest(first);
    corruption();
    rewriting();
    deduction();
    static_equivalence();
    implication(first);
    determinism(first, second);
  } catch (const std::exception& e) {
    std::printf("[FAIL] acceptance aborted: %s\n", e.what());
    return 1;
  }
  std::printf("%s: %d criteria failed\n", failures ? "FAIL" : "PASS", failures);
  return failures ? 1 : 0;
}
