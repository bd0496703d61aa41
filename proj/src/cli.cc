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

#include "ballotscope/cli.hh"

#include <algorithm>
#include <filesystem>
#include <functional>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "ballotscope/deduction.hh"
#include "ballotscope/error.hh"
#include "ballotscope/semantics.hh"
#include "ballotscope/starvote.hh"

namespace ballotscope {

namespace {

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

bool is_star(const std::string& name) { return name.rfind("star_", 0) == 0; }

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), ::tolower);
  return s;
}

}  // namespace

int RunConfig::voter_count() const {
  if (voters) return *voters;
  // DY3 corrupts a third voter; models without one reject it on build.
  return lower(scenario) == "dy3" ? 3 : 2;
}

Bounds RunConfig::bounds() const {
  Bounds b;
  b.depth = depth;
  b.max_states = max_states;
  return b;
}

Model build_model(const RunConfig& cfg, const std::string& first,
                  const std::string& second) {
  if (is_star(cfg.model) && !std::filesystem::exists(cfg.model)) {
    StarParams p;
    p.voters = cfg.voter_count();
    p.candidates = cfg.candidates;
    p.ext = parse_extensions(cfg.ext);
    if (cfg.model == "star_counting") p.ext.counting = true;
    if (cfg.model == "star_pins") p.ext.pins = true;
    if (cfg.model == "star_hashchain") p.ext.hashchain = true;
    if (cfg.model != "star_base" && cfg.model != "star_counting" &&
        cfg.model != "star_pins" && cfg.model != "star_hashchain") {
      throw Error("unknown model '" + cfg.model + "'");
    }
    p.first = first;
    p.second = second;
    return build_star_model(p);
  }
  Model m = load_model(cfg.model);
  if (m.instantiated) return m;
  InstanceParams ip;
  ip.voters = cfg.voter_count();
  ip.candidates = cfg.candidates;
  ip.votes = swap_votes(ip.voters, first, second);
  return instantiate(m, ip);
}

std::vector<std::pair<std::string, std::string>> vote_pairs(const RunConfig& cfg) {
  if (cfg.pair) return {*cfg.pair};
  std::vector<std::pair<std::string, std::string>> out;
  for (const auto& a : cfg.candidates) {
    for (const auto& b : cfg.candidates) {
      if (a != b) out.emplace_back(a, b);
    }
  }
  return out;
}

int exit_code(Result r) {
  switch (r) {
    case Result::kEquivalent:
      return kExitEquivalent;
    case Result::kAttack:
      return kExitAttack;
    case Result::kInconclusive:
      break;
  }
  return kExitInconclusive;
}

CheckOutcome run_check(const RunConfig& cfg) {
  CheckOutcome out;
  Scenario s = load_scenario(cfg.scenario);
  Bounds bounds = cfg.bounds();
  std::optional<std::size_t> attack, inconclusive;
  std::vector<Model> models;
  for (const auto& [a, b] : vote_pairs(cfg)) {
    Model m = build_model(cfg, a, b);
    Verdict v;
    if (cfg.property == Property::kTraceEq) {
      v = trace_equivalent(project(m, Side::kLeft), project(m, Side::kRight), s,
                           bounds);
    } else {
      v = verify_biprocess(m, s, bounds);
    }
    std::size_t i = out.per_pair.size();
    if (v.result == Result::kAttack && !attack) attack = i;
    if (v.result == Result::kInconclusive && !inconclusive) inconclusive = i;
    out.per_pair.emplace_back(a + ":" + b, std::move(v));
    models.push_back(std::move(m));
  }
  std::size_t pick = attack ? *attack : inconclusive ? *inconclusive : 0;
  out.verdict = out.per_pair[pick].second;
  if (attack) {
    const Model& m = models[pick];
    if (cfg.property == Property::kTraceEq) {
      Model l = project(m, Side::kLeft), r = project(m, Side::kRight);
      out.report = diagnose(out.verdict, l, &r, s, bounds);
    } else {
      out.report = diagnose(out.verdict, m, nullptr, s, bounds);
    }
  }
  return out;
}

namespace {

struct Emitter {
  std::ostream& out;
  std::string path;
  std::string buffer;

  void write(const std::string& text) { buffer += text; }
  void flush() {
    out << buffer;
    if (!path.empty()) {
      std::ofstream f(path);
      if (!f) throw Error("cannot write '" + path + "'");
      f << buffer;
    }
  }
};

void add_run_options(CLI::App* cmd, RunConfig& cfg, std::string& property,
                     std::string& pair, std::string& candidates, int& voters) {
  cmd->add_option("--model", cfg.model, "shipped model name or .spv path")
      ->capture_default_str();
  cmd->add_option("--scenario", cfg.scenario,
                  "dy1, dy2, dy3, honest, a scenario file, or corrupt:AGENTS")
      ->capture_default_str();
  cmd->add_option("--voters", voters, "number of voters (2-4)");
  cmd->add_option("--candidates", candidates, "comma separated candidates")
      ->capture_default_str();
  cmd->add_option("--ext", cfg.ext, "extensions: counting, pins, hashchain");
  cmd->add_option("--depth", cfg.depth, "recipe size bound")->capture_default_str();
  cmd->add_option("--max-states", cfg.max_states, "state bound")
      ->capture_default_str();
  cmd->add_option("--property", property, "trace-eq or diff-eq")
      ->check(CLI::IsMember({"trace-eq", "diff-eq"}))
      ->capture_default_str();
  cmd->add_option("--pair", pair, "vote pair a:b (default: all pairs)");
  cmd->add_option("--format", cfg.format, "text or json")
      ->check(CLI::IsMember({"text", "json"}))
      ->capture_default_str();
  cmd->add_option("--out", cfg.out, "also write the output to this file");
}

void finish_config(RunConfig& cfg, const std::string& property,
                   const std::string& pair, const std::string& candidates,
                   int voters) {
  cfg.property = property == "diff-eq" ? Property::kDiffEq : Property::kTraceEq;
  cfg.candidates = split_list(candidates);
  if (voters > 0) cfg.voters = voters;
  if (!pair.empty()) {
    auto colon = pair.find(':');
    if (colon == std::string::npos) throw Error("--pair expects a:b");
    cfg.pair = std::make_pair(pair.substr(0, colon), pair.substr(colon + 1));
  }
}

std::string stats_line(const Verdict& v) {
  std::string s = "states=" + std::to_string(v.stats.states) +
                  " frame_len=" + std::to_string(v.stats.frame_len) +
                  " ms=" + std::to_string(v.stats.ms);
  if (!v.plan.empty()) s += " plan=" + v.plan;
  if (!v.bound.empty()) s += " bound=" + v.bound;
  return s;
}

int cmd_check(const RunConfig& cfg, Emitter& em) {
  CheckOutcome o = run_check(cfg);
  if (cfg.format == "json") {
    auto j = nlohmann::ordered_json::parse(o.verdict.to_json());
    j["pairs"] = nlohmann::ordered_json::array();
    for (const auto& [pair, v] : o.per_pair) {
      j["pairs"].push_back({{"pair", pair}, {"result", to_string(v.result)}});
    }
    em.write(j.dump(2) + "\n");
  } else {
    for (const auto& [pair, v] : o.per_pair) {
      em.write("pair " + pair + ": " + to_string(v.result) + " (" + stats_line(v) +
               ")\n");
    }
    em.write("verdict: " + to_string(o.verdict.result) + " [" + o.verdict.model +
             ", " + o.verdict.scenario + ", " + to_string(o.verdict.property) +
             "]\n");
    if (!o.verdict.bound.empty()) {
      em.write("bound reached: " + o.verdict.bound + "\n");
    }
    if (!o.report.empty()) em.write(o.report);
  }
  return exit_code(o.verdict.result);
}

int cmd_deduce(const std::vector<std::string>& knowledge, const std::string& target,
               const std::string& public_names, int depth, const std::string& format,
               Emitter& em) {
  std::vector<std::string> pub = split_list(public_names);
  auto publicise = [&](Term t) {
    std::function<Term(const Term&)> go = [&](const Term& x) -> Term {
      if (x.is_name()) {
        bool p = std::find(pub.begin(), pub.end(), x.id()) != pub.end();
        return Term::name(x.id(), p);
      }
      if (!x.is_app()) return x;
      std::vector<Term> args;
      for (const Term& a : x.args()) args.push_back(go(a));
      return make_term(x.symbol(), std::move(args));
    };
    return normalize(go(t));
  };
  Knowledge k;
  for (const auto& text : knowledge) k.entries.push_back(publicise(parse_term(text)));
  Term goal = publicise(parse_term(target));
  DeductionContext ctx;
  for (const auto& n : pub) ctx.public_leaves.push_back(Term::name(n, true));
  auto recipe = derivable(k, goal, depth, ctx);
  if (format == "json") {
    nlohmann::ordered_json j;
    j["derivable"] = recipe.has_value();
    j["recipe"] = recipe ? nlohmann::ordered_json(recipe->str())
                         : nlohmann::ordered_json(nullptr);
    em.write(j.dump(2) + "\n");
  } else {
    em.write(recipe ? "yes " + recipe->str() + "\n" : "no\n");
  }
  return recipe ? 0 : 1;
}

int cmd_traces(const RunConfig& cfg, std::size_t limit, Emitter& em) {
  auto pairs = vote_pairs(cfg);
  Model m = build_model(cfg, pairs.front().first, pairs.front().second);
  if (cfg.property == Property::kTraceEq) m = project(m, Side::kLeft);
  Scenario s = load_scenario(cfg.scenario);
  Semantics sem(m, resolve(s, m), cfg.bounds());
  auto traces = observable_traces(sem, limit);
  if (cfg.format == "json") {
    nlohmann::ordered_json j = nlohmann::ordered_json::array();
    for (const auto& t : traces) {
      nlohmann::ordered_json row = nlohmann::ordered_json::array();
      for (const Action& a : t) row.push_back(a.str());
      j.push_back(row);
    }
    em.write(j.dump(2) + "\n");
  } else {
    for (const auto& t : traces) {
      std::string line;
      for (const Action& a : t) line += (line.empty() ? "" : " ") + a.str();
      em.write(line + "\n");
    }
  }
  return 0;
}

int cmd_explore(const RunConfig& cfg, Emitter& em) {
  auto pairs = vote_pairs(cfg);
  Model m = build_model(cfg, pairs.front().first, pairs.front().second);
  if (cfg.property == Property::kTraceEq) m = project(m, Side::kLeft);
  Scenario s = load_scenario(cfg.scenario);
  Lts lts = explore(m, resolve(s, m), cfg.bounds());
  if (cfg.format == "json") {
    em.write(lts.to_json() + "\n");
  } else {
    em.write("states=" + std::to_string(lts.states.size()) +
             " transitions=" + std::to_string(lts.transitions.size()) +
             " max_frame=" + std::to_string(lts.max_frame) +
             (lts.complete ? "" : " bound=" + lts.bound_hit +
                                      " frontier=" + std::to_string(lts.frontier)) +
             "\n");
  }
  return lts.complete ? 0 : kExitInconclusive;
}

int cmd_lint(const RunConfig& cfg, Emitter& em) {
  Model m = load_model(cfg.model);
  auto diags = check_wellformed(m);
  if (cfg.format == "json") {
    nlohmann::ordered_json j;
    j["model"] = cfg.model;
    j["ok"] = diags.empty();
    j["diagnostics"] = nlohmann::ordered_json::array();
    for (const auto& d : diags) j["diagnostics"].push_back(d.str());
    em.write(j.dump(2) + "\n");
  } else {
    for (const auto& d : diags) em.write(cfg.model + ":" + d.str() + "\n");
    if (diags.empty()) em.write(cfg.model + ": ok\n");
  }
  return diags.empty() ? 0 : 1;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out,
            std::ostream& err) {
  CLI::App app{"ballotscope: symbolic ballot-secrecy checker"};
  app.require_subcommand(1);
  RunConfig cfg;
  std::string property = "trace-eq", pair, candidates = "a,b";
  int voters = 0;

  auto* check = app.add_subcommand("check", "verify vote privacy");
  add_run_options(check, cfg, property, pair, candidates, voters);

  std::size_t limit = 10;
  auto* traces = app.add_subcommand("traces", "list observable traces");
  add_run_options(traces, cfg, property, pair, candidates, voters);
  traces->add_option("--limit", limit, "number of traces")->capture_default_str();

  auto* expl = app.add_subcommand("explore", "explore the state space");
  add_run_options(expl, cfg, property, pair, candidates, voters);

  auto* lint = app.add_subcommand("lint", "check a model for well-formedness");
  lint->add_option("--model", cfg.model, "shipped model name or .spv path");
  lint->add_option("--format", cfg.format, "text or json")
      ->check(CLI::IsMember({"text", "json"}));
  lint->add_option("--out", cfg.out, "also write the output to this file");

  std::vector<std::string> knowledge;
  std::string target, public_names;
  int depth = kDefaultDepth;
  std::string format = "text";
  auto* deduce = app.add_subcommand("deduce", "derive a term from knowledge");
  deduce->add_option("-k,--knowledge", knowledge, "known term (repeatable)");
  deduce->add_option("-t,--target", target, "term to derive")->required();
  deduce->add_option("--public", public_names, "comma separated public names");
  deduce->add_option("--depth", depth, "recipe size bound")->capture_default_str();
  deduce->add_option("--format", format, "text or json")
      ->check(CLI::IsMember({"text", "json"}));
  deduce->add_option("--out", cfg.out, "also write the output to this file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? 0 : kExitError;
  }

  Emitter em{out, cfg.out, {}};
  try {
    finish_config(cfg, property, pair, candidates, voters);
    int code = 0;
    if (*check) {
      code = cmd_check(cfg, em);
    } else if (*traces) {
      code = cmd_traces(cfg, limit, em);
    } else if (*expl) {
      code = cmd_explore(cfg, em);
    } else if (*lint) {
      code = cmd_lint(cfg, em);
    } else {
      code = cmd_deduce(knowledge, target, public_names, depth, format, em);
    }
    em.flush();
    return code;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
  }
  return kExitError;
}

}  // namespace ballotscope
