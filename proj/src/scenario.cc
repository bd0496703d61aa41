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

#include "ballotscope/scenario.hh"

#include <algorithm>
#include <cctype>
#include <regex>
#include <variant>

#include "ballotscope/error.hh"
#include "lexer.hh"
#include "term_parser.hh"

namespace ballotscope {

namespace {

bool is_voter_id(const std::string& a) {
  static const std::regex re("v[0-9]+");
  return std::regex_match(a, re);
}

Caps close_caps(Caps c) { return (c & kIntercept) ? (c | kObserve) : c; }

Caps parse_caps(const std::vector<std::string>& names, int line) {
  Caps c = 0;
  for (const auto& n : names) {
    if (n == "observe") {
      c |= kObserve;
    } else if (n == "intercept") {
      c |= kIntercept;
    } else if (n == "inject") {
      c |= kInject;
    } else {
      throw ParseError("unknown capability '" + n + "'", line, 1);
    }
  }
  return c;
}

// Values of the key-value format: strings, booleans and string arrays.
using Value = std::variant<std::string, bool, std::vector<std::string>>;

struct Cursor {
  std::string_view s;
  std::size_t i = 0;
  int line;

  void skip_ws() {
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t')) ++i;
  }
  [[noreturn]] void fail(const std::string& msg) const {
    throw ParseError(msg, line, static_cast<int>(i) + 1);
  }
  std::string quoted() {
    if (i >= s.size() || s[i] != '"') fail("expected string");
    std::size_t end = s.find('"', i + 1);
    if (end == std::string_view::npos) fail("unterminated string");
    std::string out(s.substr(i + 1, end - i - 1));
    i = end + 1;
    return out;
  }
  Value value() {
    skip_ws();
    if (i < s.size() && s[i] == '[') {
      ++i;
      std::vector<std::string> items;
      skip_ws();
      while (i < s.size() && s[i] != ']') {
        items.push_back(quoted());
        skip_ws();
        if (i < s.size() && s[i] == ',') {
          ++i;
          skip_ws();
        }
      }
      if (i >= s.size()) fail("unterminated array");
      ++i;
      return items;
    }
    if (s.substr(i, 4) == "true") {
      i += 4;
      return true;
    }
    if (s.substr(i, 5) == "false") {
      i += 5;
      return false;
    }
    return quoted();
  }
  void finish() {
    skip_ws();
    if (i < s.size() && s[i] != '#') fail("trailing characters");
  }
};

template <typename T>
const T& expect_value(const Value& v, const std::string& key, int line) {
  if (auto p = std::get_if<T>(&v)) return *p;
  throw ParseError("wrong value type for '" + key + "'", line, 1);
}

std::string quote_list(const std::vector<std::string>& items) {
  std::string out = "[";
  for (std::size_t i = 0; i < items.size(); ++i) {
    out += (i ? ", \"" : "\"") + items[i] + "\"";
  }
  return out + "]";
}

std::vector<std::string> caps_list(Caps c) {
  std::vector<std::string> out;
  if (c & kObserve) out.push_back("observe");
  if (c & kIntercept) out.push_back("intercept");
  if (c & kInject) out.push_back("inject");
  return out;
}

bool selects(const CapabilityRule& r, const ChannelDecl& d) {
  const Channel& ch = d.channel;
  if (r.channels == "public") {
    if (d.visibility != Visibility::kPublic) return false;
  } else if (r.channels.rfind("endpoint:", 0) == 0) {
    if (!ch.has_endpoint(r.channels.substr(9))) return false;
  } else if (r.channels != "all") {
    if (ch.str() != r.channels) return false;
  }
  if (!r.without_endpoint.empty() && ch.has_endpoint(r.without_endpoint)) {
    return false;
  }
  return std::find(r.exclude_tags.begin(), r.exclude_tags.end(), ch.tag) ==
         r.exclude_tags.end();
}

}  // namespace

std::string render_caps(Caps c) {
  std::string out;
  for (const auto& n : caps_list(c)) out += (out.empty() ? "" : ",") + n;
  return out.empty() ? "none" : out;
}

DeductionContext ResolvedScenario::context() const {
  DeductionContext ctx;
  ctx.public_leaves = leaves;
  return ctx;
}

const std::vector<std::string>& builtin_scenario_names() {
  static const std::vector<std::string> names = {"dy1", "dy2", "dy3", "honest"};
  return names;
}

Scenario builtin_scenario(std::string_view name) {
  std::string n(name);
  std::transform(n.begin(), n.end(), n.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  Scenario s;
  if (n == "dy1" || n == "honest") {
    // Ballot contents and candidate selections stay out of reach even where
    // the network is public.
    s.name = n == "dy1" ? "DY1" : "honest";
    s.rules.push_back({"public", "", {"vote", "summary", "cast"}, kObserve});
  } else if (n == "dy2") {
    s.name = "DY2";
    s.corrupt = {"voters"};
    s.honest = {"v1"};
    s.rules.push_back({"all", "v1", {}, kFullCaps});
  } else if (n == "dy3") {
    s.name = "DY3";
    s.corrupt = {"v3"};
    s.rules.push_back({"endpoint:v3", "", {}, kFullCaps});
    s.rules.push_back({"public", "", {}, kObserve});
  } else {
    throw Error("unknown scenario '" + std::string(name) + "'");
  }
  return s;
}

Scenario parse_scenario(std::string_view text) {
  Scenario s;
  CapabilityRule* rule = nullptr;
  int line_no = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    Cursor c{text.substr(start, end - start), 0, ++line_no};
    start = end + 1;
    c.skip_ws();
    if (c.i >= c.s.size() || c.s[c.i] == '#' || c.s[c.i] == '\r') continue;
    if (c.s.substr(c.i, 2) == "[[") {
      std::size_t close = c.s.find("]]", c.i);
      if (close == std::string_view::npos) c.fail("unterminated table header");
      std::string_view table = c.s.substr(c.i + 2, close - c.i - 2);
      if (table != "capability") c.fail("unknown table '" + std::string(table) + "'");
      s.rules.emplace_back();
      rule = &s.rules.back();
      c.i = close + 2;
      c.finish();
      continue;
    }
    std::size_t k0 = c.i;
    while (c.i < c.s.size() &&
           (std::isalnum(static_cast<unsigned char>(c.s[c.i])) || c.s[c.i] == '_')) {
      ++c.i;
    }
    std::string key(c.s.substr(k0, c.i - k0));
    if (key.empty()) c.fail("expected key");
    c.skip_ws();
    if (c.i >= c.s.size() || c.s[c.i] != '=') c.fail("expected '='");
    ++c.i;
    Value v = c.value();
    c.finish();
    using Strings = std::vector<std::string>;
    if (rule) {
      if (key == "channels") {
        rule->channels = expect_value<std::string>(v, key, line_no);
      } else if (key == "without_endpoint") {
        rule->without_endpoint = expect_value<std::string>(v, key, line_no);
      } else if (key == "exclude_tags") {
        rule->exclude_tags = expect_value<Strings>(v, key, line_no);
      } else if (key == "grant") {
        rule->grant = parse_caps(expect_value<Strings>(v, key, line_no), line_no);
      } else {
        throw ParseError("unknown capability key '" + key + "'", line_no, 1);
      }
    } else if (key == "name") {
      s.name = expect_value<std::string>(v, key, line_no);
    } else if (key == "corrupt") {
      s.corrupt = expect_value<Strings>(v, key, line_no);
    } else if (key == "honest") {
      s.honest = expect_value<Strings>(v, key, line_no);
    } else if (key == "knowledge") {
      s.knowledge = expect_value<Strings>(v, key, line_no);
    } else if (key == "default_knowledge") {
      s.default_knowledge = expect_value<bool>(v, key, line_no);
    } else {
      throw ParseError("unknown key '" + key + "'", line_no, 1);
    }
  }
  if (s.name.empty()) throw ParseError("scenario has no name", 1, 1);
  return s;
}

std::string render_scenario(const Scenario& s) {
  std::string out = "name = \"" + s.name + "\"\n";
  if (!s.corrupt.empty()) out += "corrupt = " + quote_list(s.corrupt) + "\n";
  if (!s.honest.empty()) out += "honest = " + quote_list(s.honest) + "\n";
  if (!s.knowledge.empty()) out += "knowledge = " + quote_list(s.knowledge) + "\n";
  if (!s.default_knowledge) out += "default_knowledge = false\n";
  for (const auto& r : s.rules) {
    out += "\n[[capability]]\nchannels = \"" + r.channels + "\"\n";
    if (!r.without_endpoint.empty()) {
      out += "without_endpoint = \"" + r.without_endpoint + "\"\n";
    }
    if (!r.exclude_tags.empty()) {
      out += "exclude_tags = " + quote_list(r.exclude_tags) + "\n";
    }
    out += "grant = " + quote_list(caps_list(r.grant)) + "\n";
  }
  return out;
}

std::set<std::string> model_agents(const Model& m) {
  std::set<std::string> agents;
  for (const auto& d : m.channels) {
    if (d.channel.is_triple()) {
      agents.insert(d.channel.from);
      agents.insert(d.channel.to);
    }
  }
  for (const Role& r : m.roles) {
    if (r.kind != RoleKind::kVoter) agents.insert(r.name);
  }
  return agents;
}

ResolvedScenario resolve(const Scenario& s, const Model& m) {
  if (!m.instantiated) throw ModelError("scenario needs an instantiated model");
  ResolvedScenario out;
  out.name = s.name;
  std::set<std::string> agents = model_agents(m);
  auto check_agent = [&](const std::string& a) {
    if (!agents.count(a)) {
      throw ModelError("scenario " + s.name + ": unknown agent '" + a + "'");
    }
  };

  for (const auto& a : s.corrupt) {
    if (a == "voters") {
      for (const auto& b : agents) {
        if (is_voter_id(b)) out.corrupted.insert(b);
      }
    } else {
      check_agent(a);
      out.corrupted.insert(a);
    }
  }
  for (const auto& a : s.honest) {
    check_agent(a);
    out.corrupted.erase(a);
  }

  for (const auto& r : s.rules) {
    if (r.channels.rfind("endpoint:", 0) == 0) check_agent(r.channels.substr(9));
    if (!r.without_endpoint.empty()) check_agent(r.without_endpoint);
    bool any = false;
    for (const auto& d : m.channels) {
      if (!selects(r, d)) continue;
      any = true;
      out.caps[d.channel] |= close_caps(r.grant);
    }
    bool exact = r.channels != "all" && r.channels != "public" &&
                 r.channels.rfind("endpoint:", 0) != 0;
    if (exact && !any) {
      throw ModelError("scenario " + s.name + ": unknown channel '" +
                       r.channels + "'");
    }
  }
  // Corruption hands over the agent's keys and its private channels.
  for (const auto& a : out.corrupted) {
    for (const auto& d : m.channels) {
      if (d.channel.has_endpoint(a)) out.caps[d.channel] = kFullCaps;
    }
  }
  for (auto it = out.caps.begin(); it != out.caps.end();) {
    it = it->second ? std::next(it) : out.caps.erase(it);
  }

  auto add_leaf = [&](const Term& t) {
    if (std::find(out.leaves.begin(), out.leaves.end(), t) == out.leaves.end()) {
      out.leaves.push_back(t);
    }
  };
  if (s.default_knowledge) {
    for (const auto& n : m.free_names) add_leaf(Term::name(n, true));
    for (const auto& t : m.known) add_leaf(normalize(t));
  }
  for (const auto& a : out.corrupted) {
    auto it = m.keys.find(a);
    if (it == m.keys.end()) continue;
    for (const auto& k : it->second) {
      bool pub = std::find(m.free_names.begin(), m.free_names.end(), k) !=
                 m.free_names.end();
      Term t = Term::name(k, pub);
      out.revealed.push_back(t);
      add_leaf(t);
    }
  }
  for (const auto& text : s.knowledge) {
    detail::TokenStream ts(detail::tokenize(text));
    Term t = detail::parse_term(ts, [&](const detail::Token& tok,
                                        detail::TokenStream&) {
      const std::string& id = tok.text;
      bool pub = std::find(m.free_names.begin(), m.free_names.end(), id) !=
                 m.free_names.end();
      bool priv = std::find(m.private_names.begin(), m.private_names.end(),
                            id) != m.private_names.end();
      if (!pub && !priv) {
        throw ParseError("unbound name '" + id + "'", tok.line, tok.column);
      }
      return Term::name(id, pub);
    });
    if (!ts.at_end()) ts.fail("expected end of term");
    add_leaf(normalize(t));
  }
  return out;
}

}  // namespace ballotscope
