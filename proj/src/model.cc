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

#include "ballotscope/model.hh"

#include <algorithm>
#include <functional>
#include <set>

#include "ballotscope/error.hh"
#include "lexer.hh"
#include "term_parser.hh"

namespace ballotscope {

namespace {

using detail::Token;
using detail::TokenStream;

const std::set<std::string>& keywords() {
  static const std::set<std::string> k = {
      "free", "private", "key",  "known", "channel",  "let",      "voters",
      "voter", "session", "role", "instance", "candidates"};
  return k;
}

struct Scope {
  std::map<std::string, Term> bound;
};

class Parser {
 public:
  Parser(std::string_view src, std::string name)
      : ts_(detail::tokenize(src)) {
    m_.name = std::move(name);
  }

  Model parse() {
    if (ts_.at_end()) ts_.fail("expected declaration or process");
    while (!ts_.at_end()) {
      const Token& t = ts_.peek();
      if (t.kind == Token::Kind::kIdent && keywords().count(t.text)) {
        declaration();
      } else {
        Role r;
        r.name = "main";
        r.pos = pos();
        r.body = process(Scope{});
        ts_.accept(".");
        m_.roles.push_back(std::move(r));
      }
    }
    return std::move(m_);
  }

 private:
  SourcePos pos() const { return {ts_.peek().line, ts_.peek().column}; }

  std::vector<std::string> ident_list() {
    std::vector<std::string> out{ts_.expect_ident().text};
    while (ts_.accept(",")) out.push_back(ts_.expect_ident().text);
    return out;
  }

  void declare(const std::string& id, bool is_public) {
    declared_[id] = is_public;
  }

  int number() {
    if (ts_.peek().kind != Token::Kind::kNumber) ts_.fail("expected number");
    return std::stoi(ts_.next().text);
  }

  void declaration() {
    std::string kw = ts_.next().text;
    if (kw == "free" || kw == "private") {
      for (auto& id : ident_list()) {
        declare(id, kw == "free");
        auto& list = kw == "free" ? m_.free_names : m_.private_names;
        if (std::find(list.begin(), list.end(), id) == list.end()) {
          list.push_back(id);
        }
      }
    } else if (kw == "candidates") {
      for (auto& id : ident_list()) {
        declare(id, true);
        m_.candidates.push_back(id);
      }
      m_.instantiated = true;
    } else if (kw == "key") {
      std::string agent = ts_.expect_ident().text;
      ts_.expect(":");
      for (auto& id : ident_list()) {
        if (!declared_.count(id)) unbound(id, ts_.peek());
        m_.keys[agent].push_back(id);
      }
    } else if (kw == "known") {
      m_.known.push_back(term(Scope{}));
      while (ts_.accept(",")) m_.known.push_back(term(Scope{}));
    } else if (kw == "let") {
      std::string id = ts_.expect_ident().text;
      ts_.expect("=");
      lets_[id] = term(Scope{});
    } else if (kw == "voters") {
      m_.min_voters = number();
      m_.max_voters = ts_.peek().kind == Token::Kind::kNumber ? number()
                                                              : m_.min_voters;
    } else if (kw == "channel") {
      channel_decl();
    } else {
      role_decl(kw);
      return;
    }
    ts_.expect(".");
  }

  void channel_decl() {
    ChannelDecl d;
    d.pos = pos();
    d.channel = channel();
    if (ts_.accept("public")) {
      d.visibility = Visibility::kPublic;
    } else {
      ts_.accept("private");
    }
    for (const auto& e : m_.channels) {
      if (e.channel == d.channel) {
        if (e.visibility != d.visibility) {
          throw ParseError("channel-visibility conflict for '" +
                               d.channel.str() + "'",
                           d.pos.line, d.pos.column);
        }
        return;
      }
    }
    m_.channels.push_back(std::move(d));
  }

  void role_decl(const std::string& kw) {
    Role r;
    r.pos = pos();
    r.name = ts_.expect_ident().text;
    Scope sc;
    if (kw == "voter") {
      r.kind = RoleKind::kVoter;
      ts_.expect("(");
      r.param = ts_.expect_ident().text;
      ts_.expect(")");
      sc.bound[r.param] = Term::var(r.param);
    } else if (kw == "session") {
      r.kind = RoleKind::kSession;
    } else if (kw == "instance") {
      r.kind = RoleKind::kInstance;
      r.instance = number();
      m_.instantiated = true;
      m_.voters = std::max(m_.voters, r.instance);
    } else {
      r.kind = RoleKind::kSingle;
    }
    ts_.expect("=");
    r.body = process(sc);
    ts_.expect(".");
    m_.roles.push_back(std::move(r));
  }

  [[noreturn]] void unbound(const std::string& id, const Token& at) {
    throw ParseError("unbound name '" + id + "'", at.line, at.column);
  }

  Term resolve(const Token& tok, const Scope& sc) {
    if (auto it = sc.bound.find(tok.text); it != sc.bound.end()) {
      return it->second;
    }
    if (auto it = lets_.find(tok.text); it != lets_.end()) return it->second;
    if (auto it = declared_.find(tok.text); it != declared_.end()) {
      return Term::name(tok.text, it->second);
    }
    unbound(tok.text, tok);
  }

  Term term(const Scope& sc) {
    return detail::parse_term(ts_, [&](const Token& tok, TokenStream&) {
      return resolve(tok, sc);
    });
  }

  // Identifiers naming declared or let-bound constants match literally;
  // every other identifier binds a fresh variable for the continuation.
  Term pattern(const Scope& sc, Scope& inner) {
    return detail::parse_term(ts_, [&](const Token& tok, TokenStream& ts) {
      if (auto it = sc.bound.find(tok.text);
          it != sc.bound.end() && it->second.is_name()) {
        return it->second;
      }
      if (lets_.count(tok.text) || declared_.count(tok.text)) {
        return resolve(tok, sc);
      }
      std::string type;
      if (ts.accept(":")) type = ts.expect_ident().text;
      Term v = Term::var(tok.text, type);
      inner.bound[tok.text] = Term::var(tok.text);
      return v;
    });
  }

  Channel channel() {
    std::string first = ts_.expect_ident().text;
    if (ts_.is(".") && ts_.peek(1).kind == Token::Kind::kIdent &&
        ts_.peek(2).text == ".") {
      ts_.next();
      std::string to = ts_.next().text;
      ts_.next();
      std::string tag = ts_.expect_ident().text;
      return Channel::triple(first, to, tag);
    }
    return Channel::plain(first);
  }

  Proc process(const Scope& sc) {
    SourcePos p = pos();
    std::vector<Proc> parts{prefix(sc)};
    while (ts_.accept("|")) parts.push_back(prefix(sc));
    return parts.size() == 1 ? parts.front() : parallel(std::move(parts), p);
  }

  Proc prefix(const Scope& sc) {
    SourcePos p = pos();
    if (ts_.peek().kind == Token::Kind::kNumber && ts_.peek().text == "0") {
      ts_.next();
      return stop(p);
    }
    if (ts_.accept("(")) {
      Proc q = process(sc);
      ts_.expect(")");
      return q;
    }
    if (ts_.accept("out")) {
      ts_.expect("(");
      Channel ch = channel();
      ts_.expect(",");
      Term t = term(sc);
      ts_.expect(")");
      ts_.expect(".");
      return output(std::move(ch), std::move(t), prefix(sc), p);
    }
    if (ts_.accept("in")) {
      ts_.expect("(");
      Channel ch = channel();
      ts_.expect(",");
      Scope inner = sc;
      Term pat = pattern(sc, inner);
      ts_.expect(")");
      ts_.expect(".");
      return input(std::move(ch), std::move(pat), prefix(inner), p);
    }
    if (ts_.accept("new")) {
      std::string n = ts_.expect_ident().text;
      ts_.expect(".");
      Scope inner = sc;
      inner.bound[n] = Term::name(n);
      return restrict(n, prefix(inner), p);
    }
    if (ts_.accept("if")) {
      Term l = term(sc);
      ts_.expect("=");
      Term r = term(sc);
      ts_.expect("then");
      Proc then_branch = prefix(sc);
      Proc else_branch = ts_.accept("else") ? prefix(sc) : stop(pos());
      return if_eq(std::move(l), std::move(r), std::move(then_branch),
                   std::move(else_branch), p);
    }
    if (ts_.accept("let")) {
      std::string x = ts_.expect_ident().text;
      ts_.expect("=");
      Term t = term(sc);
      ts_.expect("in");
      Scope inner = sc;
      inner.bound[x] = t;
      return prefix(inner);
    }
    if (ts_.accept("barrier")) {
      int k = number();
      bool swap = ts_.accept("swap");
      std::string owner;
      if (ts_.accept("for")) {
        owner = ts_.expect_ident().text;
        owner += "/" + std::to_string(number());
      }
      ts_.expect(".");
      Proc b = barrier(k, prefix(sc), swap, p);
      if (owner.empty()) return b;
      Process tagged = *b;
      tagged.name = std::move(owner);
      return std::make_shared<const Process>(std::move(tagged));
    }
    if (ts_.accept("event")) {
      std::string label = ts_.expect_ident().text;
      std::vector<Term> args;
      if (ts_.accept("(")) {
        args.push_back(term(sc));
        while (ts_.accept(",")) args.push_back(term(sc));
        ts_.expect(")");
      }
      ts_.expect(".");
      return event(std::move(label), std::move(args), prefix(sc), p);
    }
    if (ts_.is("choice") && ts_.peek(1).text == "[") {
      ts_.next();
      ts_.next();
      Proc l = process(sc);
      ts_.expect(",");
      Proc r = process(sc);
      ts_.expect("]");
      if (auto m = merge(l, r)) return *m;
      return diff(std::move(l), std::move(r), p);
    }
    ts_.fail("expected process");
  }

  TokenStream ts_;
  Model m_;
  std::map<std::string, Term> lets_;
  std::map<std::string, bool> declared_;
};

void collect_phases(const Proc& p, std::set<int>& out) {
  if (p->kind == Process::Kind::kBarrier) out.insert(p->phase);
  for (const Proc& n : p->next) collect_phases(n, out);
}

bool proc_has_choice(const Proc& p) {
  if (p->kind == Process::Kind::kDiff) return true;
  if (p->first.valid() && p->first.has_choice()) return true;
  if (p->second.valid() && p->second.has_choice()) return true;
  for (const Term& a : p->args) {
    if (a.has_choice()) return true;
  }
  for (const Proc& n : p->next) {
    if (proc_has_choice(n)) return true;
  }
  return false;
}

void render_names(std::string& out, const char* kw,
                  const std::vector<std::string>& names) {
  if (names.empty()) return;
  out += kw;
  for (std::size_t i = 0; i < names.size(); ++i) {
    out += i ? ", " : " ";
    out += names[i];
  }
  out += ".\n";
}

Term rename_term(const Term& t, const std::map<std::string, std::string>& env) {
  switch (t.kind()) {
    case Term::Kind::kName: {
      auto it = env.find(t.id());
      return it == env.end() ? t : Term::name(it->second, t.is_public());
    }
    case Term::Kind::kApp: {
      std::vector<Term> args;
      for (const Term& a : t.args()) args.push_back(rename_term(a, env));
      return make_term(t.symbol(), std::move(args));
    }
    case Term::Kind::kChoice:
      return Term::choice(rename_term(t.left(), env),
                          rename_term(t.right(), env));
    default:
      return t;
  }
}

Proc fresh_names(const Proc& p, std::map<std::string, std::string> env,
                 std::map<std::string, int>& counters) {
  Process q = *p;
  if (q.kind == Process::Kind::kRestrict && q.name.find('#') == std::string::npos) {
    std::string renamed = q.name + "#" + std::to_string(++counters[q.name]);
    env[q.name] = renamed;
    q.name = renamed;
  }
  if (!env.empty()) {
    if (q.first.valid()) q.first = rename_term(q.first, env);
    if (q.second.valid()) q.second = rename_term(q.second, env);
    for (Term& a : q.args) a = rename_term(a, env);
  }
  for (Proc& n : q.next) n = fresh_names(n, env, counters);
  return std::make_shared<const Process>(std::move(q));
}

// Barriers remember which role instance reached them, so that data can be
// exchanged between instances when a swap is requested.
Proc tag_barriers(const Proc& p, const std::string& owner) {
  Process q = *p;
  if (q.kind == Process::Kind::kBarrier) q.name = owner;
  for (Proc& n : q.next) n = tag_barriers(n, owner);
  return std::make_shared<const Process>(std::move(q));
}

Channel expand_channel(const Channel& ch, int voter) {
  auto part = [&](const std::string& s) {
    if (s == "V") return "v" + std::to_string(voter);
    if (!s.empty() && s.back() == '%') {
      return s.substr(0, s.size() - 1) + std::to_string(voter);
    }
    return s;
  };
  return Channel{part(ch.from), part(ch.to), part(ch.tag)};
}

bool is_template_channel(const Channel& ch) {
  auto t = [](const std::string& s) {
    return s == "V" || (!s.empty() && s.back() == '%');
  };
  return t(ch.from) || t(ch.to) || t(ch.tag);
}

void check_proc(const Model& m, const Proc& p, int phase,
                const std::set<std::string>& restricted,
                std::vector<Diagnostic>& out) {
  using K = Process::Kind;
  std::set<std::string> inner = restricted;
  switch (p->kind) {
    case K::kOutput:
    case K::kInput: {
      const Channel& ch = p->channel;
      bool ok = m.find_channel(ch) != nullptr ||
                (!ch.is_triple() && restricted.count(ch.tag));
      if (!ok) {
        out.push_back({p->pos, "undeclared channel '" + ch.str() + "'"});
      }
      if (p->kind == K::kInput) {
        if (p->first.has_choice()) {
          out.push_back({p->pos, "choice inside an input pattern"});
        }
        if (p->first.has_destructor()) {
          out.push_back({p->pos, "destructor inside an input pattern"});
        }
      }
      break;
    }
    case K::kRestrict:
      inner.insert(p->name);
      break;
    case K::kBarrier:
      if (p->phase < phase) {
        out.push_back({p->pos, "barrier " + std::to_string(p->phase) +
                                   " follows barrier " + std::to_string(phase) +
                                   " on the same path"});
      }
      phase = std::max(phase, p->phase);
      break;
    case K::kDiff:
      out.push_back({p->pos, "choice sides differ in control structure"});
      return;
    default:
      break;
  }
  for (const Proc& n : p->next) check_proc(m, n, phase, inner, out);
}

}  // namespace

const ChannelDecl* Model::find_channel(const Channel& ch) const {
  for (const auto& d : channels) {
    if (d.channel == ch) return &d;
  }
  return nullptr;
}

bool Model::has_templates() const {
  return std::any_of(roles.begin(), roles.end(), [](const Role& r) {
    return r.kind == RoleKind::kVoter || r.kind == RoleKind::kSession;
  });
}

bool Model::is_biprocess() const {
  return std::any_of(roles.begin(), roles.end(),
                     [](const Role& r) { return proc_has_choice(r.body); });
}

std::vector<int> Model::barrier_phases() const {
  std::set<int> phases;
  for (const Role& r : roles) collect_phases(r.body, phases);
  return {phases.begin(), phases.end()};
}

Model parse_model(std::string_view source, std::string name) {
  return Parser(source, std::move(name)).parse();
}

std::string render_model(const Model& m) {
  std::string out;
  render_names(out, "free", m.free_names);
  render_names(out, "private", m.private_names);
  for (const auto& [agent, names] : m.keys) {
    out += "key " + agent + ":";
    for (std::size_t i = 0; i < names.size(); ++i) {
      out += i ? ", " : " ";
      out += names[i];
    }
    out += ".\n";
  }
  for (const Term& k : m.known) out += "known " + k.str() + ".\n";
  out += "voters " + std::to_string(m.min_voters) + " " +
         std::to_string(m.max_voters) + ".\n";
  for (const auto& d : m.channels) {
    out += "channel " + d.channel.str() +
           (d.visibility == Visibility::kPublic ? " public" : " private") +
           ".\n";
  }
  render_names(out, "candidates", m.candidates);
  for (const Role& r : m.roles) {
    switch (r.kind) {
      case RoleKind::kVoter:
        out += "voter " + r.name + "(" + r.param + ") = ";
        break;
      case RoleKind::kSession:
        out += "session " + r.name + " = ";
        break;
      case RoleKind::kSingle:
        out += "role " + r.name + " = ";
        break;
      case RoleKind::kInstance:
        out += "instance " + r.name + " " + std::to_string(r.instance) + " = ";
        break;
    }
    render_process(r.body, out);
    out += ".\n";
  }
  return out;
}

std::string Diagnostic::str() const {
  return std::to_string(pos.line) + ":" + std::to_string(pos.column) + ": " +
         message;
}

std::vector<Diagnostic> check_wellformed(const Model& m) {
  std::vector<Diagnostic> out;
  std::set<std::string> restricted;
  for (const Role& r : m.roles) {
    check_proc(m, r.body, 0, restricted, out);
    auto fv = free_vars(r.body);
    if (r.kind == RoleKind::kVoter) fv.erase(r.param);
    for (const auto& v : fv) {
      out.push_back({r.pos, "free variable '" + v + "' in role " + r.name});
    }
    if ((r.kind == RoleKind::kVoter || r.kind == RoleKind::kSession) &&
        m.instantiated) {
      out.push_back({r.pos, "template role " + r.name +
                                " left in an instantiated model"});
    }
  }
  std::stable_sort(out.begin(), out.end(),
                   [](const Diagnostic& a, const Diagnostic& b) {
                     return std::tie(a.pos.line, a.pos.column) <
                            std::tie(b.pos.line, b.pos.column);
                   });
  return out;
}

std::vector<Term> swap_votes(int voters, const std::string& first,
                             const std::string& second) {
  Term a = Term::name(first, true), b = Term::name(second, true);
  std::vector<Term> votes;
  for (int i = 1; i <= voters; ++i) {
    if (i == 1) {
      votes.push_back(a == b ? a : Term::choice(a, b));
    } else if (i == 2) {
      votes.push_back(a == b ? a : Term::choice(b, a));
    } else {
      votes.push_back(a);
    }
  }
  return votes;
}

Model freshen(const Model& m) {
  Model out = m;
  std::map<std::string, int> counters;
  for (Role& r : out.roles) r.body = fresh_names(r.body, {}, counters);
  return out;
}

Model instantiate(const Model& m, const InstanceParams& params) {
  if (m.instantiated) throw Error("model is already instantiated");
  int lo = std::max(kMinVoters, m.min_voters);
  int hi = std::min(kMaxVoters, m.max_voters);
  if (params.voters < lo || params.voters > hi) {
    throw BoundError("unsupported voter count " +
                     std::to_string(params.voters) + " (supported: " +
                     std::to_string(lo) + ".." + std::to_string(hi) + ")");
  }
  std::set<std::string> distinct(params.candidates.begin(),
                                 params.candidates.end());
  if (params.candidates.size() < 2 || distinct.size() != params.candidates.size()) {
    throw BoundError("at least two distinct candidates are required");
  }
  std::vector<Term> votes = params.votes;
  if (votes.empty()) {
    votes = swap_votes(params.voters, params.candidates[0], params.candidates[1]);
  }
  if (static_cast<int>(votes.size()) != params.voters) {
    throw BoundError("expected one vote per voter");
  }

  Model out = m;
  out.roles.clear();
  out.channels.clear();
  for (const auto& c : params.candidates) {
    if (std::find(out.free_names.begin(), out.free_names.end(), c) ==
        out.free_names.end()) {
      out.free_names.push_back(c);
    }
  }
  for (const auto& d : m.channels) {
    if (!is_template_channel(d.channel)) {
      if (!out.find_channel(d.channel)) out.channels.push_back(d);
      continue;
    }
    for (int i = 1; i <= params.voters; ++i) {
      ChannelDecl e = d;
      e.channel = expand_channel(d.channel, i);
      if (!out.find_channel(e.channel)) out.channels.push_back(std::move(e));
    }
  }
  for (const Role& r : m.roles) {
    if (r.kind == RoleKind::kSingle) {
      out.roles.push_back(r);
      continue;
    }
    if (r.kind == RoleKind::kInstance) {
      throw Error("model mixes concrete instances and templates");
    }
    for (int i = 1; i <= params.voters; ++i) {
      Role inst = r;
      inst.kind = RoleKind::kInstance;
      inst.instance = i;
      inst.param.clear();
      Proc body = r.body;
      if (r.kind == RoleKind::kVoter) {
        body = substitute(body, Substitution{{r.param, votes[i - 1]}});
      }
      inst.body = map_channels(
          body, [i](const Channel& ch) { return expand_channel(ch, i); });
      inst.body = tag_barriers(inst.body, r.name + "/" + std::to_string(i));
      out.roles.push_back(std::move(inst));
    }
  }
  out = freshen(out);
  out.instantiated = true;
  out.voters = params.voters;
  out.min_voters = out.max_voters = params.voters;
  out.candidates = params.candidates;
  return out;
}

Model project(const Model& m, Side side) {
  Model out = m;
  for (Role& r : out.roles) r.body = project(r.body, side);
  return out;
}

bool equal(const Model& a, const Model& b) {
  if (a.free_names != b.free_names || a.private_names != b.private_names ||
      a.keys != b.keys || a.known != b.known || a.min_voters != b.min_voters ||
      a.max_voters != b.max_voters || a.candidates != b.candidates ||
      a.instantiated != b.instantiated || a.channels.size() != b.channels.size() ||
      a.roles.size() != b.roles.size()) {
    return false;
  }
  for (std::size_t i = 0; i < a.channels.size(); ++i) {
    if (a.channels[i].channel != b.channels[i].channel ||
        a.channels[i].visibility != b.channels[i].visibility) {
      return false;
    }
  }
  for (std::size_t i = 0; i < a.roles.size(); ++i) {
    const Role& x = a.roles[i];
    const Role& y = b.roles[i];
    if (x.name != y.name || x.kind != y.kind || x.param != y.param ||
        x.instance != y.instance || !equal(x.body, y.body)) {
      return false;
    }
  }
  return true;
}

}  // namespace ballotscope
