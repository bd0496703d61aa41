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

#include "ballotscope/term.hh"

#include <array>
#include <functional>
#include <ostream>

#include "ballotscope/error.hh"
#include "term_parser.hh"

namespace ballotscope {

namespace sig {
namespace {
constexpr auto kC = SymbolKind::kConstructor;
constexpr auto kD = SymbolKind::kDestructor;
}  // namespace
const Symbol& ok() { static const Symbol s{"ok", 0, kC}; return s; }
const Symbol& pk() { static const Symbol s{"pk", 1, kC}; return s; }
const Symbol& hash() { static const Symbol s{"hash", 1, kC}; return s; }
const Symbol& sign() { static const Symbol s{"sign", 2, kC}; return s; }
const Symbol& dec() { static const Symbol s{"dec", 2, kD}; return s; }
const Symbol& penc() { static const Symbol s{"penc", 3, kC}; return s; }
const Symbol& checksign() { static const Symbol s{"checksign", 3, kD}; return s; }
const Symbol& checkzkp() { static const Symbol s{"checkzkp", 1, kD}; return s; }
// Four arguments: the well-formedness equation applies zkp to the public
// key, the randomness, the plaintext and the ciphertext.
const Symbol& zkp() { static const Symbol s{"zkp", 4, kC}; return s; }
}  // namespace sig

std::span<const Symbol* const> builtin_signature() {
  static const std::array<const Symbol*, 9> all = {
      &sig::ok(),  &sig::pk(),        &sig::hash(),
      &sig::sign(), &sig::dec(),      &sig::penc(),
      &sig::checksign(), &sig::checkzkp(), &sig::zkp()};
  return all;
}

namespace {

struct TupleTable {
  std::array<Symbol, kMaxTupleArity + 1> tuples;
  std::array<std::array<Symbol, kMaxTupleArity + 1>, kMaxTupleArity + 1> projs;
  TupleTable() {
    for (int n = 2; n <= kMaxTupleArity; ++n) {
      tuples[n] = Symbol{"tuple" + std::to_string(n), n,
                         SymbolKind::kConstructor, n, 0};
      for (int i = 1; i <= n; ++i) {
        projs[n][i] = Symbol{
            "proj_" + std::to_string(i) + "_" + std::to_string(n), 1,
            SymbolKind::kDestructor, n, i};
      }
    }
  }
};

const TupleTable& tuple_table() {
  static const TupleTable table;
  return table;
}

std::size_t mix(std::size_t seed, std::size_t v) {
  return seed ^ (v + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2));
}

}  // namespace

const Symbol& tuple_symbol(int arity) {
  if (arity < 2 || arity > kMaxTupleArity) {
    throw ArityError("tuple arity " + std::to_string(arity) +
                     " outside [2," + std::to_string(kMaxTupleArity) + "]");
  }
  return tuple_table().tuples[arity];
}

const Symbol& proj_symbol(int index, int arity) {
  tuple_symbol(arity);
  if (index < 1 || index > arity) {
    throw ArityError("projection index " + std::to_string(index) +
                     " outside tuple arity " + std::to_string(arity));
  }
  return tuple_table().projs[arity][index];
}

const Symbol* lookup_symbol(std::string_view name) {
  for (const Symbol* s : builtin_signature()) {
    if (s->name == name) return s;
  }
  for (int n = 2; n <= kMaxTupleArity; ++n) {
    if (tuple_table().tuples[n].name == name) return &tuple_table().tuples[n];
    for (int i = 1; i <= n; ++i) {
      if (tuple_table().projs[n][i].name == name) {
        return &tuple_table().projs[n][i];
      }
    }
  }
  return nullptr;
}

Term Term::finish(Node node) {
  std::size_t h = mix(static_cast<std::size_t>(node.kind) + 1,
                      std::hash<std::string>{}(node.id));
  if (node.kind == Kind::kApp) {
    h = mix(h, std::hash<std::string>{}(node.symbol->name));
    if (node.symbol->is_destructor()) node.traits |= kHasDestructor;
  }
  if (node.kind == Kind::kVar) node.traits |= kHasVar;
  if (node.kind == Kind::kChoice) node.traits |= kHasChoice;
  if (node.kind == Kind::kHandle) {
    node.traits |= kHasHandle;
    h = mix(h, static_cast<std::size_t>(node.index));
  }
  for (const Term& a : node.args) {
    h = mix(h, a.hash());
    node.traits |= a.node_->traits;
    node.size += a.size();
  }
  node.hash = h;
  return Term(std::make_shared<const Node>(std::move(node)));
}

Term Term::name(std::string id, bool is_public) {
  Node n;
  n.kind = Kind::kName;
  n.id = std::move(id);
  n.flag = is_public;
  return finish(std::move(n));
}

Term Term::var(std::string id, std::string type) {
  Node n;
  n.kind = Kind::kVar;
  n.id = std::move(id);
  n.type = std::move(type);
  return finish(std::move(n));
}

Term Term::handle(int index) {
  Node n;
  n.kind = Kind::kHandle;
  n.index = index;
  return finish(std::move(n));
}

Term Term::choice(Term left, Term right) {
  if (left.has_choice() || right.has_choice()) {
    throw Error("choice may not be nested inside another choice");
  }
  Node n;
  n.kind = Kind::kChoice;
  n.args = {std::move(left), std::move(right)};
  return finish(std::move(n));
}

Term make_term(const Symbol& symbol, std::vector<Term> args) {
  if (static_cast<int>(args.size()) != symbol.arity) {
    throw ArityError("symbol '" + symbol.name + "' expects " +
                     std::to_string(symbol.arity) + " argument(s), got " +
                     std::to_string(args.size()));
  }
  Term::Node n;
  n.kind = Term::Kind::kApp;
  n.symbol = &symbol;
  n.args = std::move(args);
  return Term::finish(std::move(n));
}

Term make_tuple(std::vector<Term> items) {
  const Symbol& s = tuple_symbol(static_cast<int>(items.size()));
  return make_term(s, std::move(items));
}

bool operator==(const Term& a, const Term& b) {
  if (a.node_ == b.node_) return true;
  if (!a.node_ || !b.node_) return false;
  if (a.hash() != b.hash() || a.kind() != b.kind()) return false;
  if (a.size() != b.size()) return false;
  return Term::compare(a, b) == 0;
}

int Term::compare(const Term& a, const Term& b) {
  if (a.node_ == b.node_) return 0;
  if (!a.node_) return -1;
  if (!b.node_) return 1;
  if (a.kind() != b.kind()) return a.kind() < b.kind() ? -1 : 1;
  switch (a.kind()) {
    case Kind::kName:
    case Kind::kVar:
      return a.id().compare(b.id()) < 0 ? -1 : (a.id() == b.id() ? 0 : 1);
    case Kind::kHandle:
      return a.handle_index() == b.handle_index()
                 ? 0
                 : (a.handle_index() < b.handle_index() ? -1 : 1);
    case Kind::kApp:
      if (&a.symbol() != &b.symbol()) {
        int c = a.symbol().name.compare(b.symbol().name);
        return c < 0 ? -1 : 1;
      }
      [[fallthrough]];
    case Kind::kChoice:
      for (std::size_t i = 0; i < a.args().size(); ++i) {
        int c = compare(a.arg(i), b.arg(i));
        if (c != 0) return c;
      }
      return 0;
  }
  return 0;
}

namespace {

void render(const Term& t, std::string& out) {
  switch (t.kind()) {
    case Term::Kind::kName:
      out += t.id();
      return;
    case Term::Kind::kVar:
      out += t.id();
      if (!t.type().empty()) {
        out += ':';
        out += t.type();
      }
      return;
    case Term::Kind::kHandle:
      out += 'w';
      out += std::to_string(t.handle_index());
      return;
    case Term::Kind::kChoice:
      out += "choice[";
      render(t.left(), out);
      out += ',';
      render(t.right(), out);
      out += ']';
      return;
    case Term::Kind::kApp:
      if (t.symbol().arity == 0) {
        out += t.symbol().name;
        return;
      }
      if (!t.symbol().is_tuple()) out += t.symbol().name;
      out += '(';
      for (std::size_t i = 0; i < t.args().size(); ++i) {
        if (i) out += ',';
        render(t.arg(i), out);
      }
      out += ')';
      return;
  }
}

}  // namespace

std::string Term::str() const {
  std::string out;
  if (node_) render(*this, out);
  return out;
}

std::ostream& operator<<(std::ostream& os, const Term& t) {
  return os << t.str();
}

const std::vector<RewriteRule>& builtin_rules() {
  static const std::vector<RewriteRule> rules = [] {
    Term m = Term::var("m"), r = Term::var("r"), sk = Term::var("sk");
    Term pub = make_term(sig::pk(), {sk});
    Term ct = make_term(sig::penc(), {m, r, pub});
    Term ok = make_term(sig::ok(), {});
    return std::vector<RewriteRule>{
        {"E1", make_term(sig::dec(), {ct, sk}), m},
        {"E2",
         make_term(sig::checksign(),
                   {make_term(sig::sign(), {sk, m}), m, pub}),
         ok},
        {"E3",
         make_term(sig::checkzkp(),
                   {make_term(sig::zkp(), {pub, r, m, ct})}),
         ok},
    };
  }();
  return rules;
}

std::optional<Substitution> match(const Term& pattern, const Term& subject,
                                  Substitution binding) {
  switch (pattern.kind()) {
    case Term::Kind::kVar: {
      auto it = binding.find(pattern.id());
      if (it == binding.end()) {
        binding.emplace(pattern.id(), subject);
      } else if (it->second != subject) {
        return std::nullopt;
      }
      return binding;
    }
    case Term::Kind::kApp:
      if (!subject.is_app() || &subject.symbol() != &pattern.symbol()) {
        return std::nullopt;
      }
      for (std::size_t i = 0; i < pattern.args().size(); ++i) {
        auto next = match(pattern.arg(i), subject.arg(i), std::move(binding));
        if (!next) return std::nullopt;
        binding = std::move(*next);
      }
      return binding;
    default:
      if (pattern != subject) return std::nullopt;
      return binding;
  }
}

Term substitute(const Term& t, const Substitution& s) {
  if (t.is_ground() || s.empty()) return t;
  switch (t.kind()) {
    case Term::Kind::kVar: {
      auto it = s.find(t.id());
      return it == s.end() ? t : it->second;
    }
    case Term::Kind::kApp: {
      std::vector<Term> args;
      args.reserve(t.args().size());
      for (const Term& a : t.args()) args.push_back(substitute(a, s));
      return make_term(t.symbol(), std::move(args));
    }
    case Term::Kind::kChoice:
      return Term::choice(substitute(t.left(), s), substitute(t.right(), s));
    default:
      return t;
  }
}

std::optional<Term> rewrite_root(const Term& t) {
  if (!t.is_app() || !t.symbol().is_destructor()) return std::nullopt;
  const Symbol& f = t.symbol();
  if (f.is_projection()) {
    const Term& x = t.arg(0);
    if (x.is_app() && x.symbol().is_tuple() &&
        x.symbol().tuple_arity == f.tuple_arity) {
      return x.arg(f.proj_index - 1);
    }
    return std::nullopt;
  }
  for (const RewriteRule& rule : builtin_rules()) {
    if (&rule.lhs.symbol() != &f) continue;
    if (auto sub = match(rule.lhs, t)) return substitute(rule.rhs, *sub);
  }
  return std::nullopt;
}

Term normalize(const Term& t) {
  if (t.has_choice()) {
    return combine(normalize(project(t, Side::kLeft)),
                   normalize(project(t, Side::kRight)));
  }
  if (!t.has_destructor() || !t.is_app()) return t;
  std::vector<Term> args;
  args.reserve(t.args().size());
  bool changed = false;
  for (const Term& a : t.args()) {
    args.push_back(normalize(a));
    changed |= args.back() != a;
  }
  Term u = changed ? make_term(t.symbol(), std::move(args)) : t;
  // Right-hand sides are variables bound to normal subterms, or ok.
  if (auto r = rewrite_root(u)) return *r;
  return u;
}

Term project(const Term& t, Side side) {
  if (!t.has_choice()) return t;
  switch (t.kind()) {
    case Term::Kind::kChoice:
      return side == Side::kLeft ? t.left() : t.right();
    case Term::Kind::kApp: {
      std::vector<Term> args;
      args.reserve(t.args().size());
      for (const Term& a : t.args()) args.push_back(project(a, side));
      return make_term(t.symbol(), std::move(args));
    }
    default:
      return t;
  }
}

Term combine(const Term& left, const Term& right) {
  if (left.has_choice() || right.has_choice()) {
    return combine(project(left, Side::kLeft), project(right, Side::kRight));
  }
  if (left == right) return left;
  if (left.is_app() && right.is_app() && &left.symbol() == &right.symbol()) {
    std::vector<Term> args;
    args.reserve(left.args().size());
    for (std::size_t i = 0; i < left.args().size(); ++i) {
      args.push_back(combine(left.arg(i), right.arg(i)));
    }
    return make_term(left.symbol(), std::move(args));
  }
  return Term::choice(left, right);
}

namespace detail {

Term parse_term(TokenStream& ts, const IdentResolver& resolve) {
  if (ts.accept("(")) {
    std::vector<Term> items;
    items.push_back(parse_term(ts, resolve));
    while (ts.accept(",")) items.push_back(parse_term(ts, resolve));
    ts.expect(")");
    if (items.size() == 1) return items.front();
    if (static_cast<int>(items.size()) > kMaxTupleArity) {
      ts.fail("tuple too long");
    }
    return make_tuple(std::move(items));
  }
  if (ts.peek().kind != Token::Kind::kIdent) ts.fail("expected term");
  Token tok = ts.next();
  if (tok.text == "choice" && ts.is("[")) {
    ts.next();
    Term l = parse_term(ts, resolve);
    ts.expect(",");
    Term r = parse_term(ts, resolve);
    ts.expect("]");
    try {
      return Term::choice(std::move(l), std::move(r));
    } catch (const Error& e) {
      throw ParseError(e.what(), tok.line, tok.column);
    }
  }
  if (ts.is("(")) {
    const Symbol* s = lookup_symbol(tok.text);
    if (!s) {
      throw ParseError("unknown function symbol '" + tok.text + "'",
                       tok.line, tok.column);
    }
    ts.next();
    std::vector<Term> args;
    if (!ts.is(")")) {
      args.push_back(parse_term(ts, resolve));
      while (ts.accept(",")) args.push_back(parse_term(ts, resolve));
    }
    ts.expect(")");
    if (static_cast<int>(args.size()) != s->arity) {
      throw ArityError(std::to_string(tok.line) + ":" +
                       std::to_string(tok.column) + ": symbol '" + s->name +
                       "' expects " + std::to_string(s->arity) +
                       " argument(s), got " + std::to_string(args.size()));
    }
    return make_term(*s, std::move(args));
  }
  if (const Symbol* s = lookup_symbol(tok.text); s && s->arity == 0) {
    return make_term(*s, {});
  }
  return resolve(tok, ts);
}

}  // namespace detail

Term parse_term(std::string_view text) {
  detail::TokenStream ts(detail::tokenize(text));
  Term t = detail::parse_term(
      ts, [](const detail::Token& tok, detail::TokenStream&) {
        return Term::name(tok.text);
      });
  if (!ts.at_end()) ts.fail("trailing input after term");
  return t;
}

}  // namespace ballotscope
