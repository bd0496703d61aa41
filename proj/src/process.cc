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

#include "ballotscope/process.hh"

#include "ballotscope/error.hh"

namespace ballotscope {

namespace {

Proc make(Process p) { return std::make_shared<const Process>(std::move(p)); }

Term rename_term(const Term& t,
                 const std::unordered_map<std::string, std::string>& map) {
  switch (t.kind()) {
    case Term::Kind::kName: {
      auto it = map.find(t.id());
      return it == map.end() ? t : Term::name(it->second, t.is_public());
    }
    case Term::Kind::kApp: {
      std::vector<Term> args;
      for (const Term& a : t.args()) args.push_back(rename_term(a, map));
      return make_term(t.symbol(), std::move(args));
    }
    case Term::Kind::kChoice:
      return Term::choice(rename_term(t.left(), map),
                          rename_term(t.right(), map));
    default:
      return t;
  }
}

template <class F>
Proc rebuild(const Proc& p, F&& term_fn, const std::vector<Proc>& next) {
  Process q = *p;
  if (q.first.valid()) q.first = term_fn(q.first);
  if (q.second.valid()) q.second = term_fn(q.second);
  for (Term& a : q.args) a = term_fn(a);
  q.next = next;
  return make(std::move(q));
}

void vars_of(const Term& t, std::set<std::string>& out) {
  if (t.is_ground()) return;
  if (t.is_var()) {
    out.insert(t.id());
    return;
  }
  for (const Term& a : t.args()) vars_of(a, out);
}

}  // namespace

const std::string& Process::masked() const {
  if (masked_.text.empty()) {
    // Rendering through a temporary shared_ptr would copy; render fields
    // directly instead by wrapping this node without ownership.
    Proc self(Proc{}, this);
    NameCanon canon(true);
    render_process(self, masked_.text, &canon);
  }
  return masked_.text;
}

Proc stop(SourcePos pos) {
  Process p;
  p.kind = Process::Kind::kStop;
  p.pos = pos;
  return make(std::move(p));
}

Proc output(Channel ch, Term payload, Proc cont, SourcePos pos) {
  Process p;
  p.kind = Process::Kind::kOutput;
  p.channel = std::move(ch);
  p.first = std::move(payload);
  p.next = {std::move(cont)};
  p.pos = pos;
  return make(std::move(p));
}

Proc input(Channel ch, Term pattern, Proc cont, SourcePos pos) {
  Process p;
  p.kind = Process::Kind::kInput;
  p.channel = std::move(ch);
  p.first = std::move(pattern);
  p.next = {std::move(cont)};
  p.pos = pos;
  return make(std::move(p));
}

Proc parallel(std::vector<Proc> parts, SourcePos pos) {
  if (parts.empty()) return stop(pos);
  if (parts.size() == 1) return parts.front();
  Process p;
  p.kind = Process::Kind::kParallel;
  p.next = std::move(parts);
  p.pos = pos;
  return make(std::move(p));
}

Proc restrict(std::string name, Proc cont, SourcePos pos) {
  Process p;
  p.kind = Process::Kind::kRestrict;
  p.name = std::move(name);
  p.next = {std::move(cont)};
  p.pos = pos;
  return make(std::move(p));
}

Proc if_eq(Term lhs, Term rhs, Proc then_branch, Proc else_branch,
           SourcePos pos) {
  Process p;
  p.kind = Process::Kind::kIfEq;
  p.first = std::move(lhs);
  p.second = std::move(rhs);
  p.next = {std::move(then_branch), std::move(else_branch)};
  p.pos = pos;
  return make(std::move(p));
}

Proc barrier(int phase, Proc cont, bool swap, SourcePos pos) {
  Process p;
  p.kind = Process::Kind::kBarrier;
  p.phase = phase;
  p.swap = swap;
  p.next = {std::move(cont)};
  p.pos = pos;
  return make(std::move(p));
}

Proc event(std::string label, std::vector<Term> args, Proc cont,
           SourcePos pos) {
  Process p;
  p.kind = Process::Kind::kEvent;
  p.name = std::move(label);
  p.args = std::move(args);
  p.next = {std::move(cont)};
  p.pos = pos;
  return make(std::move(p));
}

Proc diff(Proc left, Proc right, SourcePos pos) {
  Process p;
  p.kind = Process::Kind::kDiff;
  p.next = {std::move(left), std::move(right)};
  p.pos = pos;
  return make(std::move(p));
}

std::set<std::string> pattern_vars(const Term& pattern) {
  std::set<std::string> out;
  vars_of(pattern, out);
  return out;
}

Proc substitute(const Proc& p, const Substitution& s) {
  if (s.empty()) return p;
  auto term_fn = [&](const Term& t) { return substitute(t, s); };
  std::vector<Proc> next;
  next.reserve(p->next.size());
  if (p->kind == Process::Kind::kInput) {
    Substitution inner = s;
    for (const auto& v : pattern_vars(p->first)) inner.erase(v);
    next.push_back(substitute(p->cont(), inner));
    Process q = *p;
    q.next = std::move(next);
    return make(std::move(q));
  }
  for (const Proc& n : p->next) next.push_back(substitute(n, s));
  return rebuild(p, term_fn, next);
}

Proc rename_names(const Proc& p,
                  const std::unordered_map<std::string, std::string>& map) {
  if (map.empty()) return p;
  std::vector<Proc> next;
  for (const Proc& n : p->next) next.push_back(rename_names(n, map));
  Proc q = rebuild(p, [&](const Term& t) { return rename_term(t, map); }, next);
  if (q->kind == Process::Kind::kRestrict) {
    auto it = map.find(q->name);
    if (it != map.end()) {
      Process r = *q;
      r.name = it->second;
      return make(std::move(r));
    }
  }
  return q;
}

Proc map_channels(const Proc& p,
                  const std::function<Channel(const Channel&)>& f) {
  std::vector<Proc> next;
  for (const Proc& n : p->next) next.push_back(map_channels(n, f));
  Process q = *p;
  q.next = std::move(next);
  if (q.kind == Process::Kind::kOutput || q.kind == Process::Kind::kInput) {
    q.channel = f(q.channel);
  }
  return make(std::move(q));
}

Proc project(const Proc& p, Side side) {
  if (p->kind == Process::Kind::kDiff) {
    return project(side == Side::kLeft ? p->next[0] : p->next[1], side);
  }
  std::vector<Proc> next;
  for (const Proc& n : p->next) next.push_back(project(n, side));
  return rebuild(p, [&](const Term& t) { return ballotscope::project(t, side); },
                 next);
}

std::optional<Proc> merge(const Proc& l, const Proc& r) {
  if (l->kind != r->kind || l->kind == Process::Kind::kDiff) return std::nullopt;
  if (l->channel != r->channel || l->name != r->name || l->phase != r->phase ||
      l->swap != r->swap || l->next.size() != r->next.size() ||
      l->args.size() != r->args.size()) {
    return std::nullopt;
  }
  if (l->kind == Process::Kind::kInput && l->first != r->first) {
    return std::nullopt;
  }
  Process q = *l;
  if (q.first.valid()) q.first = combine(l->first, r->first);
  if (q.second.valid()) q.second = combine(l->second, r->second);
  for (std::size_t i = 0; i < q.args.size(); ++i) {
    q.args[i] = combine(l->args[i], r->args[i]);
  }
  for (std::size_t i = 0; i < q.next.size(); ++i) {
    auto m = merge(l->next[i], r->next[i]);
    if (!m) return std::nullopt;
    q.next[i] = std::move(*m);
  }
  return make(std::move(q));
}

std::set<std::string> free_vars(const Proc& p) {
  std::set<std::string> out;
  if (p->first.valid() && p->kind != Process::Kind::kInput) vars_of(p->first, out);
  if (p->second.valid()) vars_of(p->second, out);
  for (const Term& a : p->args) vars_of(a, out);
  std::set<std::string> bound;
  if (p->kind == Process::Kind::kInput) bound = pattern_vars(p->first);
  for (const Proc& n : p->next) {
    for (const auto& v : free_vars(n)) {
      if (!bound.count(v)) out.insert(v);
    }
  }
  return out;
}

bool equal(const Proc& a, const Proc& b) {
  if (a == b) return true;
  if (a->kind != b->kind || a->channel != b->channel || a->name != b->name ||
      a->phase != b->phase || a->swap != b->swap ||
      a->first.valid() != b->first.valid() ||
      a->second.valid() != b->second.valid() ||
      a->args.size() != b->args.size() || a->next.size() != b->next.size()) {
    return false;
  }
  if (a->first.valid() &&
      (a->first != b->first || a->first.str() != b->first.str())) {
    return false;
  }
  if (a->second.valid() && a->second != b->second) return false;
  for (std::size_t i = 0; i < a->args.size(); ++i) {
    if (a->args[i] != b->args[i]) return false;
  }
  for (std::size_t i = 0; i < a->next.size(); ++i) {
    if (!equal(a->next[i], b->next[i])) return false;
  }
  return true;
}

void NameCanon::append(const std::string& id, std::string& out) {
  auto hash = id.find('#');
  if (hash == std::string::npos) {
    out += id;
    return;
  }
  out.append(id, 0, hash + 1);
  if (mask_) return;
  if (frozen_) {
    auto it = index_.find(id);
    if (it != index_.end()) out += std::to_string(it->second);
    return;
  }
  auto [it, fresh] = index_.try_emplace(id, static_cast<int>(index_.size()));
  out += std::to_string(it->second);
}

void render_term(const Term& t, std::string& out, NameCanon* canon) {
  if (!canon) {
    out += t.str();
    return;
  }
  switch (t.kind()) {
    case Term::Kind::kName:
      canon->append(t.id(), out);
      return;
    case Term::Kind::kChoice:
      out += "choice[";
      render_term(t.left(), out, canon);
      out += ',';
      render_term(t.right(), out, canon);
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
        render_term(t.arg(i), out, canon);
      }
      out += ')';
      return;
    default:
      out += t.str();
  }
}

void render_process(const Proc& p, std::string& out, NameCanon* canon) {
  switch (p->kind) {
    case Process::Kind::kStop:
      out += '0';
      return;
    case Process::Kind::kOutput:
    case Process::Kind::kInput:
      out += p->kind == Process::Kind::kOutput ? "out(" : "in(";
      out += p->channel.str();
      out += ',';
      render_term(p->first, out, canon);
      out += ").";
      render_process(p->cont(), out, canon);
      return;
    case Process::Kind::kParallel:
      out += '(';
      for (std::size_t i = 0; i < p->next.size(); ++i) {
        if (i) out += " | ";
        render_process(p->next[i], out, canon);
      }
      out += ')';
      return;
    case Process::Kind::kRestrict:
      out += "new ";
      if (canon) {
        canon->append(p->name, out);
      } else {
        out += p->name;
      }
      out += '.';
      render_process(p->cont(), out, canon);
      return;
    case Process::Kind::kIfEq: {
      out += "if ";
      render_term(p->first, out, canon);
      out += " = ";
      render_term(p->second, out, canon);
      out += " then ";
      bool wrap = p->next[0]->kind == Process::Kind::kIfEq;
      if (wrap) out += '(';
      render_process(p->next[0], out, canon);
      if (wrap) out += ')';
      out += " else ";
      render_process(p->next[1], out, canon);
      return;
    }
    case Process::Kind::kBarrier:
      out += "barrier ";
      out += std::to_string(p->phase);
      if (p->swap) out += " swap";
      if (!p->name.empty()) {
        // Owner tag "R/i": role R, voter instance i.
        auto slash = p->name.find('/');
        out += " for ";
        out.append(p->name, 0, slash);
        out += ' ';
        out.append(p->name, slash + 1);
      }
      out += '.';
      render_process(p->cont(), out, canon);
      return;
    case Process::Kind::kEvent:
      out += "event ";
      out += p->name;
      if (!p->args.empty()) {
        out += '(';
        for (std::size_t i = 0; i < p->args.size(); ++i) {
          if (i) out += ',';
          render_term(p->args[i], out, canon);
        }
        out += ')';
      }
      out += '.';
      render_process(p->cont(), out, canon);
      return;
    case Process::Kind::kDiff:
      out += "choice[";
      render_process(p->next[0], out, canon);
      out += ", ";
      render_process(p->next[1], out, canon);
      out += ']';
      return;
  }
}

std::string render_process(const Proc& p) {
  std::string out;
  render_process(p, out);
  return out;
}

}  // namespace ballotscope
