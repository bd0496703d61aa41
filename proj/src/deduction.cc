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

#include "ballotscope/deduction.hh"

#include <functional>
#include <unordered_map>
#include <utility>

#include "ballotscope/error.hh"

namespace ballotscope {

std::optional<Term> evaluate(const Recipe& recipe,
                             std::span<const Term> frame) {
  switch (recipe.kind()) {
    case Term::Kind::kHandle: {
      int i = recipe.handle_index();
      if (i < 1 || static_cast<std::size_t>(i) > frame.size()) {
        throw Error("recipe handle " + recipe.str() + " outside frame of " +
                    std::to_string(frame.size()));
      }
      return frame[i - 1];
    }
    case Term::Kind::kName:
      return recipe;
    case Term::Kind::kApp: {
      std::vector<Term> args;
      args.reserve(recipe.args().size());
      for (const Term& a : recipe.args()) {
        auto v = evaluate(a, frame);
        if (!v) return std::nullopt;
        args.push_back(std::move(*v));
      }
      Term t = make_term(recipe.symbol(), std::move(args));
      if (recipe.symbol().is_destructor()) return rewrite_root(t);
      return t;
    }
    default:
      throw Error("not a recipe: " + recipe.str());
  }
}

std::string Distinguisher::str() const {
  if (kind == Kind::kSuccess) return first.str() + " succeeds";
  return first.str() + " = " + second.str();
}

bool Distinguisher::separates(std::span<const Term> left,
                              std::span<const Term> right) const {
  auto holds = [&](std::span<const Term> frame) {
    auto a = evaluate(first, frame);
    if (kind == Kind::kSuccess) return a.has_value();
    auto b = evaluate(second, frame);
    return a && b && *a == *b;
  };
  bool l = holds(left), r = holds(right);
  return l != r && l == (holds_on == Side::kLeft);
}

namespace {

struct PairHash {
  std::size_t operator()(const std::pair<Term, Term>& p) const {
    return p.first.hash() * 31 + p.second.hash();
  }
};

const std::vector<const Symbol*>& recipe_symbols(int max_tuple) {
  static thread_local std::vector<const Symbol*> cache;
  static thread_local int cached_for = -1;
  if (cached_for != max_tuple) {
    cache.clear();
    for (const Symbol* s : builtin_signature()) {
      if (s->arity > 0) cache.push_back(s);
    }
    for (int n = 2; n <= max_tuple; ++n) cache.push_back(&tuple_symbol(n));
    for (int n = 2; n <= max_tuple; ++n) {
      for (int i = 1; i <= n; ++i) cache.push_back(&proj_symbol(i, n));
    }
    cached_for = max_tuple;
  }
  return cache;
}

// Head symbol the first argument of a destructor must carry to reduce.
const Symbol* required_head(const Symbol& f) {
  if (&f == &sig::dec()) return &sig::penc();
  if (&f == &sig::checksign()) return &sig::sign();
  if (&f == &sig::checkzkp()) return &sig::zkp();
  if (f.is_projection()) return &tuple_symbol(f.tuple_arity);
  return nullptr;
}

class Enumerator {
 public:
  Enumerator(std::span<const std::vector<Term>* const> frames, int depth,
             const DeductionContext& ctx)
      : frames_(frames), depth_(depth), ctx_(ctx), sides_(frames.size()) {
    for (std::size_t k = 1; k < sides_; ++k) {
      if (frames_[k]->size() != frames_[0]->size()) {
        throw Error("frames of different lengths");
      }
    }
    per_side_.resize(sides_);
  }

  Enumeration run() {
    layers_.assign(depth_ + 1, {});
    if (depth_ >= 1) leaves();
    for (int s = 2; s <= depth_ && !out_.distinguisher; ++s) layer(s);
    return std::move(out_);
  }

 private:
  // values[k] empty optional means the computation failed on side k.
  void offer(const std::vector<std::optional<Term>>& values, int size,
             const std::function<Recipe()>& build) {
    if (out_.distinguisher) return;
    std::size_t ok_count = 0;
    for (const auto& v : values) ok_count += v.has_value();
    if (ok_count == 0) return;
    if (ok_count != sides_) {
      Side side = values[0] ? Side::kLeft : Side::kRight;
      out_.distinguisher =
          Distinguisher{Distinguisher::Kind::kSuccess, build(), Recipe{}, side};
      return;
    }
    if (sides_ == 1) {
      auto [it, fresh] = per_side_[0].try_emplace(*values[0], 0);
      if (!fresh) return;
      it->second = static_cast<int>(out_.classes.size());
    } else {
      auto l = per_side_[0].find(*values[0]);
      auto r = per_side_[1].find(*values[1]);
      int il = l == per_side_[0].end() ? -1 : l->second;
      int ir = r == per_side_[1].end() ? -1 : r->second;
      if (il >= 0 && il == ir) return;
      if (il >= 0 || ir >= 0) {
        int earlier;
        Side side;
        if (il >= 0 && (ir < 0 || il < ir)) {
          earlier = il;
          side = Side::kLeft;
        } else {
          earlier = ir;
          side = Side::kRight;
        }
        out_.distinguisher =
            Distinguisher{Distinguisher::Kind::kEquality,
                          out_.classes[earlier].recipe, build(), side};
        return;
      }
      int idx = static_cast<int>(out_.classes.size());
      per_side_[0].emplace(*values[0], idx);
      per_side_[1].emplace(*values[1], idx);
    }
    if (out_.classes.size() >= ctx_.max_classes) {
      throw BoundError("recipe enumeration exceeded " +
                       std::to_string(ctx_.max_classes) + " classes");
    }
    std::vector<Term> vals;
    vals.reserve(sides_);
    for (const auto& v : values) vals.push_back(*v);
    layers_[size].push_back(static_cast<int>(out_.classes.size()));
    out_.classes.push_back(RecipeClass{build(), std::move(vals), size});
  }

  void leaves() {
    std::vector<std::optional<Term>> values(sides_);
    std::size_t n = frames_[0]->size();
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t k = 0; k < sides_; ++k) values[k] = (*frames_[k])[i];
      offer(values, 1, [&] { return Term::handle(static_cast<int>(i) + 1); });
    }
    Term ok = make_term(sig::ok(), {});
    for (auto& v : values) v = ok;
    offer(values, 1, [&] { return ok; });
    for (const Term& leaf : ctx_.public_leaves) {
      for (auto& v : values) v = leaf;
      offer(values, 1, [&] { return leaf; });
    }
  }

  void layer(int s) {
    for (const Symbol* f : recipe_symbols(ctx_.max_tuple_arity)) {
      int k = f->arity;
      if (k > s - 1) continue;
      std::vector<int> parts(k, 1);
      compose(*f, parts, 0, s - 1 - k, s);
      if (out_.distinguisher) return;
    }
  }

  // Distributes `rest` extra size units over parts[pos..], lexicographically.
  void compose(const Symbol& f, std::vector<int>& parts, std::size_t pos,
               int rest, int s) {
    if (out_.distinguisher) return;
    if (pos + 1 == parts.size()) {
      parts[pos] = 1 + rest;
      std::vector<int> chosen(parts.size());
      product(f, parts, chosen, 0, s);
      parts[pos] = 1;
      return;
    }
    for (int extra = 0; extra <= rest; ++extra) {
      parts[pos] = 1 + extra;
      compose(f, parts, pos + 1, rest - extra, s);
      parts[pos] = 1;
    }
  }

  void product(const Symbol& f, const std::vector<int>& parts,
               std::vector<int>& chosen, std::size_t pos, int s) {
    if (out_.distinguisher) return;
    if (pos == parts.size()) {
      apply(f, chosen, s);
      return;
    }
    // Snapshot: layers of smaller sizes are complete and stable here.
    const std::vector<int>& layer = layers_[parts[pos]];
    const Symbol* head = pos == 0 ? required_head(f) : nullptr;
    for (int idx : layer) {
      if (head) {
        bool any = false;
        for (const Term& v : out_.classes[idx].values) {
          any |= v.is_app() && &v.symbol() == head;
        }
        if (!any) continue;
      }
      chosen[pos] = idx;
      product(f, parts, chosen, pos + 1, s);
      if (out_.distinguisher) return;
    }
  }

  void apply(const Symbol& f, const std::vector<int>& chosen, int s) {
    std::vector<std::optional<Term>> values(sides_);
    for (std::size_t k = 0; k < sides_; ++k) {
      std::vector<Term> args;
      args.reserve(chosen.size());
      for (int idx : chosen) args.push_back(out_.classes[idx].values[k]);
      Term t = make_term(f, std::move(args));
      if (f.is_destructor()) {
        values[k] = rewrite_root(t);
      } else {
        values[k] = std::move(t);
      }
    }
    offer(values, s, [&] {
      std::vector<Term> args;
      args.reserve(chosen.size());
      for (int idx : chosen) args.push_back(out_.classes[idx].recipe);
      return make_term(f, std::move(args));
    });
  }

  std::span<const std::vector<Term>* const> frames_;
  int depth_;
  const DeductionContext& ctx_;
  std::size_t sides_;
  std::vector<std::unordered_map<Term, int, TermHash>> per_side_;
  std::vector<std::vector<int>> layers_;
  Enumeration out_;
};

}  // namespace

Enumeration enumerate_classes(std::span<const std::vector<Term>* const> frames,
                              int depth, const DeductionContext& ctx) {
  if (frames.empty() || frames.size() > 2) {
    throw Error("recipe enumeration expects one or two frames");
  }
  return Enumerator(frames, depth, ctx).run();
}

std::vector<Term> saturate(const Knowledge& k, int depth,
                           const DeductionContext& ctx) {
  const std::vector<Term>* frames[] = {&k.entries};
  Enumeration e = enumerate_classes(frames, depth, ctx);
  std::vector<Term> out;
  out.reserve(e.classes.size());
  for (auto& c : e.classes) out.push_back(std::move(c.values[0]));
  return out;
}

std::optional<Recipe> derivable(const Knowledge& k, const Term& target,
                                int depth, const DeductionContext& ctx) {
  const std::vector<Term>* frames[] = {&k.entries};
  Enumeration e = enumerate_classes(frames, depth, ctx);
  for (const RecipeClass& c : e.classes) {
    if (c.values[0] == target) return c.recipe;
  }
  return std::nullopt;
}

StaticResult statically_equivalent(const FramePair& fp, int depth,
                                   const DeductionContext& ctx) {
  const std::vector<Term>* frames[] = {&fp.left.entries, &fp.right.entries};
  Enumeration e = enumerate_classes(frames, depth, ctx);
  StaticResult r;
  if (e.distinguisher) {
    r.equivalent = false;
    r.witness = std::move(e.distinguisher);
  }
  return r;
}

}  // namespace ballotscope
