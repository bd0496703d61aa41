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
#include <set>

#include "ballotscope/deduction.hh"
#include "ballotscope/error.hh"
#include "oracle.hh"

using namespace ballotscope;

namespace {

Knowledge know(std::initializer_list<const char*> terms) {
  Knowledge k;
  for (const char* t : terms) k.entries.push_back(parse_term(t));
  return k;
}

bool contains(const std::vector<Term>& v, const Term& t) {
  return std::find(v.begin(), v.end(), t) != v.end();
}

DeductionContext public_ab() {
  DeductionContext ctx;
  ctx.public_leaves = {Term::name("a", true), Term::name("b", true)};
  return ctx;
}

}  // namespace

TEST_CASE("decryption with a known key") {
  Knowledge k = know({"sk", "penc(m,r,pk(sk))"});
  CHECK(contains(saturate(k, 3), parse_term("m")));
  auto r = derivable(k, parse_term("m"), 3);
  REQUIRE(r.has_value());
  CHECK(r->str() == "dec(w2,w1)");
}

TEST_CASE("keys are not derivable from public keys") {
  Knowledge k = know({"pk(sk)"});
  for (int d = 1; d <= 4; ++d) {
    CHECK_FALSE(contains(saturate(k, d), parse_term("sk")));
  }
  CHECK_FALSE(derivable(know({"penc(m,r,pk(sk))"}), parse_term("m"), 5));
}

TEST_CASE("constructor closure") {
  auto r = derivable(know({"m"}), parse_term("hash(hash(m))"), 3);
  REQUIRE(r.has_value());
  CHECK(r->str() == "hash(hash(w1))");
  auto s = saturate(know({"m1", "m2"}), 2);
  CHECK(contains(s, parse_term("hash(m1)")));
  CHECK(contains(s, parse_term("pk(m2)")));
  CHECK_FALSE(contains(s, parse_term("sign(m1,m2)")));  // size 3
  auto s3 = saturate(know({"m1", "m2"}), 3);
  CHECK(contains(s3, parse_term("sign(m1,m2)")));
  CHECK(contains(s3, parse_term("(m1,m2)")));
}

TEST_CASE("saturate matches the value-closure oracle on two handles") {
  Knowledge k = know({"m1", "m2"});
  for (int d = 1; d <= 3; ++d) {
    auto mine = saturate(k, d);
    auto ref = oracle::value_closure(k.entries, {}, d);
    std::set<Term> got(mine.begin(), mine.end());
    CHECK(got.size() == mine.size());
    std::set<Term> want;
    for (const auto& [t, size] : ref) want.insert(t);
    CHECK(got == want);
  }
}

TEST_CASE("static equivalence examples") {
  FramePair same{know({"m"}), know({"m"})};
  CHECK(statically_equivalent(same, 3).equivalent);

  FramePair rep{know({"a", "a"}), know({"a", "b"})};
  auto r = statically_equivalent(rep, 3, public_ab());
  REQUIRE_FALSE(r.equivalent);
  REQUIRE(r.witness.has_value());
  CHECK(r.witness->separates(rep.left.entries, rep.right.entries));

  FramePair ct{know({"penc(a,r1,pk(sk))"}), know({"penc(b,r2,pk(sk))"})};
  CHECK(statically_equivalent(ct, 3, public_ab()).equivalent);
  CHECK(oracle::statically_equivalent(ct.left.entries, ct.right.entries,
                                      public_ab().public_leaves, 3));
}

TEST_CASE("known key breaks ciphertext indistinguishability") {
  FramePair fp{know({"penc(a,r1,pk(sk))", "sk"}),
               know({"penc(b,r2,pk(sk))", "sk"})};
  auto r = statically_equivalent(fp, 3, public_ab());
  CHECK_FALSE(r.equivalent);
  CHECK_FALSE(oracle::statically_equivalent(fp.left.entries, fp.right.entries,
                                            public_ab().public_leaves, 3));
  REQUIRE(r.witness);
  CHECK(r.witness->separates(fp.left.entries, fp.right.entries));
}

TEST_CASE("success test distinguishes decryptable ciphertexts") {
  FramePair fp{know({"penc(m,r,pk(k1))", "k1"}), know({"penc(m,r,pk(k2))", "k1"})};
  auto r = statically_equivalent(fp, 3);
  REQUIRE_FALSE(r.equivalent);
  CHECK(r.witness->kind == Distinguisher::Kind::kSuccess);
  CHECK(r.witness->separates(fp.left.entries, fp.right.entries));
}

TEST_CASE("enumeration bound raises BoundError") {
  DeductionContext ctx;
  ctx.max_classes = 20;
  CHECK_THROWS_AS(saturate(know({"m1", "m2", "m3"}), 4, ctx), BoundError);
}

TEST_CASE("evaluate fails on stuck destructors") {
  std::vector<Term> frame = {parse_term("hash(m)"), parse_term("k")};
  Term w1 = Term::handle(1), w2 = Term::handle(2);
  CHECK_FALSE(evaluate(make_term(sig::dec(), {w1, w2}), frame).has_value());
  CHECK(evaluate(make_term(sig::hash(), {w2}), frame)->str() == "hash(k)");
}

TEST_CASE("property: derivable agrees with the value-closure oracle") {
  oracle::TermGen gen(21);
  DeductionContext ctx = public_ab();
  for (int round = 0; round < 60; ++round) {
    Knowledge k;
    int entries = gen.uniform(1, 4);
    while (static_cast<int>(k.entries.size()) < entries) {
      Term t = gen.message(gen.uniform(1, 4));
      if (oracle::term_depth(t) <= 4) k.entries.push_back(t);
    }
    int depth = gen.uniform(1, 4);
    auto ref = oracle::value_closure(k.entries, ctx.public_leaves, depth);
    std::vector<Term> targets;
    for (const auto& [t, size] : ref) {
      if (gen.uniform(0, 3) == 0) targets.push_back(t);
    }
    for (int i = 0; i < 10; ++i) targets.push_back(gen.message(gen.uniform(1, 3)));
    for (const Term& t : targets) {
      auto got = derivable(k, t, depth, ctx);
      auto it = ref.find(t);
      REQUIRE(got.has_value() == (it != ref.end()));
      if (got) {
        CHECK(static_cast<int>(got->size()) == it->second);
        CHECK(oracle::evaluate(*got, k.entries) == t);
      }
    }
  }
}

TEST_CASE("property: saturation is monotone in the knowledge") {
  oracle::TermGen gen(23);
  for (int round = 0; round < 40; ++round) {
    Knowledge small;
    for (int i = gen.uniform(1, 2); i > 0; --i) small.entries.push_back(gen.message(3));
    Knowledge big = small;
    big.entries.push_back(gen.message(3));
    auto a = saturate(small, 3);
    auto b = saturate(big, 3);
    std::set<Term> bs(b.begin(), b.end());
    for (const Term& t : a) CHECK(bs.count(t) == 1);
  }
}

TEST_CASE("property: static equivalence agrees with the recipe-pair oracle") {
  oracle::TermGen gen(29);
  DeductionContext ctx = public_ab();
  int attacks = 0;
  for (int round = 0; round < 60; ++round) {
    Knowledge l, r;
    int len = gen.uniform(1, 2);
    for (int i = 0; i < len; ++i) {
      Term t = gen.message(gen.uniform(1, 3));
      l.entries.push_back(t);
      r.entries.push_back(gen.uniform(0, 1) ? t : gen.message(gen.uniform(1, 3)));
    }
    FramePair fp{l, r};
    FramePair swapped{r, l};
    auto res = statically_equivalent(fp, 3, ctx);
    bool ref = oracle::statically_equivalent(l.entries, r.entries,
                                             ctx.public_leaves, 3);
    CHECK(res.equivalent == ref);
    CHECK(statically_equivalent(swapped, 3, ctx).equivalent == res.equivalent);
    CHECK(statically_equivalent(FramePair{l, l}, 3, ctx).equivalent);
    if (!res.equivalent) {
      ++attacks;
      REQUIRE(res.witness);
      CHECK(res.witness->separates(l.entries, r.entries));
    }
  }
  CHECK(attacks > 0);
}
