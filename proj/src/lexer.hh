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

#ifndef BALLOTSCOPE_SRC_LEXER_HH_
#define BALLOTSCOPE_SRC_LEXER_HH_

#include <string>
#include <string_view>
#include <vector>

#include "ballotscope/error.hh"

namespace ballotscope::detail {

struct Token {
  enum class Kind { kIdent, kNumber, kPunct, kEnd };
  Kind kind;
  std::string text;
  int line;
  int column;
};

/// Splits DSL and term text into tokens. `#` starts a line comment unless
/// it directly follows an identifier and precedes a digit (`r#3`).
std::vector<Token> tokenize(std::string_view source);

class TokenStream {
 public:
  explicit TokenStream(std::vector<Token> tokens) : toks_(std::move(tokens)) {}

  const Token& peek(std::size_t ahead = 0) const {
    std::size_t i = pos_ + ahead;
    return i < toks_.size() ? toks_[i] : toks_.back();
  }
  const Token& next() {
    const Token& t = peek();
    if (pos_ + 1 < toks_.size()) ++pos_;
    return t;
  }
  bool at_end() const { return peek().kind == Token::Kind::kEnd; }
  bool is(std::string_view text) const {
    return peek().kind != Token::Kind::kEnd && peek().text == text;
  }
  bool accept(std::string_view text) {
    if (!is(text)) return false;
    next();
    return true;
  }
  const Token& expect(std::string_view text) {
    if (!is(text)) fail("expected '" + std::string(text) + "'");
    return next();
  }
  const Token& expect_ident() {
    if (peek().kind != Token::Kind::kIdent) fail("expected identifier");
    return next();
  }
  [[noreturn]] void fail(const std::string& msg) const {
    const Token& t = peek();
    std::string got = t.kind == Token::Kind::kEnd ? "end of input"
                                                  : "'" + t.text + "'";
    throw ParseError(msg + ", got " + got, t.line, t.column);
  }

 private:
  std::vector<Token> toks_;
  std::size_t pos_ = 0;
};

}  // namespace ballotscope::detail

#endif  // BALLOTSCOPE_SRC_LEXER_HH_
