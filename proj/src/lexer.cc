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

#include "lexer.hh"

#include <cctype>

namespace ballotscope::detail {

namespace {

bool ident_start(char c) {
  return std::isalpha(static_cast<unsigned char>(c)) || c == '_';
}
bool ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\'';
}

}  // namespace

std::vector<Token> tokenize(std::string_view src) {
  std::vector<Token> out;
  int line = 1, col = 1;
  std::size_t i = 0;
  auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n && i < src.size(); ++k, ++i) {
      if (src[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
  };
  while (i < src.size()) {
    char c = src[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      advance(1);
      continue;
    }
    if (c == '#') {
      while (i < src.size() && src[i] != '\n') advance(1);
      continue;
    }
    int tl = line, tc = col;
    if (ident_start(c)) {
      std::size_t j = i;
      while (j < src.size() && ident_char(src[j])) ++j;
      if (j + 1 < src.size() && src[j] == '#' &&
          std::isdigit(static_cast<unsigned char>(src[j + 1]))) {
        ++j;
        while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j])))
          ++j;
      }
      // Channel components may carry an instance marker, e.g. ballot%.
      if (j < src.size() && src[j] == '%') ++j;
      out.push_back({Token::Kind::kIdent, std::string(src.substr(i, j - i)), tl, tc});
      advance(j - i);
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t j = i;
      while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j]))) ++j;
      out.push_back({Token::Kind::kNumber, std::string(src.substr(i, j - i)), tl, tc});
      advance(j - i);
      continue;
    }
    static constexpr std::string_view kPunct = "()[],.=|:;";
    if (kPunct.find(c) == std::string_view::npos) {
      throw ParseError(std::string("unexpected character '") + c + "'", tl, tc);
    }
    out.push_back({Token::Kind::kPunct, std::string(1, c), tl, tc});
    advance(1);
  }
  out.push_back({Token::Kind::kEnd, "", line, col});
  return out;
}

}  // namespace ballotscope::detail
