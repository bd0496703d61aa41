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

#ifndef BALLOTSCOPE_ERROR_HH_
#define BALLOTSCOPE_ERROR_HH_

#include <stdexcept>
#include <string>

namespace ballotscope {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Wrong number of arguments for a symbol.
class ArityError : public Error {
 public:
  using Error::Error;
};

/// Source text could not be parsed; carries a 1-based position.
class ParseError : public Error {
 public:
  ParseError(const std::string& msg, int line, int column)
      : Error(std::to_string(line) + ":" + std::to_string(column) + ": " +
              msg),
        line_(line),
        column_(column) {}

  int line() const { return line_; }
  int column() const { return column_; }

 private:
  int line_;
  int column_;
};

/// A configured search or size bound was exceeded.
class BoundError : public Error {
 public:
  using Error::Error;
};

/// The model violates a well-formedness rule at execution time.
class ModelError : public Error {
 public:
  using Error::Error;
};

/// Internal inconsistency; always a checker bug.
class InternalError : public Error {
 public:
  using Error::Error;
};

}  // namespace ballotscope

#endif  // BALLOTSCOPE_ERROR_HH_
