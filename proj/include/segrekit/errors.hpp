// Copyright 2026 The segre-kit Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef SEGREKIT_ERRORS_HPP
#define SEGREKIT_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace segrekit
{

/// Operands live in different variable contexts.
class ContextMismatch : public std::invalid_argument
{
  public:
    using std::invalid_argument::invalid_argument;
};

/// A request reads beyond the tracked truncation order.
class TruncationError : public std::out_of_range
{
  public:
    using std::out_of_range::out_of_range;
};

/// Syntax error in a manifold or map spec, with 1-based position.
class ParseError : public std::runtime_error
{
  public:
    ParseError(const std::string &msg, int line, int column)
        : std::runtime_error(std::to_string(line) + ":" + std::to_string(column) + ": " + msg),
          line_(line), column_(column)
    {
    }
    int line() const { return line_; }
    int column() const { return column_; }

  private:
    int line_;
    int column_;
};

/// Input is syntactically fine but mathematically unusable
/// (not real, not generic, base point off the manifold, ...).
class ValidationError : public std::runtime_error
{
  public:
    using std::runtime_error::runtime_error;
};

/// An identity that must hold exactly failed: indicates a bug, never bad input.
class InternalError : public std::logic_error
{
  public:
    using std::logic_error::logic_error;
};

} // namespace segrekit

#endif
