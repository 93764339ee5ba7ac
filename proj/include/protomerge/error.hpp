// Copyright 2026 The protomerge Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at

//     http://www.apache.org/licenses/LICENSE-2.0

// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef PROTOMERGE_ERROR_HPP_
#define PROTOMERGE_ERROR_HPP_

#include <stdexcept>
#include <string>
#include <utility>

#include "protomerge/ast.hpp"

namespace protomerge {

class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

class EvalError : public Error {
  public:
    enum class Kind { DivisionByZero, UnboundVariable, Overflow };

    EvalError(Kind kind, const std::string& what) : Error(what), kind_(kind) {}
    Kind kind() const { return kind_; }

  private:
    Kind kind_;
};

struct SourceSpan {
    std::string file;
    int start_line = 1;
    int start_col = 1;
    int end_line = 1;
    int end_col = 1;
};

class ParseError : public Error {
  public:
    ParseError(SourceSpan span, const std::string& what);
    const SourceSpan& span() const { return span_; }

  private:
    SourceSpan span_;
};

/// Raised by context and domain queries: NotIntegerRefined, InvalidRankSet, EmptyRefinement.
class LogicError : public Error {
  public:
    using Error::Error;
};

/// Raised when an equivalence check hits an undecidable entailment.
class UndecidableError : public Error {
  public:
    using Error::Error;
};

/// Raised by extraction when a conditional survives specialization.
class ExtractError : public Error {
  public:
    using Error::Error;
};

/// Raised when a loop cannot be unfolded or an index term is not closed.
class UnfoldError : public Error {
  public:
    enum class Kind { NonConstantBounds, OpenIndexTerm };

    UnfoldError(Kind kind, const std::string& what) : Error(what), kind_(kind) {}
    Kind kind() const { return kind_; }

  private:
    Kind kind_;
};

class StateSpaceExceeded : public Error {
  public:
    using Error::Error;
};

/// An analysis failure that carries a structured diagnostic.
class DiagnosticError : public Error {
  public:
    explicit DiagnosticError(Diagnostic diagnostic)
        : Error(diagnostic.message), diagnostic_(std::move(diagnostic)) {}
    const Diagnostic& diagnostic() const { return diagnostic_; }

  private:
    Diagnostic diagnostic_;
};

class SolveError : public DiagnosticError {
  public:
    using DiagnosticError::DiagnosticError;
};

}  // namespace protomerge

#endif  // PROTOMERGE_ERROR_HPP_
