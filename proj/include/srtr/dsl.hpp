// Copyright 2026 The srtr Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "srtr/ast.hpp"
#include "srtr/error.hpp"

namespace srtr {

/// Parses a `.rsm` source and typechecks it. Throws `Error` with kind
/// SyntaxError, TypeError, UnboundIdentifier, MissingReturn or
/// DivisionByZero on the first problem found.
///
///   states {START, GOTO, KICK, END} start START end END;
///   inputs {ballLoc: vec2, time: num};
///   vars {lastKick: num = 0};
///   locals {relLoc: vec2};
///   params {maxDist, kickTimeout};
///   transition { ... }
///
/// `locals` declares transition-local temporaries. They live in the `var:`
/// namespace, start at zero on every step, and are not recorded in traces.
TransitionFn parse_rsm(std::string_view source);

/// Parses a bare `{ ... }` statement block. Identifiers are not resolved, so
/// this only reports syntax errors; run `typecheck` against a signature for
/// the rest.
StmtPtr parse_block(std::string_view source);

/// Parses a single expression.
ExprPtr parse_expression(std::string_view source);

struct Diagnostic {
  ErrorKind kind = ErrorKind::kTypeError;
  std::string message;
  SourcePos pos;
};

std::string format_diagnostic(const Diagnostic& d);

/// Empty iff every identifier resolves, every node is well-typed, every
/// control path ends in a return, and no division by a literal zero occurs.
std::vector<Diagnostic> typecheck(const TransitionFn& fn);
std::vector<Diagnostic> typecheck_expr(const Expr& expr, const Signature& sig);

/// Type of a well-typed expression, nullopt otherwise.
std::optional<Type> infer_type(const Expr& expr, const Signature& sig);

/// True if every path through `stmt` ends in a return.
bool always_returns(const Stmt& stmt);

std::string print_expr(const Expr& expr);
std::string print_stmt(const Stmt& stmt, int indent = 0);
/// Canonical `.rsm` text; `parse_rsm(print_rsm(fn))` is structurally equal
/// to `fn`.
std::string print_rsm(const TransitionFn& fn);

}  // namespace srtr
