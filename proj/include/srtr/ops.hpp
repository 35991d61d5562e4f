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

// The operator table. Every operator of the transition-function language is
// described exactly once here: its spelling, typing rule, concrete
// evaluator, and how it behaves under parameter repair. The parser, printer,
// typechecker, interpreter, partial evaluator, and constraint lowering all
// dispatch through this table, so adding an operator means adding one row.

#pragma once

#include <optional>
#include <string_view>

#include "srtr/value.hpp"

namespace srtr {

enum class UnaryOp { kNeg, kSin, kCos, kAbs, kNorm, kAngleMod };

enum class BinaryOp {
  kAdd,
  kSub,
  kMul,
  kDiv,
  kLt,
  kGt,
  kLe,
  kGe,
  kEq,
  kNe,
  kAnd,
  kOr,
  kDot,
};

/// How an operator treats operands that depend on repairable parameters.
enum class Linearity {
  kAdditive,    // affine whenever its operands are
  kScaling,     // affine when at most one operand is parameter-dependent
  kDivision,    // affine when the divisor is parameter-free
  kNonlinear,   // operand must be parameter-free
  kRelational,  // lowered to a constraint atom
  kLogical,     // combines atoms
};

enum class RelOp { kLt, kGt, kLe, kGe, kEq, kNe };

struct UnaryOpInfo {
  UnaryOp op;
  std::string_view spelling;  // "-" for negation, otherwise the function name
  Linearity linearity;
  std::optional<Type> (*result_type)(Type operand);
  Value (*eval)(const Value& operand);
};

struct BinaryOpInfo {
  BinaryOp op;
  std::string_view spelling;
  int precedence;  // 0 means function-call syntax, e.g. dot(a, b)
  Linearity linearity;
  std::optional<RelOp> relop;
  std::optional<Type> (*result_type)(Type lhs, Type rhs);
  Value (*eval)(const Value& lhs, const Value& rhs);
};

const UnaryOpInfo& op_info(UnaryOp op);
const BinaryOpInfo& op_info(BinaryOp op);

/// Function-call spellings: sin, cos, abs, norm, anglemod.
std::optional<UnaryOp> unary_function(std::string_view name);
/// Function-call spellings of binary operators: dot.
std::optional<BinaryOp> binary_function(std::string_view name);

/// Precedence of unary negation; binds tighter than every infix operator.
inline constexpr int kUnaryPrecedence = 7;

/// Normalises an angle into (-pi, pi].
double angle_mod(double angle);

RelOp negate(RelOp op);
RelOp flip(RelOp op);  // a op b  <=>  b flip(op) a
std::string_view relop_spelling(RelOp op);
bool compare(double lhs, RelOp op, double rhs);

}  // namespace srtr
