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

#include "srtr/ops.hpp"

#include <array>
#include <cmath>
#include <numbers>

#include "srtr/error.hpp"

namespace srtr {
namespace {

using std::nullopt;
using std::optional;

double finite(double x, const char* what) {
  if (!std::isfinite(x)) {
    throw Error(ErrorKind::kDomainError,
                std::string(what) + " produced a non-finite value");
  }
  return x;
}

Vec2 finite(Vec2 v, const char* what) {
  finite(v.x, what);
  finite(v.y, what);
  return v;
}

double num(const Value& v) { return std::get<double>(v); }
const Vec2& vec(const Value& v) { return std::get<Vec2>(v); }

// ---- typing rules --------------------------------------------------------

optional<Type> num_or_vec_same(Type t) {
  if (t == Type::kNum || t == Type::kVec2) return t;
  return nullopt;
}

optional<Type> num_to_num(Type t) {
  if (t == Type::kNum) return Type::kNum;
  return nullopt;
}

optional<Type> norm_type(Type t) {
  if (t == Type::kNum || t == Type::kVec2) return Type::kNum;
  return nullopt;
}

optional<Type> additive_type(Type a, Type b) {
  if (a == b && (a == Type::kNum || a == Type::kVec2)) return a;
  return nullopt;
}

optional<Type> mul_type(Type a, Type b) {
  if (a == Type::kNum && b == Type::kNum) return Type::kNum;
  if (a == Type::kNum && b == Type::kVec2) return Type::kVec2;
  if (a == Type::kVec2 && b == Type::kNum) return Type::kVec2;
  return nullopt;
}

optional<Type> div_type(Type a, Type b) {
  if (b != Type::kNum) return nullopt;
  if (a == Type::kNum || a == Type::kVec2) return a;
  return nullopt;
}

optional<Type> ordering_type(Type a, Type b) {
  if (a == Type::kNum && b == Type::kNum) return Type::kBool;
  return nullopt;
}

optional<Type> equality_type(Type a, Type b) {
  if (a == b && (a == Type::kNum || a == Type::kState)) return Type::kBool;
  return nullopt;
}

optional<Type> logical_type(Type a, Type b) {
  if (a == Type::kBool && b == Type::kBool) return Type::kBool;
  return nullopt;
}

optional<Type> dot_type(Type a, Type b) {
  if (a == Type::kVec2 && b == Type::kVec2) return Type::kNum;
  return nullopt;
}

// ---- concrete evaluators -------------------------------------------------

Value eval_neg(const Value& v) {
  if (auto* d = std::get_if<double>(&v)) return -*d;
  const Vec2& a = vec(v);
  return Vec2{-a.x, -a.y};
}

Value eval_sin(const Value& v) { return finite(std::sin(num(v)), "sin"); }
Value eval_cos(const Value& v) { return finite(std::cos(num(v)), "cos"); }
Value eval_abs(const Value& v) { return std::fabs(num(v)); }

Value eval_norm(const Value& v) {
  if (auto* d = std::get_if<double>(&v)) return std::fabs(*d);
  const Vec2& a = vec(v);
  return finite(std::hypot(a.x, a.y), "norm");
}

Value eval_anglemod(const Value& v) { return angle_mod(num(v)); }

Value eval_add(const Value& a, const Value& b) {
  if (auto* d = std::get_if<double>(&a)) return finite(*d + num(b), "+");
  return finite(Vec2{vec(a).x + vec(b).x, vec(a).y + vec(b).y}, "+");
}

Value eval_sub(const Value& a, const Value& b) {
  if (auto* d = std::get_if<double>(&a)) return finite(*d - num(b), "-");
  return finite(Vec2{vec(a).x - vec(b).x, vec(a).y - vec(b).y}, "-");
}

Value eval_mul(const Value& a, const Value& b) {
  const double* da = std::get_if<double>(&a);
  const double* db = std::get_if<double>(&b);
  if (da && db) return finite(*da * *db, "*");
  if (da) return finite(Vec2{*da * vec(b).x, *da * vec(b).y}, "*");
  return finite(Vec2{vec(a).x * *db, vec(a).y * *db}, "*");
}

Value eval_div(const Value& a, const Value& b) {
  double d = num(b);
  if (d == 0.0) throw Error(ErrorKind::kDivisionByZero, "division by zero");
  if (auto* n = std::get_if<double>(&a)) return finite(*n / d, "/");
  return finite(Vec2{vec(a).x / d, vec(a).y / d}, "/");
}

Value eval_lt(const Value& a, const Value& b) { return num(a) < num(b); }
Value eval_gt(const Value& a, const Value& b) { return num(a) > num(b); }
Value eval_le(const Value& a, const Value& b) { return num(a) <= num(b); }
Value eval_ge(const Value& a, const Value& b) { return num(a) >= num(b); }
Value eval_eq(const Value& a, const Value& b) { return a == b; }
Value eval_ne(const Value& a, const Value& b) { return !(a == b); }

Value eval_and(const Value& a, const Value& b) {
  return std::get<bool>(a) && std::get<bool>(b);
}

Value eval_or(const Value& a, const Value& b) {
  return std::get<bool>(a) || std::get<bool>(b);
}

Value eval_dot(const Value& a, const Value& b) {
  return finite(vec(a).x * vec(b).x + vec(a).y * vec(b).y, "dot");
}

const std::array<UnaryOpInfo, 6> kUnaryOps = {{
    {UnaryOp::kNeg, "-", Linearity::kAdditive, num_or_vec_same, eval_neg},
    {UnaryOp::kSin, "sin", Linearity::kNonlinear, num_to_num, eval_sin},
    {UnaryOp::kCos, "cos", Linearity::kNonlinear, num_to_num, eval_cos},
    {UnaryOp::kAbs, "abs", Linearity::kNonlinear, num_to_num, eval_abs},
    {UnaryOp::kNorm, "norm", Linearity::kNonlinear, norm_type, eval_norm},
    {UnaryOp::kAngleMod, "anglemod", Linearity::kNonlinear, num_to_num,
     eval_anglemod},
}};

const std::array<BinaryOpInfo, 13> kBinaryOps = {{
    {BinaryOp::kAdd, "+", 5, Linearity::kAdditive, nullopt, additive_type,
     eval_add},
    {BinaryOp::kSub, "-", 5, Linearity::kAdditive, nullopt, additive_type,
     eval_sub},
    {BinaryOp::kMul, "*", 6, Linearity::kScaling, nullopt, mul_type, eval_mul},
    {BinaryOp::kDiv, "/", 6, Linearity::kDivision, nullopt, div_type, eval_div},
    {BinaryOp::kLt, "<", 4, Linearity::kRelational, RelOp::kLt, ordering_type,
     eval_lt},
    {BinaryOp::kGt, ">", 4, Linearity::kRelational, RelOp::kGt, ordering_type,
     eval_gt},
    {BinaryOp::kLe, "<=", 4, Linearity::kRelational, RelOp::kLe,
     ordering_type, eval_le},
    {BinaryOp::kGe, ">=", 4, Linearity::kRelational, RelOp::kGe,
     ordering_type, eval_ge},
    {BinaryOp::kEq, "==", 3, Linearity::kRelational, RelOp::kEq,
     equality_type, eval_eq},
    {BinaryOp::kNe, "!=", 3, Linearity::kRelational, RelOp::kNe,
     equality_type, eval_ne},
    {BinaryOp::kAnd, "&&", 2, Linearity::kLogical, nullopt, logical_type,
     eval_and},
    {BinaryOp::kOr, "||", 1, Linearity::kLogical, nullopt, logical_type,
     eval_or},
    {BinaryOp::kDot, "dot", 0, Linearity::kScaling, nullopt, dot_type,
     eval_dot},
}};

}  // namespace

const UnaryOpInfo& op_info(UnaryOp op) {
  return kUnaryOps[static_cast<std::size_t>(op)];
}

const BinaryOpInfo& op_info(BinaryOp op) {
  return kBinaryOps[static_cast<std::size_t>(op)];
}

std::optional<UnaryOp> unary_function(std::string_view name) {
  for (const auto& info : kUnaryOps) {
    if (info.op != UnaryOp::kNeg && info.spelling == name) return info.op;
  }
  return nullopt;
}

std::optional<BinaryOp> binary_function(std::string_view name) {
  for (const auto& info : kBinaryOps) {
    if (info.precedence == 0 && info.spelling == name) return info.op;
  }
  return nullopt;
}

double angle_mod(double angle) {
  if (!std::isfinite(angle)) {
    throw Error(ErrorKind::kDomainError, "anglemod of a non-finite value");
  }
  constexpr double kPi = std::numbers::pi;
  double r = std::remainder(angle, 2.0 * kPi);
  if (r <= -kPi) r += 2.0 * kPi;
  if (r > kPi) r -= 2.0 * kPi;
  return r;
}

RelOp negate(RelOp op) {
  switch (op) {
    case RelOp::kLt: return RelOp::kGe;
    case RelOp::kGt: return RelOp::kLe;
    case RelOp::kLe: return RelOp::kGt;
    case RelOp::kGe: return RelOp::kLt;
    case RelOp::kEq: return RelOp::kNe;
    case RelOp::kNe: return RelOp::kEq;
  }
  return op;
}

RelOp flip(RelOp op) {
  switch (op) {
    case RelOp::kLt: return RelOp::kGt;
    case RelOp::kGt: return RelOp::kLt;
    case RelOp::kLe: return RelOp::kGe;
    case RelOp::kGe: return RelOp::kLe;
    default: return op;
  }
}

std::string_view relop_spelling(RelOp op) {
  switch (op) {
    case RelOp::kLt: return "<";
    case RelOp::kGt: return ">";
    case RelOp::kLe: return "<=";
    case RelOp::kGe: return ">=";
    case RelOp::kEq: return "==";
    case RelOp::kNe: return "!=";
  }
  return "?";
}

bool compare(double lhs, RelOp op, double rhs) {
  switch (op) {
    case RelOp::kLt: return lhs < rhs;
    case RelOp::kGt: return lhs > rhs;
    case RelOp::kLe: return lhs <= rhs;
    case RelOp::kGe: return lhs >= rhs;
    case RelOp::kEq: return lhs == rhs;
    case RelOp::kNe: return lhs != rhs;
  }
  return false;
}

}  // namespace srtr
