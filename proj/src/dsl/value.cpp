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

#include "srtr/value.hpp"

#include <bit>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <system_error>

#include "srtr/error.hpp"

namespace srtr {

Type type_of(const Value& value) {
  switch (value.index()) {
    case 0: return Type::kNum;
    case 1: return Type::kBool;
    case 2: return Type::kVec2;
    default: return Type::kState;
  }
}

std::string type_name(Type type) {
  switch (type) {
    case Type::kNum: return "num";
    case Type::kBool: return "bool";
    case Type::kVec2: return "vec2";
    case Type::kState: return "state";
  }
  return "?";
}

Value zero_value(Type type) {
  if (type == Type::kVec2) return Vec2{};
  if (type == Type::kBool) return false;
  return 0.0;
}

std::string format_number(double x) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), x);
  if (ec != std::errc()) return std::to_string(x);
  return std::string(buf, end);
}

std::string format_number_fixed(double x) {
  char buf[1100];
  auto [end, ec] =
      std::to_chars(buf, buf + sizeof(buf), x, std::chars_format::fixed);
  if (ec != std::errc()) return std::to_string(x);
  return std::string(buf, end);
}

std::string format_value(const Value& value) {
  switch (value.index()) {
    case 0: return format_number(std::get<double>(value));
    case 1: return std::get<bool>(value) ? "true" : "false";
    case 2: {
      const Vec2& v = std::get<Vec2>(value);
      return "<" + format_number(v.x) + ", " + format_number(v.y) + ">";
    }
    default: return "\"" + std::get<StateName>(value).name + "\"";
  }
}

bool identical(const Value& a, const Value& b) {
  if (a.index() != b.index()) return false;
  auto bits = [](double d) { return std::bit_cast<std::uint64_t>(d); };
  switch (a.index()) {
    case 0: return bits(std::get<double>(a)) == bits(std::get<double>(b));
    case 2: {
      const Vec2& u = std::get<Vec2>(a);
      const Vec2& v = std::get<Vec2>(b);
      return bits(u.x) == bits(v.x) && bits(u.y) == bits(v.y);
    }
    default: return a == b;
  }
}

std::string_view error_kind_name(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kSyntaxError: return "SyntaxError";
    case ErrorKind::kTypeError: return "TypeError";
    case ErrorKind::kUnboundIdentifier: return "UnboundIdentifier";
    case ErrorKind::kMissingReturn: return "MissingReturn";
    case ErrorKind::kSchemaError: return "SchemaError";
    case ErrorKind::kSignatureMismatch: return "SignatureMismatch";
    case ErrorKind::kDivisionByZero: return "DivisionByZero";
    case ErrorKind::kDomainError: return "DomainError";
    case ErrorKind::kStepError: return "StepError";
    case ErrorKind::kUnknownState: return "UnknownState";
    case ErrorKind::kIndexError: return "IndexError";
    case ErrorKind::kKeyError: return "KeyError";
    case ErrorKind::kSolverError: return "SolverError";
    case ErrorKind::kNonAffine: return "NonAffine";
    case ErrorKind::kNumericalFailure: return "NumericalFailure";
    case ErrorKind::kParseError: return "ParseError";
    case ErrorKind::kUnsatError: return "UnsatError";
    case ErrorKind::kGridTooLarge: return "GridTooLarge";
    case ErrorKind::kEmptyScenarioSet: return "EmptyScenarioSet";
    case ErrorKind::kConfigError: return "ConfigError";
    case ErrorKind::kIoError: return "IoError";
  }
  return "Error";
}

}  // namespace srtr
