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

#include <map>
#include <string>
#include <variant>

namespace srtr {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Vec2&, const Vec2&) = default;
};

/// A member of an RSM's declared state set.
struct StateName {
  std::string name;

  friend bool operator==(const StateName&, const StateName&) = default;
};

enum class Type { kNum, kBool, kVec2, kState };

using Value = std::variant<double, bool, Vec2, StateName>;

/// name -> value, used for inputs and program variables.
using ValueMap = std::map<std::string, Value>;

/// Parameter name -> value. Every parameter is a real number.
using ParamMap = std::map<std::string, double>;

/// Parameter name -> additive adjustment.
using DeltaMap = std::map<std::string, double>;

Type type_of(const Value& value);
std::string type_name(Type type);

/// Zero of a Num or Vec2 type; used to initialise transition-local temporaries.
Value zero_value(Type type);

/// Shortest decimal string that parses back to exactly `x`.
std::string format_number(double x);

/// Same as `format_number` but never uses exponent notation.
std::string format_number_fixed(double x);

std::string format_value(const Value& value);

/// Bitwise equality for numbers (so -0.0 != 0.0 and equal NaNs compare equal).
bool identical(const Value& a, const Value& b);

}  // namespace srtr
