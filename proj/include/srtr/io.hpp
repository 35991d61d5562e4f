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

// JSON formats for parameter maps, traces (JSON Lines) and corrections.
//
//   params       {"maxDist": 80, ...}
//   trace line   {"t": 5, "state": "GOTO", "in": {"ballLoc": [30, 40]}, "var": {...}}
//   corrections  [{"t": 5, "expected": "KICK"}]

#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "srtr/ast.hpp"

namespace srtr {

/// Snapshot of inputs, program variables and state at the start of step t.
struct TraceElement {
  int t = 0;
  ValueMap ins;
  ValueMap vars;
  std::string state;
};

using Trace = std::vector<TraceElement>;

/// A human-supplied expected state at the end of step t.
struct Correction {
  int t = 0;
  std::string expected;
};

// Parsing checks JSON shape only (SchemaError); the validate_* functions
// check against a signature (SignatureMismatch, SchemaError on wrong types
// or undeclared states).
ParamMap parse_params(std::string_view source);
Trace parse_trace(std::string_view source);
std::vector<Correction> parse_corrections(std::string_view source);

void validate_params(const Signature& sig, const ParamMap& params);
void validate_trace_element(const Signature& sig, const TraceElement& e);
void validate_trace(const Signature& sig, const Trace& trace);
void validate_corrections(const Signature& sig,
                          const std::vector<Correction>& corrections);

ParamMap params_from_json(const nlohmann::json& j);
TraceElement trace_element_from_json(const nlohmann::json& j);
Correction correction_from_json(const nlohmann::json& j);

nlohmann::json value_to_json(const Value& v);
nlohmann::json params_to_json(const ParamMap& params);
nlohmann::json trace_element_to_json(const TraceElement& e);
nlohmann::json correction_to_json(const Correction& c);
nlohmann::json corrections_to_json(const std::vector<Correction>& cs);

std::string format_trace(const Trace& trace);  // JSON Lines

std::string read_file(const std::string& path);
void write_file(const std::string& path, std::string_view contents);

}  // namespace srtr
