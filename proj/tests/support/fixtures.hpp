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

#include <cmath>
#include <numbers>
#include <string>

#include "srtr/dsl.hpp"
#include "srtr/io.hpp"

namespace srtr::testing {

inline std::string data_path(const std::string& rel) {
  return std::string(SRTR_DATA_DIR) + "/" + rel;
}

inline TransitionFn attacker() {
  return parse_rsm(read_file(data_path("worked_example/attacker.rsm")));
}

inline ParamMap attacker_params() {
  return parse_params(read_file(data_path("worked_example/params.json")));
}

inline Trace attacker_trace() {
  return parse_trace(read_file(data_path("worked_example/trace.jsonl")));
}

inline std::vector<Correction> attacker_corrections() {
  return parse_corrections(read_file(data_path("worked_example/corrections.json")));
}

// The tau_5 element written out by hand.
inline TraceElement tau5() {
  constexpr double pi = std::numbers::pi;
  TraceElement e;
  e.t = 5;
  e.state = "GOTO";
  e.ins = {{"ballLoc", Vec2{30, 40}},
           {"robotLoc", Vec2{0, 0}},
           {"robotAng", 0.0},
           {"targetAng", pi / 60},
           {"time", 5.0}};
  e.vars = {{"lastKick", 2.0}, {"timeInKick", 0.0}};
  return e;
}

}  // namespace srtr::testing
