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

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "srtr/ast.hpp"
#include "srtr/io.hpp"

namespace srtr {

/// Bindings for concrete evaluation. Any pointer may be null if the
/// expression does not mention that namespace.
struct Env {
  const std::string* state = nullptr;
  const ValueMap* ins = nullptr;
  const ValueMap* vars = nullptr;
  const ParamMap* params = nullptr;
};

/// Strict evaluation with short-circuit && and ||. Throws DivisionByZero,
/// DomainError, or UnboundIdentifier for identifiers missing from `env`.
Value eval_expr(const Expr& e, const Env& env);

/// Runs a statement block. `vars` is updated in place by assignments;
/// returns the state named by the first Return reached, or nullopt if
/// control falls off the end.
std::optional<std::string> exec_stmt(const Stmt& s, const Env& env,
                                     ValueMap& vars);

/// Next state chosen by the transition function. The step runs on a private
/// copy of the variables (with locals zeroed), so `e` is left untouched.
std::string step_transition(const TransitionFn& fn, const TraceElement& e,
                            const ParamMap& params);

std::string step_transition(const TransitionFn& fn, const std::string& state,
                            const ValueMap& ins, const ValueMap& vars,
                            const ParamMap& params);

/// Emission controller G: reads state, inputs and variables, returns the
/// outputs and may update the variables. It cannot change the state.
using EmissionFn = std::function<ValueMap(const std::string& state,
                                          const ValueMap& ins, ValueMap& vars)>;

struct Rsm {
  TransitionFn fn;
  EmissionFn emission;
  ParamMap params;
};

/// Supplies the inputs for step t given the outputs of step t-1 (empty at
/// t = 0). Returning nullopt ends the run.
using InputSource =
    std::function<std::optional<ValueMap>(int t, const ValueMap& prev_outputs)>;

/// Executes the RSM until the end state is entered or `max_steps` elements
/// have been recorded. Each element snapshots the state and variables before
/// that step's transition. Evaluation failures are rethrown as StepError.
Trace run_rsm(const Rsm& rsm, const InputSource& inputs, int max_steps);

/// Open-loop variant over a fixed input sequence.
Trace run_rsm(const Rsm& rsm, const std::vector<ValueMap>& inputs,
              int max_steps);

struct TraceMismatch {
  int t = 0;                       // timestep of the replayed element
  std::string expected_by_replay;  // transition applied to element t
  std::string recorded;            // state recorded at element t + 1

  friend bool operator==(const TraceMismatch&, const TraceMismatch&) = default;
};

/// Replays the transition over every element that has a successor and
/// reports where the recorded next state differs.
std::vector<TraceMismatch> check_trace_consistency(const TransitionFn& fn,
                                                   const ParamMap& params,
                                                   const Trace& trace);

}  // namespace srtr
