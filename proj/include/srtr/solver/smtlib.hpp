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
#include <optional>
#include <string>
#include <vector>

#include "srtr/solver/maxsmt.hpp"

namespace srtr {

enum class SmtEncoding {
  /// w_i in {0, H} with (w_i = H) xor (w_i = 0 and phi_i); a single
  /// objective sum(w) + sum(|delta|). Same optimum as the internal solver.
  kXor,
  /// assert-soft with weight H, followed by minimize sum(|delta|). OMT
  /// solvers treat the two objectives lexicographically (violations
  /// first), so optima can differ from the weighted sum when H is small.
  kAssertSoft,
};

/// SMT-LIB v2 (QF_LRA plus the optimization extension). Variables are named
/// d_<param> for adjustments, a_<param> for their absolute values and w_<i>
/// for penalties (1-based).
std::string emit_smtlib(const MaxSmtProblem& problem,
                        const std::vector<std::string>& names,
                        SmtEncoding encoding = SmtEncoding::kXor);

struct SmtModel {
  std::map<std::string, double> values;
  std::optional<double> objective;
};

/// Tolerant reader for solver output: `sat`, an optional objectives block,
/// and a model in `(model ...)`, bare `(define-fun ...)` list, or get-value
/// form. Rationals `(/ p q)` and negatives `(- k)` are understood. Throws
/// UnsatError on `unsat`, ParseError otherwise.
SmtModel parse_smt_model(const std::string& text);

/// delta, satisfied flags and objective recovered from a model of a script
/// produced by emit_smtlib. Missing values default to zero.
MaxSmtResult result_from_model(const SmtModel& model, const MaxSmtProblem& problem,
                               const std::vector<std::string>& names);

/// Runs `command <script file>` through the shell and returns its stdout.
std::string run_external_solver(const std::string& command,
                                const std::string& script);

}  // namespace srtr
