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
#include <utility>
#include <vector>

#include "srtr/interp.hpp"
#include "srtr/peval.hpp"
#include "srtr/solver/maxsmt.hpp"
#include "srtr/solver/smtlib.hpp"

namespace srtr {

/// lhs op rhs, both affine in the adjustments of the repairable parameters.
struct DeltaAtom {
  AffineNum lhs;
  RelOp op = RelOp::kLt;
  AffineNum rhs;
};

using Conjunction = std::vector<DeltaAtom>;

/// Disjunction of conjunctions. No disjuncts is unsatisfiable; a single empty
/// conjunction is `true`.
struct PathFormula {
  std::vector<std::string> rep;  // delta index -> parameter name
  std::vector<Conjunction> paths;

  bool is_false() const { return paths.empty(); }
  bool is_true() const;
};

/// True if the formula holds for `delta` with exact comparisons.
bool holds(const PathFormula& f, const std::vector<double>& delta);

std::string format_formula(const PathFormula& f);

/// Every root-to-return path of the residual at `e` that returns
/// `expected`, as a conjunction of its branch conditions (negated on
/// else-edges). Throws UnknownState for a state outside the signature.
PathFormula correct_one(const TransitionFn& fn, const TraceElement& e,
                        const ParamMap& params, const Correction& c);
PathFormula correct_one(const TransitionFn& fn, const TraceElement& e,
                        const ParamMap& params, const Correction& c,
                        const Classification& classification);

struct RepairProblem {
  std::vector<std::string> rep;
  std::vector<PathFormula> clauses;  // one per correction, in input order
  double penalty = 1.0;
};

/// One clause per correction over a shared delta vector. Throws IndexError
/// when a correction's t is not in the trace and UnknownState for an
/// undeclared expected state.
RepairProblem correct_all(const TransitionFn& fn, const ParamMap& params,
                          const Trace& trace,
                          const std::vector<Correction>& corrections,
                          double penalty = 1.0);

enum class Backend { kInternal, kSmtlib };

struct RepairOptions {
  double penalty = 1.0;
  /// Margin for strict comparisons: a < b becomes a + epsilon <= b.
  double epsilon = 1e-4;
  /// Optional per-parameter bounds on the adjustment.
  std::map<std::string, std::pair<double, double>> bounds;
  Backend backend = Backend::kInternal;
  /// External solver command for the SMT-LIB backend; the script path is
  /// appended as its only argument.
  std::string solver_command = "z3";
  SmtEncoding encoding = SmtEncoding::kXor;
};

/// Linear rows for one atom. Strict comparisons get the epsilon margin,
/// non-strict ones a rounding margin of 1e-10 scaled by the magnitudes
/// involved; neither margin is applied beyond the slack the atom already
/// has at zero adjustment, so an atom true at the specialization point
/// stays satisfiable by delta = 0. `==` yields an equality row; `!=` over
/// adjustments throws NonAffine.
/// `point` holds the current values of the repairable parameters, in delta
/// order, and only scales the rounding margin.
std::vector<DeltaRow> lower_atom(const DeltaAtom& atom,
                                 const std::vector<double>& point, double epsilon);

/// The optimization problem handed to a backend. Throws KeyError for a bound
/// on an unknown or unrepairable parameter, ConfigError for bounds that
/// exclude zero, a non-positive penalty or epsilon.
MaxSmtProblem lower_problem(const RepairProblem& problem, const ParamMap& params,
                            const RepairOptions& options);

struct RepairResult {
  ParamMap params;                    // repaired parameter map
  DeltaMap deltas;                    // one entry per repairable parameter
  std::vector<bool> satisfied;        // by replay under `params`
  std::vector<bool> solver_satisfied;  // as decided by the optimizer
  double objective = 0.0;
  SolverStats stats;
};

/// Finds parameter adjustments minimizing
///   penalty * #violated corrections + sum |delta|
/// and applies them. Unrepairable parameters are never changed.
RepairResult srtr(const TransitionFn& fn, const ParamMap& params,
                  const Trace& trace, const std::vector<Correction>& corrections,
                  const RepairOptions& options = {});

/// params + deltas. Throws KeyError for a parameter that is unknown or not
/// repairable.
ParamMap apply_deltas(const ParamMap& params, const DeltaMap& deltas,
                      const Classification& classification);
ParamMap apply_deltas(const TransitionFn& fn, const ParamMap& params,
                      const DeltaMap& deltas);

}  // namespace srtr
