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
#include <variant>
#include <vector>

#include "srtr/ast.hpp"
#include "srtr/io.hpp"

namespace srtr {

/// Split of the declared parameters into those whose every occurrence can be
/// expressed affinely (repairable) and the rest. Both lists follow
/// declaration order.
struct Classification {
  std::vector<std::string> rep;
  std::vector<std::string> unrep;

  bool is_rep(const std::string& p) const;
};

/// Flow-insensitive fixpoint over variable taint. A parameter becomes
/// unrepairable when it reaches
///   - the operand of sin, cos, abs, norm or anglemod;
///   - one side of a product (or dot) whose other side also depends on a
///     repairable parameter: the side with fewer distinct parameters loses,
///     ties go against the right operand;
///   - a divisor;
///   - either side of a numeric `!=`;
///   - the guard of a conditional with a branch that can fall through after
///     assigning a variable (otherwise variable values would diverge per
///     path after the join).
/// Marking restarts the scan until nothing changes.
Classification classify_params(const TransitionFn& fn);

/// Identifiers with known values. Anything absent stays symbolic. Locals
/// always start at zero.
struct Bindings {
  std::optional<std::string> state;
  ValueMap ins;
  ValueMap vars;
  ParamMap params;
};

struct PevalOptions {
  /// Substitute assignments into later reads instead of residualizing them.
  /// Requires every input and variable to be bound, and throws NonAffine if
  /// a variable would hold different expressions on the two sides of a
  /// retained conditional.
  bool inline_assignments = false;
};

/// Online partial evaluation. Folds subtrees whose operands are all known,
/// splices the taken branch of conditionals with known guards, and keeps
/// both (specialized) branches otherwise. Known-valued assignments are
/// dropped and their values propagated; assignments with symbolic values
/// are kept, unless `inline_assignments` is set.
///
/// With no bindings the body comes back structurally unchanged, provided it
/// has no constant-only subexpressions or constant assignments to fold.
StmtPtr peval(const TransitionFn& fn, const Bindings& bindings,
              const PevalOptions& options = {});

/// The transition function specialized to one trace element: state, inputs,
/// variables and unrepairable parameters are replaced by their values, so
/// only repairable parameters remain free.
struct ResidualFn {
  StmtPtr body;
  Classification classification;
  TraceElement source;
  ParamMap params;
};

/// Also available as `residual`. Throws NonAffine if the result is not
/// closed over repairable parameters or has a non-affine comparison.
ResidualFn make_residual(const TransitionFn& fn, const TraceElement& e,
                         const ParamMap& params);
ResidualFn make_residual(const TransitionFn& fn, const TraceElement& e,
                         const ParamMap& params,
                         const Classification& classification);

inline ResidualFn residual(const TransitionFn& fn, const TraceElement& e,
                           const ParamMap& params) {
  return make_residual(fn, e, params);
}

/// Throws NonAffine describing the first violation of residual closure or
/// affinity.
void check_residual(const ResidualFn& r);

// ---- symbolic values ---------------------------------------------------------

/// c0 + sum_j coef[j] * delta_j, where delta_j is the adjustment of the j-th
/// repairable parameter around the specialization point. c0 is computed with
/// the same operations, in the same order, as concrete evaluation at that
/// point, so the zero-adjustment value is bit-exact.
struct AffineNum {
  double c0 = 0.0;
  std::vector<double> coef;

  bool is_constant() const;
};

struct AffineVec {
  AffineNum x;
  AffineNum y;
};

struct Opaque {
  ExprPtr expr;
};

using SymExpr = std::variant<Value, AffineNum, AffineVec, Opaque>;

/// Symbolic value of an arithmetic expression whose only free identifiers are
/// parameters. Parameters in `rep` are free; others take their value from
/// `params`. Anything non-affine comes back Opaque.
SymExpr symbolize(const ExprPtr& e, const std::vector<std::string>& rep,
                  const ParamMap& params);

}  // namespace srtr
