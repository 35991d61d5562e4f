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
#include <limits>
#include <vector>

#include "srtr/solver/lp.hpp"

namespace srtr {

/// One soft clause: a disjunction of paths, each a conjunction of rows.
/// No paths means unsatisfiable; an empty path means trivially true.
struct SoftClause {
  std::vector<std::vector<DeltaRow>> paths;
};

/// minimize  penalty * (#violated clauses) + sum_j |delta_j|.
struct MaxSmtProblem {
  std::size_t n = 0;
  std::vector<SoftClause> clauses;
  double penalty = 1.0;
  std::vector<double> lower;  // empty = unbounded
  std::vector<double> upper;
};

struct SolverStats {
  int nodes = 0;
  int lp_solves = 0;
  int pruned = 0;
  double millis = 0.0;
};

struct MaxSmtResult {
  std::vector<double> delta;
  std::vector<bool> satisfied;
  std::vector<int> path;  // chosen path per clause, -1 when violated
  double objective = 0.0;
  SolverStats stats;
};

/// `decisions[i]` value for a clause that must be satisfied but whose path
/// has not been fixed yet.
inline constexpr int kAnyPath = std::numeric_limits<int>::max();

/// A subtree discarded because its lower bound exceeded the incumbent.
/// `decisions[i]` is -1 when clause i is violated, the committed path index,
/// or kAnyPath.
struct PrunedNode {
  std::vector<int> decisions;
  double bound = 0.0;
};

struct MaxSmtOptions {
  std::function<void(const PrunedNode&)> on_prune;
};

/// Exact best-first branch and bound. Clauses are decided in order (satisfy
/// or violate); the rows of a satisfied clause's paths are only committed
/// when the current LP point satisfies none of them, and then one child per
/// path is created. The node bound is penalty * violated-so-far + the L1
/// optimum of the committed rows. Ties between optima are broken by the
/// lexicographically smallest |delta| vector, then by satisfying earlier
/// clauses, then by the delta values themselves. Throws ConfigError if the
/// bounds exclude zero or the penalty is not positive.
MaxSmtResult solve_maxsmt(const MaxSmtProblem& problem,
                          const MaxSmtOptions& options = {});

}  // namespace srtr
