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

#include <limits>
#include <optional>
#include <vector>

namespace srtr {

enum class Sense { kLe, kGe, kEq };

struct LinearRow {
  std::vector<double> coef;
  Sense sense = Sense::kLe;
  double rhs = 0.0;
};

/// minimize objective . x  subject to rows, x >= 0.
struct LPProblem {
  std::size_t num_vars = 0;
  std::vector<double> objective;
  std::vector<LinearRow> rows;
};

enum class LPStatus { kOptimal, kInfeasible, kUnbounded };

struct LPResult {
  LPStatus status = LPStatus::kInfeasible;
  std::vector<double> x;
  double objective = 0.0;
  int pivots = 0;
};

/// Two-phase dense tableau simplex with Bland's rule, carried out in long
/// double. Optimal points are certified against the original rows (relative
/// residual 1e-9); a point that fails certification raises NumericalFailure.
LPResult solve_lp(const LPProblem& problem);

/// coef . delta <= rhs, or == rhs when `equality` is set.
struct DeltaRow {
  std::vector<double> coef;
  double rhs = 0.0;
  bool equality = false;
};

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// minimize sum_j |delta_j| subject to rows and lower <= delta <= upper.
/// Empty bound vectors mean unbounded.
struct L1Problem {
  std::size_t n = 0;
  std::vector<DeltaRow> rows;
  std::vector<double> lower;
  std::vector<double> upper;
};

struct L1Solution {
  std::vector<double> delta;
  double objective = 0.0;
  int lp_solves = 0;
};

/// Exact L1 minimization via delta = delta+ - delta-. Single-variable rows are
/// folded into bounds first; variables that only have bounds are solved in
/// closed form. With `lexicographic`, ties among optima are broken toward
/// the lexicographically smallest (|delta_1|, |delta_2|, ...) by extra passes.
/// Returns nullopt when infeasible.
std::optional<L1Solution> solve_l1(const L1Problem& problem,
                                   bool lexicographic = true);

/// True if delta satisfies every row exactly (no tolerance).
bool satisfies(const std::vector<DeltaRow>& rows,
               const std::vector<double>& delta);

}  // namespace srtr
