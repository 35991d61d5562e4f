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

#include <algorithm>
#include <cmath>

#include "srtr/error.hpp"
#include "srtr/solver/lp.hpp"

namespace srtr {
namespace {

double objective_tolerance(double value) { return 1e-9 * (1 + std::fabs(value)); }

struct Coupled {
  std::vector<std::size_t> vars;  // indices into delta
  std::vector<DeltaRow> rows;     // over `vars`
};

// LP over delta+ / delta- for the coupled variables, with `extra` rows given
// directly over the split columns.
LPProblem build_lp(const Coupled& c, const std::vector<double>& lo,
                   const std::vector<double>& hi) {
  std::size_t k = c.vars.size();
  LPProblem lp;
  lp.num_vars = 2 * k;
  lp.objective.assign(2 * k, 1.0);
  auto split = [&](const std::vector<double>& coef) {
    std::vector<double> out(2 * k);
    for (std::size_t j = 0; j < k; ++j) {
      out[2 * j] = coef[j];
      out[2 * j + 1] = -coef[j];
    }
    return out;
  };
  for (const auto& r : c.rows) {
    lp.rows.push_back({split(r.coef), r.equality ? Sense::kEq : Sense::kLe, r.rhs});
  }
  for (std::size_t j = 0; j < k; ++j) {
    std::vector<double> unit(k, 0.0);
    unit[j] = 1.0;
    std::size_t v = c.vars[j];
    if (std::isfinite(hi[v])) lp.rows.push_back({split(unit), Sense::kLe, hi[v]});
    if (std::isfinite(lo[v])) lp.rows.push_back({split(unit), Sense::kGe, lo[v]});
  }
  return lp;
}

}  // namespace

bool satisfies(const std::vector<DeltaRow>& rows, const std::vector<double>& delta) {
  for (const auto& r : rows) {
    double lhs = 0;
    for (std::size_t j = 0; j < delta.size(); ++j) lhs += r.coef[j] * delta[j];
    if (r.equality ? lhs != r.rhs : lhs > r.rhs) return false;
  }
  return true;
}

std::optional<L1Solution> solve_l1(const L1Problem& problem, bool lexicographic) {
  std::size_t n = problem.n;
  std::vector<double> lo = problem.lower.empty() ? std::vector<double>(n, -kInf) : problem.lower;
  std::vector<double> hi = problem.upper.empty() ? std::vector<double>(n, kInf) : problem.upper;

  // Presolve: rows with at most one nonzero become bounds.
  std::vector<DeltaRow> multi;
  for (const auto& r : problem.rows) {
    std::size_t nz = 0, j0 = 0;
    for (std::size_t j = 0; j < n; ++j) {
      if (r.coef[j] != 0) {
        ++nz;
        j0 = j;
      }
    }
    if (nz == 0) {
      bool ok = r.equality ? r.rhs == 0 : r.rhs >= 0;
      if (!ok) return std::nullopt;
    } else if (nz == 1) {
      double b = r.rhs / r.coef[j0];
      if (r.equality) {
        lo[j0] = std::max(lo[j0], b);
        hi[j0] = std::min(hi[j0], b);
      } else if (r.coef[j0] > 0) {
        hi[j0] = std::min(hi[j0], b);
      } else {
        lo[j0] = std::max(lo[j0], b);
      }
    } else {
      multi.push_back(r);
    }
  }
  for (std::size_t j = 0; j < n; ++j) {
    if (lo[j] > hi[j]) return std::nullopt;
  }

  L1Solution sol;
  sol.delta.assign(n, 0.0);
  std::vector<bool> coupled(n, false);
  for (const auto& r : multi) {
    for (std::size_t j = 0; j < n; ++j) coupled[j] = coupled[j] || r.coef[j] != 0;
  }
  for (std::size_t j = 0; j < n; ++j) {
    if (!coupled[j]) sol.delta[j] = std::clamp(0.0, lo[j], hi[j]);
  }

  if (!multi.empty()) {
    Coupled c;
    for (std::size_t j = 0; j < n; ++j) {
      if (coupled[j]) c.vars.push_back(j);
    }
    for (const auto& r : multi) {
      DeltaRow row{{}, r.rhs, r.equality};
      for (std::size_t v : c.vars) row.coef.push_back(r.coef[v]);
      c.rows.push_back(std::move(row));
    }
    LPProblem lp = build_lp(c, lo, hi);
    LPResult res = solve_lp(lp);
    ++sol.lp_solves;
    if (res.status == LPStatus::kInfeasible) return std::nullopt;
    if (res.status == LPStatus::kUnbounded) {
      throw Error(ErrorKind::kNumericalFailure, "L1 objective reported unbounded");
    }
    std::size_t k = c.vars.size();
    if (lexicographic && k > 1) {
      // Keep the total within tolerance of the optimum, then minimize each
      // |delta_j| in order and pin it.
      lp.rows.push_back({std::vector<double>(2 * k, 1.0), Sense::kLe,
                         res.objective + objective_tolerance(res.objective)});
      for (std::size_t j = 0; j + 1 < k; ++j) {
        LPProblem pass = lp;
        pass.objective.assign(2 * k, 0.0);
        pass.objective[2 * j] = pass.objective[2 * j + 1] = 1.0;
        LPResult pr = solve_lp(pass);
        ++sol.lp_solves;
        if (pr.status != LPStatus::kOptimal) break;
        res.x = pr.x;
        std::vector<double> pin(2 * k, 0.0);
        pin[2 * j] = pin[2 * j + 1] = 1.0;
        lp.rows.push_back({pin, Sense::kLe, pr.objective + objective_tolerance(pr.objective)});
      }
      LPProblem last = lp;
      last.objective.assign(2 * k, 0.0);
      last.objective[2 * (k - 1)] = last.objective[2 * (k - 1) + 1] = 1.0;
      LPResult pr = solve_lp(last);
      ++sol.lp_solves;
      if (pr.status == LPStatus::kOptimal) res.x = pr.x;
    }
    for (std::size_t j = 0; j < k; ++j) {
      sol.delta[c.vars[j]] = res.x[2 * j] - res.x[2 * j + 1];
    }
  }
  for (double d : sol.delta) sol.objective += std::fabs(d);
  return sol;
}

}  // namespace srtr
