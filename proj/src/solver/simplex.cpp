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

#include <cmath>

#include "srtr/error.hpp"
#include "srtr/solver/lp.hpp"

namespace srtr {
namespace {

using Real = long double;

constexpr Real kPivotTol = 1e-12L;
constexpr Real kCostTol = 1e-11L;

class Tableau {
 public:
  // Columns: structural variables, then one slack/surplus per inequality
  // row, then one artificial per row that needs it.
  explicit Tableau(const LPProblem& p) : n_(p.num_vars) {
    std::size_t m = p.rows.size();
    std::vector<int> slack_col(m, -1);
    std::vector<int> art_col(m, -1);
    std::vector<Real> sign(m, 1);
    std::size_t cols = n_;
    for (std::size_t i = 0; i < m; ++i) {
      Sense s = p.rows[i].sense;
      if (p.rows[i].rhs < 0) {
        sign[i] = -1;
        if (s == Sense::kLe) s = Sense::kGe;
        else if (s == Sense::kGe) s = Sense::kLe;
      }
      if (s != Sense::kEq) slack_col[i] = static_cast<int>(cols++);
      sense_.push_back(s);
    }
    first_art_ = cols;
    for (std::size_t i = 0; i < m; ++i) {
      if (sense_[i] != Sense::kLe) art_col[i] = static_cast<int>(cols++);
    }
    cols_ = cols;
    a_.assign(m, std::vector<Real>(cols_ + 1, 0));
    basis_.assign(m, 0);
    for (std::size_t i = 0; i < m; ++i) {
      for (std::size_t j = 0; j < n_; ++j) a_[i][j] = sign[i] * p.rows[i].coef[j];
      a_[i][cols_] = sign[i] * p.rows[i].rhs;
      if (slack_col[i] >= 0) a_[i][slack_col[i]] = sense_[i] == Sense::kLe ? 1 : -1;
      if (art_col[i] >= 0) {
        a_[i][art_col[i]] = 1;
        basis_[i] = art_col[i];
      } else {
        basis_[i] = slack_col[i];
      }
    }
  }

  // Phase 1: drive the artificials to zero. Returns false if infeasible.
  bool phase1(int& pivots) {
    if (first_art_ == cols_) return true;
    std::vector<Real> cost(cols_, 0);
    for (std::size_t j = first_art_; j < cols_; ++j) cost[j] = 1;
    if (!optimize(cost, cols_, pivots)) return false;  // cannot be unbounded
    Real infeas = 0;
    Real scale = 1;
    for (std::size_t i = 0; i < a_.size(); ++i) {
      scale += std::fabs(a_[i][cols_]);
      if (basis_[i] >= first_art_) infeas += a_[i][cols_];
    }
    if (infeas > 1e-9L * scale) return false;
    // Pivot remaining zero-level artificials out of the basis, or drop
    // their rows as redundant.
    for (std::size_t i = 0; i < a_.size();) {
      if (basis_[i] < first_art_) {
        ++i;
        continue;
      }
      std::size_t enter = cols_;
      for (std::size_t j = 0; j < first_art_; ++j) {
        if (std::fabs(a_[i][j]) > kPivotTol) {
          enter = j;
          break;
        }
      }
      if (enter == cols_) {
        a_.erase(a_.begin() + static_cast<long>(i));
        basis_.erase(basis_.begin() + static_cast<long>(i));
        continue;
      }
      pivot(i, enter);
      ++pivots;
      ++i;
    }
    return true;
  }

  // Phase 2 over structural and slack columns. Returns false if unbounded.
  bool phase2(const std::vector<double>& objective, int& pivots) {
    std::vector<Real> cost(cols_, 0);
    for (std::size_t j = 0; j < n_; ++j) cost[j] = objective[j];
    return optimize(cost, first_art_, pivots);
  }

  std::vector<double> solution() const {
    std::vector<double> x(n_, 0.0);
    for (std::size_t i = 0; i < a_.size(); ++i) {
      if (basis_[i] < n_) x[basis_[i]] = static_cast<double>(a_[i][cols_]);
    }
    return x;
  }

 private:
  // Minimizes cost over columns [0, limit) with Bland's rule.
  bool optimize(const std::vector<Real>& cost, std::size_t limit, int& pivots) {
    for (;;) {
      // Reduced costs: c_j - c_B B^-1 A_j, read off the current tableau.
      std::size_t enter = limit;
      for (std::size_t j = 0; j < limit; ++j) {
        if (is_basic(j)) continue;
        Real r = cost[j];
        for (std::size_t i = 0; i < a_.size(); ++i) r -= cost[basis_[i]] * a_[i][j];
        if (r < -kCostTol) {
          enter = j;
          break;
        }
      }
      if (enter == limit) return true;
      std::size_t leave = a_.size();
      Real best = 0;
      for (std::size_t i = 0; i < a_.size(); ++i) {
        if (a_[i][enter] <= kPivotTol) continue;
        Real ratio = a_[i][cols_] / a_[i][enter];
        if (leave == a_.size() || ratio < best - 1e-15L ||
            (std::fabs(ratio - best) <= 1e-15L && basis_[i] < basis_[leave])) {
          leave = i;
          best = ratio;
        }
      }
      if (leave == a_.size()) return false;
      pivot(leave, enter);
      ++pivots;
      if (pivots > 50000) {
        throw Error(ErrorKind::kNumericalFailure, "simplex did not terminate");
      }
    }
  }

  bool is_basic(std::size_t j) const {
    for (std::size_t b : basis_) {
      if (b == j) return true;
    }
    return false;
  }

  void pivot(std::size_t r, std::size_t c) {
    Real p = a_[r][c];
    for (Real& v : a_[r]) v /= p;
    a_[r][c] = 1;
    for (std::size_t i = 0; i < a_.size(); ++i) {
      if (i == r) continue;
      Real f = a_[i][c];
      if (f == 0) continue;
      for (std::size_t j = 0; j <= cols_; ++j) a_[i][j] -= f * a_[r][j];
      a_[i][c] = 0;
    }
    basis_[r] = c;
  }

  std::size_t n_;
  std::size_t cols_ = 0;
  std::size_t first_art_ = 0;
  std::vector<Sense> sense_;
  std::vector<std::vector<Real>> a_;
  std::vector<std::size_t> basis_;
};

void certify(const LPProblem& p, std::vector<double>& x) {
  for (double& v : x) {
    if (v < 0) {
      if (v < -1e-9) {
        throw Error(ErrorKind::kNumericalFailure, "simplex returned a negative variable");
      }
      v = 0;
    }
  }
  for (const auto& row : p.rows) {
    double lhs = 0;
    double scale = 1 + std::fabs(row.rhs);
    for (std::size_t j = 0; j < p.num_vars; ++j) {
      lhs += row.coef[j] * x[j];
      scale += std::fabs(row.coef[j] * x[j]);
    }
    double tol = 1e-9 * scale;
    bool ok = row.sense == Sense::kLe   ? lhs <= row.rhs + tol
              : row.sense == Sense::kGe ? lhs >= row.rhs - tol
                                        : std::fabs(lhs - row.rhs) <= tol;
    if (!ok) {
      throw Error(ErrorKind::kNumericalFailure,
                  "simplex solution violates a constraint beyond tolerance");
    }
  }
}

}  // namespace

LPResult solve_lp(const LPProblem& problem) {
  for (const auto& row : problem.rows) {
    for (double c : row.coef) {
      if (!std::isfinite(c)) throw Error(ErrorKind::kNumericalFailure, "non-finite coefficient");
    }
    if (!std::isfinite(row.rhs)) throw Error(ErrorKind::kNumericalFailure, "non-finite bound");
  }
  LPResult r;
  Tableau t(problem);
  if (!t.phase1(r.pivots)) {
    r.status = LPStatus::kInfeasible;
    return r;
  }
  if (!t.phase2(problem.objective, r.pivots)) {
    r.status = LPStatus::kUnbounded;
    return r;
  }
  r.status = LPStatus::kOptimal;
  r.x = t.solution();
  certify(problem, r.x);
  for (std::size_t j = 0; j < problem.num_vars; ++j) r.objective += problem.objective[j] * r.x[j];
  return r;
}

}  // namespace srtr
