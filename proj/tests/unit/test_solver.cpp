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
#include <limits>
#include <random>

#include "doctest.h"
#include "srtr/error.hpp"
#include "srtr/solver/lp.hpp"
#include "srtr/solver/maxsmt.hpp"
#include "srtr/solver/smtlib.hpp"

using namespace srtr;

namespace {

constexpr double kBig = std::numeric_limits<double>::infinity();

// ---- 2-D vertex enumeration -------------------------------------------
//
// Every optimum of a bounded 2-variable LP (including the L1 objective,
// which is linear inside each orthant) is attained at an intersection of two
// boundary lines, drawn from the constraints, the bounds and the axes.

struct Line {
  double a, b, c;  // a x + b y = c
};

bool feasible2(const std::vector<DeltaRow>& rows, double x, double y,
               const std::vector<double>& lo, const std::vector<double>& hi) {
  const double tol = 1e-7;
  double p[2] = {x, y};
  for (int j = 0; j < 2; ++j) {
    if (!lo.empty() && p[j] < lo[j] - tol) return false;
    if (!hi.empty() && p[j] > hi[j] + tol) return false;
  }
  for (const auto& r : rows) {
    double v = r.coef[0] * x + r.coef[1] * y;
    double t = tol * (1 + std::fabs(r.rhs));
    if (r.equality ? std::fabs(v - r.rhs) > t : v > r.rhs + t) return false;
  }
  return true;
}

// min |x| + |y| over rows and box, or +inf when infeasible. The box must be
// finite for the enumeration to be complete.
double l1_oracle2(const std::vector<DeltaRow>& rows, const std::vector<double>& lo,
                  const std::vector<double>& hi) {
  std::vector<Line> lines = {{1, 0, 0}, {0, 1, 0}};
  for (const auto& r : rows) lines.push_back({r.coef[0], r.coef[1], r.rhs});
  for (int j = 0; j < 2; ++j) {
    lines.push_back({j == 0 ? 1.0 : 0.0, j == 1 ? 1.0 : 0.0, lo[j]});
    lines.push_back({j == 0 ? 1.0 : 0.0, j == 1 ? 1.0 : 0.0, hi[j]});
  }
  double best = kBig;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    for (std::size_t k = i + 1; k < lines.size(); ++k) {
      const Line& p = lines[i];
      const Line& q = lines[k];
      double det = p.a * q.b - p.b * q.a;
      if (std::fabs(det) < 1e-12) continue;
      double x = (p.c * q.b - p.b * q.c) / det;
      double y = (p.a * q.c - p.c * q.a) / det;
      if (feasible2(rows, x, y, lo, hi)) best = std::min(best, std::fabs(x) + std::fabs(y));
    }
  }
  return best;
}

DeltaRow row(double a, double b, double rhs, bool eq = false) { return {{a, b}, rhs, eq}; }
DeltaRow row1(double a, double rhs) { return {{a}, rhs, false}; }

// ---- 1-D interval oracle -----------------------------------------------

// min |d| over the intersection of `rows` (one variable), +inf if empty.
double l1_oracle1(const std::vector<DeltaRow>& rows) {
  double lo = -kBig, hi = kBig;
  for (const auto& r : rows) {
    double a = r.coef[0];
    if (a > 0) hi = std::min(hi, r.rhs / a);
    if (a < 0) lo = std::max(lo, r.rhs / a);
  }
  if (lo > hi) return kBig;
  if (lo > 0) return lo;
  if (hi < 0) return -hi;
  return 0.0;
}

}  // namespace

TEST_CASE("simplex solves small problems and reports status") {
  // min -x - y  s.t.  x + 2y <= 4, 3x + y <= 6
  LPProblem p{2, {-1, -1}, {{{1, 2}, Sense::kLe, 4}, {{3, 1}, Sense::kLe, 6}}};
  LPResult r = solve_lp(p);
  REQUIRE(r.status == LPStatus::kOptimal);
  CHECK(r.x[0] == doctest::Approx(1.6));
  CHECK(r.x[1] == doctest::Approx(1.2));
  CHECK(r.objective == doctest::Approx(-2.8));

  LPProblem infeasible{1, {1}, {{{1}, Sense::kGe, 2}, {{1}, Sense::kLe, 1}}};
  CHECK(solve_lp(infeasible).status == LPStatus::kInfeasible);

  LPProblem unbounded{1, {-1}, {{{1}, Sense::kGe, 1}}};
  CHECK(solve_lp(unbounded).status == LPStatus::kUnbounded);

  LPProblem eq{2, {1, 1}, {{{1, -1}, Sense::kEq, 3}}};
  LPResult e = solve_lp(eq);
  REQUIRE(e.status == LPStatus::kOptimal);
  CHECK(e.x[0] == doctest::Approx(3));
  CHECK(e.x[1] == doctest::Approx(0));
}

TEST_CASE("simplex survives degenerate and redundant rows") {
  LPProblem p{2, {1, 1},
              {{{1, 1}, Sense::kGe, 1},
               {{1, 1}, Sense::kGe, 1},
               {{2, 2}, Sense::kGe, 2},
               {{1, 0}, Sense::kLe, 1},
               {{1, 1}, Sense::kEq, 1}}};
  LPResult r = solve_lp(p);
  REQUIRE(r.status == LPStatus::kOptimal);
  CHECK(r.objective == doctest::Approx(1));
}

TEST_CASE("l1 basics") {
  // delta >= 0.5
  auto s = solve_l1({1, {row1(-1, -0.5)}, {}, {}});
  REQUIRE(s);
  CHECK(s->delta[0] == doctest::Approx(0.5));
  // delta >= 1 and delta <= -1
  CHECK_FALSE(solve_l1({1, {row1(-1, -1), row1(1, -1)}, {}, {}}));
  // no rows
  auto z = solve_l1({3, {}, {}, {}});
  REQUIRE(z);
  CHECK(z->objective == 0);
  CHECK(z->delta == std::vector<double>{0, 0, 0});
}

TEST_CASE("l1 coupled rows with lexicographic ties") {
  // d0 + d1 >= 1: any split is optimal; lexicographic order puts it all on d1.
  auto s = solve_l1({2, {row(-1, -1, -1)}, {}, {}});
  REQUIRE(s);
  CHECK(s->objective == doctest::Approx(1));
  CHECK(s->delta[0] == doctest::Approx(0).epsilon(1e-9));
  CHECK(s->delta[1] == doctest::Approx(1));

  // d0 >= 0.5, d1 >= 1.5 (written as coupled rows): objective 2.
  auto t = solve_l1({2, {row(-1, 0, -0.5), row(0, -1, -1.5), row(-1, -1, -2)}, {}, {}});
  REQUIRE(t);
  CHECK(t->objective == doctest::Approx(2));
  CHECK(t->delta[0] == doctest::Approx(0.5));
  CHECK(t->delta[1] == doctest::Approx(1.5));

  // Cross-check against a fine grid.
  double grid = kBig;
  for (int i = -300; i <= 300; ++i) {
    for (int k = -300; k <= 300; ++k) {
      double x = i / 100.0, y = k / 100.0;
      if (x >= 0.5 && y >= 1.5 && x + y >= 2) grid = std::min(grid, std::fabs(x) + std::fabs(y));
    }
  }
  CHECK(grid == doctest::Approx(2));
}

TEST_CASE("l1 respects bounds and equalities") {
  auto s = solve_l1({2, {row(1, 1, 3, true)}, {-kBig, -kBig}, {1, kBig}});
  REQUIRE(s);
  CHECK(s->objective == doctest::Approx(3));
  CHECK(s->delta[0] + s->delta[1] == doctest::Approx(3));
  CHECK(s->delta[0] <= 1 + 1e-12);

  CHECK_FALSE(solve_l1({2, {row(1, 1, 3, true)}, {-1, -1}, {1, 1}}));
}

TEST_CASE("l1 matches vertex enumeration on random 2-D problems") {
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> u(-3, 3);
  std::uniform_int_distribution<int> nrows(1, 4);
  int feasible = 0;
  for (int iter = 0; iter < 400; ++iter) {
    std::vector<DeltaRow> rows;
    int m = nrows(rng);
    for (int i = 0; i < m; ++i) {
      rows.push_back(row(std::round(u(rng) * 4) / 4, std::round(u(rng) * 4) / 4,
                         std::round(u(rng) * 4) / 4, iter % 7 == 0 && i == 0));
    }
    std::vector<double> lo = {-10, -10}, hi = {10, 10};
    double oracle = l1_oracle2(rows, lo, hi);
    auto s = solve_l1({2, rows, lo, hi});
    if (oracle == kBig) {
      CHECK_FALSE(s);
      continue;
    }
    ++feasible;
    REQUIRE(s);
    CHECK(s->objective == doctest::Approx(oracle).epsilon(1e-7));
    CHECK(feasible2(rows, s->delta[0], s->delta[1], lo, hi));
  }
  CHECK(feasible > 100);
}

TEST_CASE("maxsmt on a single clause and trivial clauses") {
  MaxSmtProblem p;
  p.n = 1;
  p.clauses = {SoftClause{{{row1(-1, -0.5)}}}};
  auto r = solve_maxsmt(p);
  CHECK(r.satisfied == std::vector<bool>{true});
  CHECK(r.delta[0] == doctest::Approx(0.5));
  CHECK(r.objective == doctest::Approx(0.5));

  // penalty below the repair cost: violating is cheaper.
  p.penalty = 0.25;
  auto v = solve_maxsmt(p);
  CHECK(v.satisfied == std::vector<bool>{false});
  CHECK(v.delta[0] == 0);
  CHECK(v.objective == doctest::Approx(0.25));

  MaxSmtProblem trivial;
  trivial.n = 2;
  trivial.clauses = {SoftClause{{{}}}, SoftClause{{}}};
  auto t = solve_maxsmt(trivial);
  CHECK(t.satisfied == std::vector<bool>{true, false});
  CHECK(t.objective == doctest::Approx(1));
}

TEST_CASE("maxsmt rejects bad configuration") {
  MaxSmtProblem p;
  p.n = 1;
  p.penalty = 0;
  CHECK_THROWS_AS(solve_maxsmt(p), Error);
  p.penalty = 1;
  p.lower = {0.5};
  try {
    solve_maxsmt(p);
    FAIL("expected ConfigError");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::kConfigError);
  }
}

namespace {

// Exhaustive optimum over violate/satisfy choices for 1-D single-path clauses.
double maxsmt_oracle1(const MaxSmtProblem& p, const std::vector<int>& fixed = {}) {
  std::size_t m = p.clauses.size();
  double best = kBig;
  for (unsigned mask = 0; mask < (1u << m); ++mask) {
    std::vector<DeltaRow> rows;
    int violated = 0;
    bool consistent = true;
    for (std::size_t i = 0; i < m; ++i) {
      bool sat = (mask >> i) & 1u;
      if (i < fixed.size() && (fixed[i] >= 0) != sat) consistent = false;
      if (sat) {
        rows.insert(rows.end(), p.clauses[i].paths[0].begin(), p.clauses[i].paths[0].end());
      } else {
        ++violated;
      }
    }
    if (!consistent) continue;
    double cost = l1_oracle1(rows);
    if (cost == kBig) continue;
    best = std::min(best, p.penalty * violated + cost);
  }
  return best;
}

}  // namespace

TEST_CASE("maxsmt on 12 clauses in contradictory pairs matches exhaustive search") {
  std::mt19937 rng(42);
  std::uniform_real_distribution<double> mag(0.1, 2.0);
  for (double penalty : {0.3, 1.0, 10.0}) {
    MaxSmtProblem p;
    p.n = 1;
    p.penalty = penalty;
    for (int i = 0; i < 6; ++i) {
      double a = mag(rng);
      // delta >= a  versus  delta <= -a
      p.clauses.push_back(SoftClause{{{row1(-1, -a)}}});
      p.clauses.push_back(SoftClause{{{row1(1, -a)}}});
    }
    std::vector<PrunedNode> pruned;
    MaxSmtOptions opt;
    opt.on_prune = [&](const PrunedNode& n) { pruned.push_back(n); };
    auto r = solve_maxsmt(p, opt);
    double oracle = maxsmt_oracle1(p);
    CHECK(r.objective == doctest::Approx(oracle).epsilon(1e-9));
    // Never satisfies both halves of a pair.
    for (int i = 0; i < 6; ++i) CHECK_FALSE((r.satisfied[2 * i] && r.satisfied[2 * i + 1]));
    // Re-evaluate the reported objective from delta and flags.
    double recomputed = std::fabs(r.delta[0]);
    for (std::size_t i = 0; i < p.clauses.size(); ++i) {
      if (r.satisfied[i]) {
        CHECK(satisfies(p.clauses[i].paths[0], r.delta));
      } else {
        recomputed += penalty;
      }
    }
    CHECK(recomputed == doctest::Approx(r.objective));
    // Every pruned subtree's bound is a valid lower bound on its completions.
    for (const auto& n : pruned) {
      double sub = maxsmt_oracle1(p, n.decisions);
      CHECK(sub >= n.bound - 1e-9);
      CHECK(sub >= oracle - 1e-9);
    }
    CHECK(r.stats.nodes < (1 << 12));
  }
}

TEST_CASE("maxsmt matches enumeration on random multi-path 2-D problems") {
  std::mt19937 rng(1234);
  std::uniform_real_distribution<double> u(-2, 2);
  std::uniform_int_distribution<int> small(1, 2);
  for (int iter = 0; iter < 60; ++iter) {
    MaxSmtProblem p;
    p.n = 2;
    p.penalty = iter % 3 == 0 ? 0.5 : 2.0;
    p.lower = {-10, -10};
    p.upper = {10, 10};
    int m = 2 + iter % 5;
    for (int i = 0; i < m; ++i) {
      SoftClause c;
      int paths = small(rng);
      for (int k = 0; k < paths; ++k) {
        std::vector<DeltaRow> path;
        int rows = small(rng);
        for (int j = 0; j < rows; ++j) {
          path.push_back(row(std::round(u(rng) * 2) / 2, std::round(u(rng) * 2) / 2,
                             std::round(u(rng) * 2) / 2));
        }
        c.paths.push_back(path);
      }
      p.clauses.push_back(c);
    }
    // Oracle: every decision vector, each with an enumerated L1 optimum.
    double oracle = kBig;
    std::vector<int> choice(static_cast<std::size_t>(m), -1);
    std::function<void(int, int, std::vector<DeltaRow>&)> rec =
        [&](int i, int violated, std::vector<DeltaRow>& rows) {
          if (i == m) {
            double c = l1_oracle2(rows, p.lower, p.upper);
            if (c != kBig) oracle = std::min(oracle, p.penalty * violated + c);
            return;
          }
          rec(i + 1, violated + 1, rows);
          for (const auto& path : p.clauses[static_cast<std::size_t>(i)].paths) {
            std::size_t before = rows.size();
            rows.insert(rows.end(), path.begin(), path.end());
            rec(i + 1, violated, rows);
            rows.resize(before);
          }
        };
    std::vector<DeltaRow> scratch;
    rec(0, 0, scratch);
    auto r = solve_maxsmt(p);
    CHECK(r.objective == doctest::Approx(oracle).epsilon(1e-7));
    for (std::size_t i = 0; i < p.clauses.size(); ++i) {
      if (r.satisfied[i]) {
        CHECK(feasible2(p.clauses[i].paths[static_cast<std::size_t>(r.path[i])], r.delta[0],
                        r.delta[1], p.lower, p.upper));
      }
    }
  }
}

TEST_CASE("smtlib emission") {
  MaxSmtProblem p;
  p.n = 2;
  p.penalty = 1;
  p.clauses = {SoftClause{{{row(1, -0.5, -2e-4)}, {row(0, -1, 3)}}}, SoftClause{{}}};
  std::string s = emit_smtlib(p, {"maxDist", "aimMargin"});
  CHECK(s.find("(set-logic QF_LRA)") == 0);
  CHECK(s.find("(declare-const d_maxDist Real)") != std::string::npos);
  CHECK(s.find("(declare-const w_2 Real)") != std::string::npos);
  CHECK(s.find("(- 0.0002)") != std::string::npos);
  CHECK(s.find("2e-") == std::string::npos);
  CHECK(s.find("(xor (= w_2 1.0) (and (= w_2 0.0) false))") != std::string::npos);
  CHECK(s.find("(minimize (+ 0.0 w_1 w_2 a_maxDist a_aimMargin))") != std::string::npos);
  CHECK(s.find("(check-sat)\n(get-objectives)\n(get-model)") != std::string::npos);

  std::string soft = emit_smtlib(p, {"maxDist", "aimMargin"}, SmtEncoding::kAssertSoft);
  CHECK(soft.find("(assert-soft") != std::string::npos);
  CHECK(soft.find("w_1") == std::string::npos);
}

TEST_CASE("smt model parsing") {
  std::string z3 = R"(sat
(objectives
 ((+ 0.0 w_1 a_maxDist) (/ 1 5000))
)
(
  (define-fun d_maxDist () Real
    (/ 1.0 5000.0))
  (define-fun a_maxDist () Real
    (/ 1.0 5000.0))
  (define-fun w_1 () Real
    0.0)
  (define-fun d_x () Real
    (- 3.5))
)
)";
  SmtModel m = parse_smt_model(z3);
  CHECK(m.values.at("d_maxDist") == doctest::Approx(2e-4));
  CHECK(m.values.at("d_x") == -3.5);
  REQUIRE(m.objective);
  CHECK(*m.objective == doctest::Approx(2e-4));

  SmtModel bare = parse_smt_model("sat\n(objectives (1.0))\n(model (define-fun d_a () Real (- (/ 1 2))))");
  CHECK(bare.values.at("d_a") == -0.5);
  CHECK(*bare.objective == 1.0);

  auto kind = [](const std::string& text) {
    try {
      parse_smt_model(text);
    } catch (const Error& e) {
      return e.kind();
    }
    return ErrorKind::kIoError;
  };
  CHECK(kind("unsat\n(error \"model is not available\")") == ErrorKind::kUnsatError);
  CHECK(kind("(error \"line 3: bad\")") == ErrorKind::kParseError);
  CHECK(kind("sat\n((define-fun") == ErrorKind::kParseError);
}

TEST_CASE("result_from_model recomputes flags") {
  MaxSmtProblem p;
  p.n = 1;
  p.clauses = {SoftClause{{{row1(-1, -0.5)}}}, SoftClause{{{row1(1, -0.5)}}}};
  SmtModel m;
  m.values = {{"d_k", 0.5}, {"w_1", 0.0}, {"w_2", 1.0}};
  auto r = result_from_model(m, p, {"k"});
  CHECK(r.delta == std::vector<double>{0.5});
  CHECK(r.satisfied == std::vector<bool>{true, false});
  CHECK(r.objective == doctest::Approx(1.5));
}

#ifdef SRTR_Z3_EXECUTABLE
TEST_CASE("external solver agrees with branch and bound") {
  std::mt19937 rng(99);
  std::uniform_real_distribution<double> mag(0.1, 2.0);
  for (double penalty : {0.3, 1.0, 3.0}) {
    MaxSmtProblem p;
    p.n = 1;
    p.penalty = penalty;
    for (int i = 0; i < 5; ++i) {
      double a = mag(rng);
      p.clauses.push_back(SoftClause{{{row1(-1, -a)}}});
      p.clauses.push_back(SoftClause{{{row1(1, -a / 2)}}});
    }
    auto internal = solve_maxsmt(p);
    std::string out = run_external_solver(SRTR_Z3_EXECUTABLE, emit_smtlib(p, {"k"}));
    auto external = result_from_model(parse_smt_model(out), p, {"k"});
    CHECK(external.objective == doctest::Approx(internal.objective).epsilon(1e-6));
  }
}
#endif
