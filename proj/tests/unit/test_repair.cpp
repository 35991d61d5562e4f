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
#include <numbers>

#include "doctest.h"
#include "fixtures.hpp"
#include "generator.hpp"
#include "srtr/error.hpp"
#include "srtr/interp.hpp"
#include "srtr/repair.hpp"

using namespace srtr;
using namespace srtr::testing;

namespace {

constexpr double kPi = std::numbers::pi;

ErrorKind kind_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("expected an error");
  return ErrorKind::kIoError;
}

// Two corrections that pull one parameter in opposite directions:
// clause 1 holds iff k > 1, clause 2 iff k < -1 (at k = 0).
const char* kTug = R"(
states {A, B, C} start A end C;
inputs {x: num, y: num};
params {k};
transition {
  if (param:k > in:x) return "B";
  if (param:k < in:y) return "C";
  return "A";
}
)";

Trace tug_trace() {
  TraceElement a{0, {{"x", 1.0}, {"y", -1000.0}}, {}, "A"};
  TraceElement b{1, {{"x", 1000.0}, {"y", -1.0}}, {}, "A"};
  return {a, b};
}

ParamMap shifted(const ParamMap& p, const std::vector<std::string>& rep,
                 const std::vector<double>& delta) {
  ParamMap out = p;
  for (std::size_t j = 0; j < rep.size(); ++j) out[rep[j]] += delta[j];
  return out;
}

}  // namespace

TEST_CASE("CorrectOne on the worked example") {
  TransitionFn fn = attacker();
  PathFormula f = correct_one(fn, tau5(), attacker_params(), {5, "KICK"});
  CHECK(f.rep == std::vector<std::string>{"aimMargin", "maxDist", "kickTimeout"});
  REQUIRE(f.paths.size() == 1);
  CHECK(f.paths[0].size() == 4);

  // pi/60 < pi/50 + d1 && 50 < 80 + d2 && 40 < (80 + d2)/2 && 5 > 2 + (2 + d3)
  auto expected = [](const std::vector<double>& d) {
    return kPi / 60 < kPi / 50 + d[0] && 50 < 80 + d[1] && 40 < (80 + d[1]) * 0.5 &&
           5 > 2 + (2 + d[2]);
  };
  std::mt19937 rng(3);
  std::uniform_real_distribution<double> u(-2, 2);
  int agree = 0;
  for (int i = 0; i < 2000; ++i) {
    std::vector<double> d = {u(rng) * 0.1, u(rng), u(rng)};
    agree += holds(f, d) == expected(d);
  }
  CHECK(agree == 2000);
  CHECK_FALSE(holds(f, {0, 0, 0}));
  CHECK(holds(f, {0, 0.5, 0}));
}

TEST_CASE("CorrectOne trivial formulas") {
  TransitionFn fn = attacker();
  TraceElement start = tau5();
  start.state = "START";
  CHECK(correct_one(fn, start, attacker_params(), {5, "GOTO"}).is_true());
  CHECK(correct_one(fn, start, attacker_params(), {5, "KICK"}).is_false());
  CHECK(correct_one(fn, tau5(), attacker_params(), {5, "END"}).is_false());
  // The uncorrected behavior is the negated conjunction: four disjuncts.
  PathFormula stay = correct_one(fn, tau5(), attacker_params(), {5, "GOTO"});
  CHECK(stay.paths.size() == 4);
  CHECK(holds(stay, {0, 0, 0}));

  CHECK(kind_of([&] { correct_one(fn, tau5(), attacker_params(), {5, "JUMP"}); }) ==
        ErrorKind::kUnknownState);
}

TEST_CASE("CorrectAll validates corrections") {
  TransitionFn fn = attacker();
  Trace trace = attacker_trace();
  ParamMap p = attacker_params();
  CHECK(kind_of([&] { correct_all(fn, p, trace, {{10, "KICK"}}); }) == ErrorKind::kIndexError);
  CHECK(kind_of([&] { correct_all(fn, p, trace, {{-1, "KICK"}}); }) == ErrorKind::kIndexError);
  CHECK(kind_of([&] { correct_all(fn, p, trace, {{5, "kick"}}); }) == ErrorKind::kUnknownState);

  RepairProblem rp = correct_all(fn, p, trace, attacker_corrections());
  REQUIRE(rp.clauses.size() == 1);
  CHECK(rp.clauses[0].paths.size() == 1);
  CHECK(correct_all(fn, p, trace, {}).clauses.empty());
}

TEST_CASE("atom lowering margins") {
  std::vector<double> point = {80};
  // 40 < 0.5 * (80 + d)
  DeltaAtom lt{{40, {0}}, RelOp::kLt, {40, {0.5}}};
  auto rows = lower_atom(lt, point, 1e-4);
  REQUIRE(rows.size() == 1);
  CHECK(rows[0].coef[0] == -0.5);
  CHECK(rows[0].rhs == doctest::Approx(-1e-4));
  CHECK_FALSE(rows[0].equality);

  // Already true at zero with slack below epsilon: zero stays feasible.
  DeltaAtom tight{{40, {0}}, RelOp::kLt, {40.00001, {0.5}}};
  auto t = lower_atom(tight, point, 1e-4);
  CHECK(satisfies(t, {0.0}));
  CHECK_FALSE(satisfies(t, {-1e-3}));

  // Non-strict boundary case stays feasible at zero.
  DeltaAtom le{{2, {1}}, RelOp::kLe, {2, {0}}};
  auto l = lower_atom(le, point, 1e-4);
  CHECK(satisfies(l, {0.0}));
  CHECK_FALSE(satisfies(l, {1e-6}));

  // a > b is b < a.
  DeltaAtom gt{{1, {1}}, RelOp::kGt, {3, {0}}};
  auto g = lower_atom(gt, point, 1e-4);
  CHECK_FALSE(satisfies(g, {2.0}));
  CHECK(satisfies(g, {2.0 + 2e-4}));

  DeltaAtom eq{{1, {2}}, RelOp::kEq, {3, {0}}};
  auto e = lower_atom(eq, point, 1e-4);
  REQUIRE(e.size() == 1);
  CHECK(e[0].equality);
  CHECK(satisfies(e, {1.0}));

  DeltaAtom ne{{1, {2}}, RelOp::kNe, {3, {0}}};
  CHECK(kind_of([&] { lower_atom(ne, point, 1e-4); }) == ErrorKind::kNonAffine);
}

TEST_CASE("SRTR on the worked example") {
  TransitionFn fn = attacker();
  RepairResult r = srtr::srtr(fn, attacker_params(), attacker_trace(), attacker_corrections());
  CHECK(r.deltas.size() == 3);
  CHECK(r.deltas.at("aimMargin") == 0);
  CHECK(r.deltas.at("kickTimeout") == 0);
  double d = r.deltas.at("maxDist");
  CHECK(d > 0);
  CHECK(d <= 1);
  // 40 < (80 + d) * sin(pi/6) with margin epsilon needs d >= 2 epsilon.
  CHECK(d == doctest::Approx(2e-4).epsilon(1e-6));
  CHECK(r.params.at("viewAng") == attacker_params().at("viewAng"));
  CHECK(r.params.at("maxDist") == 80 + d);
  CHECK(r.satisfied == std::vector<bool>{true});
  CHECK(r.solver_satisfied == std::vector<bool>{true});
  CHECK(r.objective == doctest::Approx(d));
  CHECK(step_transition(fn, tau5(), r.params) == "KICK");
}

TEST_CASE("SRTR epsilon and bounds") {
  TransitionFn fn = attacker();
  RepairOptions o;
  o.epsilon = 0.25;
  RepairResult r = srtr::srtr(fn, attacker_params(), attacker_trace(), attacker_corrections(), o);
  CHECK(r.deltas.at("maxDist") == doctest::Approx(0.5));

  o = {};
  o.bounds["maxDist"] = {-1, 1e-4};
  RepairResult b = srtr::srtr(fn, attacker_params(), attacker_trace(), attacker_corrections(), o);
  CHECK(b.satisfied == std::vector<bool>{false});
  CHECK(b.objective == doctest::Approx(1));

  o = {};
  o.bounds["viewAng"] = {-1, 1};
  CHECK(kind_of([&] { srtr::srtr(fn, attacker_params(), attacker_trace(), attacker_corrections(), o); }) ==
        ErrorKind::kKeyError);
  o = {};
  o.bounds["maxDist"] = {1, 2};
  CHECK(kind_of([&] { srtr::srtr(fn, attacker_params(), attacker_trace(), attacker_corrections(), o); }) ==
        ErrorKind::kConfigError);
  o = {};
  o.penalty = 0;
  CHECK(kind_of([&] { srtr::srtr(fn, attacker_params(), attacker_trace(), attacker_corrections(), o); }) ==
        ErrorKind::kConfigError);
}

TEST_CASE("SRTR with zero and duplicated corrections") {
  TransitionFn fn = attacker();
  RepairResult none = srtr::srtr(fn, attacker_params(), attacker_trace(), {});
  for (const auto& [k, d] : none.deltas) CHECK(d == 0);
  CHECK(none.objective == 0);
  CHECK(none.params == attacker_params());

  for (double h : {1e-5, 1.0}) {
    RepairOptions o;
    o.penalty = h;
    RepairResult twice =
        srtr::srtr(fn, attacker_params(), attacker_trace(), {{5, "KICK"}, {5, "KICK"}}, o);
    CHECK(twice.solver_satisfied[0] == twice.solver_satisfied[1]);
    CHECK(twice.satisfied[0] == twice.satisfied[1]);
  }
}

TEST_CASE("SRTR trades corrections against the penalty") {
  TransitionFn fn = parse_rsm(kTug);
  ParamMap p = {{"k", 0.0}};
  std::vector<Correction> cs = {{0, "B"}, {1, "C"}};
  RepairProblem rp = correct_all(fn, p, tug_trace(), cs);
  // Brute force over the four penalty assignments, each a 1-D problem.
  CHECK(holds(rp.clauses[0], {1.5}));
  CHECK_FALSE(holds(rp.clauses[0], {1.0}));
  CHECK(holds(rp.clauses[1], {-1.5}));
  CHECK_FALSE(holds(rp.clauses[1], {-1.0}));

  RepairOptions o;
  o.penalty = 10;
  RepairResult big = srtr::srtr(fn, p, tug_trace(), cs, o);
  CHECK(big.satisfied[0] != big.satisfied[1]);
  CHECK(big.satisfied == big.solver_satisfied);
  CHECK(std::fabs(big.deltas.at("k")) == doctest::Approx(1 + 1e-4));
  CHECK(big.objective == doctest::Approx(10 + 1 + 1e-4));
  // Equal-cost optima: the earlier correction wins.
  CHECK(big.satisfied[0]);

  o.penalty = 0.4;
  RepairResult small = srtr::srtr(fn, p, tug_trace(), cs, o);
  CHECK(small.satisfied == std::vector<bool>{false, false});
  CHECK(small.deltas.at("k") == 0);
  CHECK(small.objective == doctest::Approx(0.8));
}

TEST_CASE("apply_deltas") {
  TransitionFn fn = attacker();
  ParamMap p = attacker_params();
  ParamMap q = apply_deltas(fn, p, {{"maxDist", 0.5}});
  CHECK(q.at("maxDist") == 80.5);
  CHECK(q.at("aimMargin") == p.at("aimMargin"));
  CHECK(apply_deltas(fn, p, {{"maxDist", 0}, {"aimMargin", 0}, {"kickTimeout", 0}}) == p);
  CHECK(kind_of([&] { apply_deltas(fn, p, {{"viewAng", 0.1}}); }) == ErrorKind::kKeyError);
  CHECK(kind_of([&] { apply_deltas(fn, p, {{"speed", 0.1}}); }) == ErrorKind::kKeyError);
}

TEST_CASE("formulas agree with replay on generated programs") {
  int satisfiable = 0, nontrivial = 0, checked = 0;
  for (std::uint64_t seed = 1; seed <= 300; ++seed) {
    ProgramGenerator gen(seed, seed % 3 ? repairable_config() : GeneratorConfig{});
    TransitionFn fn = gen.function();
    TraceElement e = gen.element(fn);
    ParamMap p = gen.params(fn);
    Correction c{0, gen.pick(fn.sig.states)};
    PathFormula f;
    try {
      f = correct_one(fn, e, p, c);
    } catch (const Error& err) {
      // Evaluation failures at P (e.g. a non-finite intermediate) are not
      // repair problems.
      REQUIRE(err.kind() != ErrorKind::kNonAffine);
      continue;
    }
    satisfiable += !f.is_false();
    nontrivial += !f.is_false() && !f.is_true();
    // Zero adjustment is bit-exact.
    CHECK(holds(f, std::vector<double>(f.rep.size(), 0.0)) == (step_transition(fn, e, p) == c.expected));
    for (int k = 0; k < 20; ++k) {
      std::vector<double> d;
      for (std::size_t j = 0; j < f.rep.size(); ++j) d.push_back(gen.real(-4, 4));
      std::string replay;
      try {
        replay = step_transition(fn, e, shifted(p, f.rep, d));
      } catch (const Error&) {
        continue;
      }
      ++checked;
      CHECK(holds(f, d) == (replay == c.expected));
    }
  }
  CHECK(satisfiable > 90);
  CHECK(nontrivial > 30);
  CHECK(checked > 3000);
}

TEST_CASE("solver-satisfied corrections replay on generated programs") {
  int flagged = 0;
  for (std::uint64_t seed = 1000; seed < 1200; ++seed) {
    ProgramGenerator gen(seed, repairable_config());
    TransitionFn fn = gen.function();
    Trace trace;
    int m = gen.integer(1, 3);
    for (int t = 0; t < m; ++t) trace.push_back(gen.element(fn, t));
    ParamMap p = gen.params(fn);
    std::vector<Correction> cs;
    for (int t = 0; t < m; ++t) cs.push_back({t, gen.pick(fn.sig.states)});
    RepairResult r;
    try {
      r = srtr::srtr(fn, p, trace, cs);
    } catch (const Error& err) {
      REQUIRE(err.kind() != ErrorKind::kNonAffine);
      continue;
    }
    for (std::size_t i = 0; i < cs.size(); ++i) {
      if (r.solver_satisfied[i]) {
        ++flagged;
        CHECK(r.satisfied[i]);
      }
    }
  }
  CHECK(flagged > 100);
}
