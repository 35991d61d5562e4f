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

#include <numbers>

#include "doctest.h"
#include "fixtures.hpp"
#include "srtr/error.hpp"
#include "srtr/interp.hpp"

using namespace srtr;
using namespace srtr::testing;

namespace {

Value eval_at_tau5(const std::string& src) {
  TraceElement e = tau5();
  ParamMap p = attacker_params();
  Env env{&e.state, &e.ins, &e.vars, &p};
  return eval_expr(*parse_expression(src), env);
}

}  // namespace

TEST_CASE("expressions from the worked example") {
  constexpr double pi = std::numbers::pi;
  CHECK(std::get<double>(eval_at_tau5("anglemod(in:targetAng - in:robotAng)")) == pi / 60);
  CHECK(std::get<double>(eval_at_tau5(
            "norm(dot(<sin(in:robotAng), -cos(in:robotAng)>, in:ballLoc - in:robotLoc))")) == 40);
  CHECK(std::get<double>(eval_at_tau5("sin(0)")) == 0);
}

TEST_CASE("anglemod range") {
  constexpr double pi = std::numbers::pi;
  CHECK(angle_mod(pi) == pi);
  CHECK(angle_mod(-pi) == pi);
  CHECK(angle_mod(3 * pi) == doctest::Approx(pi));
  CHECK(angle_mod(0.5) == 0.5);
  CHECK(angle_mod(2 * pi + 0.25) == doctest::Approx(0.25));
  CHECK_THROWS_AS(angle_mod(INFINITY), Error);
}

TEST_CASE("evaluation errors") {
  ValueMap ins{{"z", 0.0}};
  Env env{nullptr, &ins, nullptr, nullptr};
  try {
    eval_expr(*parse_expression("1 / in:z"), env);
    FAIL("no error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::kDivisionByZero);
  }
  ins["z"] = 1e308;
  try {
    eval_expr(*parse_expression("in:z * 10"), env);
    FAIL("no error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::kDomainError);
  }
}

TEST_CASE("short circuit skips the right operand") {
  ValueMap ins{{"z", 0.0}};
  Env env{nullptr, &ins, nullptr, nullptr};
  CHECK(std::get<bool>(eval_expr(*parse_expression("1 > 2 && 1 / in:z > 0"), env)) == false);
  CHECK(std::get<bool>(eval_expr(*parse_expression("1 < 2 || 1 / in:z > 0"), env)) == true);
}

TEST_CASE("attacker transitions") {
  TransitionFn fn = attacker();
  ParamMap p = attacker_params();
  TraceElement e = tau5();
  CHECK(step_transition(fn, e, p) == "GOTO");
  ParamMap repaired = p;
  repaired["maxDist"] = 80.5;
  CHECK(step_transition(fn, e, repaired) == "KICK");
  e.state = "START";
  CHECK(step_transition(fn, e, p) == "GOTO");
  // Purity: inputs untouched.
  CHECK(e.vars == tau5().vars);
}

TEST_CASE("run_rsm") {
  TransitionFn fn = attacker();
  Rsm rsm{fn, nullptr, attacker_params()};
  CHECK(run_rsm(rsm, std::vector<ValueMap>{}, 0).empty());
  CHECK(run_rsm(rsm, std::vector<ValueMap>(3, tau5().ins), 0).empty());

  TransitionFn stay = parse_rsm("states {S} start S end S; transition { return state; }");
  Rsm r2{stay, nullptr, {}};
  Trace t = run_rsm(r2, std::vector<ValueMap>(5, ValueMap{}), 10);
  REQUIRE(t.size() == 1);
  CHECK(t[0].state == "S");
}

TEST_CASE("run_rsm separates transition from emission") {
  TransitionFn fn = parse_rsm(
      "states {A, B, END} start A end END; inputs {x: num}; vars {n: num = 0};"
      "transition { if (state == \"A\") return \"B\"; else if (var:n > 2) return \"END\";"
      " else return \"B\"; }");
  int calls = 0;
  Rsm rsm{fn,
          [&](const std::string& state, const ValueMap&, ValueMap& vars) {
            ++calls;
            CHECK(state != "A");
            vars["n"] = std::get<double>(vars["n"]) + 1;
            return ValueMap{{"u", 1.0}};
          },
          {}};
  std::vector<ValueMap> outs;
  Trace trace = run_rsm(
      rsm,
      [&](int, const ValueMap& prev) -> std::optional<ValueMap> {
        outs.push_back(prev);
        return ValueMap{{"x", 0.0}};
      },
      100);
  REQUIRE(trace.size() == 5);
  CHECK(trace.back().state == "END");
  CHECK(std::get<double>(trace.back().vars.at("n")) == 4);
  CHECK(outs[0].empty());
  CHECK(outs[1].at("u") == Value(1.0));
  for (std::size_t k = 0; k < trace.size(); ++k) CHECK(trace[k].t == static_cast<int>(k));
  CHECK(check_trace_consistency(fn, {}, trace).empty());
}

TEST_CASE("step errors carry the timestep") {
  TransitionFn fn = parse_rsm(
      "states {A, END} start A end END; inputs {x: num};"
      "transition { if (1 / in:x > 0) return \"A\"; else return \"END\"; }");
  Rsm rsm{fn, nullptr, {}};
  std::vector<ValueMap> ins{{{"x", 1.0}}, {{"x", 1.0}}, {{"x", 0.0}}};
  try {
    run_rsm(rsm, ins, 10);
    FAIL("no error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::kStepError);
    CHECK(std::string(e.what()).find("step 2") != std::string::npos);
  }
}

TEST_CASE("trace consistency") {
  TransitionFn fn = attacker();
  ParamMap p = attacker_params();
  Trace trace = attacker_trace();
  CHECK(check_trace_consistency(fn, p, trace).empty());

  ParamMap repaired = p;
  repaired["maxDist"] = 80.5;
  auto m = check_trace_consistency(fn, repaired, trace);
  CHECK(std::find(m.begin(), m.end(), TraceMismatch{5, "KICK", "GOTO"}) != m.end());

  Trace corrupted = trace;
  corrupted[3].state = "KICK";
  auto c = check_trace_consistency(fn, p, corrupted);
  CHECK(std::any_of(c.begin(), c.end(), [](const TraceMismatch& x) { return x.t == 3; }));
}
