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
#include "generator.hpp"
#include "srtr/dsl.hpp"
#include "srtr/error.hpp"
#include "srtr/io.hpp"

using namespace srtr;
using namespace srtr::testing;

namespace {

ErrorKind parse_error_kind(const std::string& src) {
  try {
    parse_rsm(src);
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("expected parse_rsm to throw");
  return ErrorKind::kIoError;
}

const char* kMinimalHeader = "states {A, END} start A end END; params {p};\n";

}  // namespace

TEST_CASE("attacker parses with its declared signature") {
  TransitionFn fn = attacker();
  CHECK(fn.sig.params == std::vector<std::string>{"aimMargin", "maxDist", "viewAng", "kickTimeout"});
  CHECK(fn.sig.states == std::vector<std::string>{"START", "GOTO", "KICK", "END"});
  CHECK(fn.sig.start == "START");
  CHECK(fn.sig.end == "END");
  CHECK(typecheck(fn).empty());
}

TEST_CASE("single-return transition") {
  TransitionFn fn = parse_rsm("states {END} start END end END; transition { return \"END\"; }");
  REQUIRE(fn.body->body.size() == 1);
  CHECK(fn.body->body[0]->kind == Stmt::Kind::kReturn);
}

TEST_CASE("dangling operator is a syntax error at its position") {
  try {
    parse_block("{ var:x := param:p + ; }");
    FAIL("no error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::kSyntaxError);
    // The error points at the ';' right after the dangling '+'.
    CHECK(std::string(e.what()).rfind("1:22:", 0) == 0);
  }
}

TEST_CASE("typecheck diagnostics") {
  SUBCASE("ordering on states") {
    auto fn = parse_block("{ if (state < state) return \"A\"; else return \"A\"; }");
    TransitionFn t{parse_rsm(std::string(kMinimalHeader) + "transition { return \"A\"; }").sig, fn};
    auto d = typecheck(t);
    REQUIRE(d.size() == 1);
    CHECK(d[0].kind == ErrorKind::kTypeError);
  }
  SUBCASE("undeclared state") {
    CHECK(parse_error_kind(std::string(kMinimalHeader) + "transition { return \"FOO\"; }") ==
          ErrorKind::kUnboundIdentifier);
  }
  SUBCASE("missing return") {
    CHECK(parse_error_kind(std::string(kMinimalHeader) +
                           "transition { if (param:p > 1) return \"A\"; }") ==
          ErrorKind::kMissingReturn);
  }
  SUBCASE("wrong namespace suggests the right one") {
    try {
      parse_rsm(std::string(kMinimalHeader) + "transition { if (in:p > 1) return \"A\"; else return \"END\"; }");
      FAIL("no error");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::kUnboundIdentifier);
      CHECK(std::string(e.what()).find("param:p") != std::string::npos);
    }
  }
  SUBCASE("division by literal zero") {
    CHECK(parse_error_kind(std::string(kMinimalHeader) +
                           "transition { if (param:p / 0 > 1) return \"A\"; else return \"END\"; }") ==
          ErrorKind::kDivisionByZero);
  }
  SUBCASE("assignment type mismatch") {
    CHECK(parse_error_kind("states {A} start A end A; vars {x: num = 0};"
                           "transition { var:x := <1, 2>; return \"A\"; }") ==
          ErrorKind::kTypeError);
  }
  SUBCASE("assigning an input is rejected") {
    CHECK(parse_error_kind("states {A} start A end A; inputs {x: num};"
                           "transition { in:x := 1; return \"A\"; }") ==
          ErrorKind::kSyntaxError);
  }
}

TEST_CASE("printer parenthesizes by precedence") {
  CHECK(print_expr(*parse_expression("(1 - 2) - 3")) == "1 - 2 - 3");
  CHECK(print_expr(*parse_expression("1 - (2 - 3)")) == "1 - (2 - 3)");
  CHECK(print_expr(*parse_expression("-(param:a + 1) * 2")) == "-(param:a + 1) * 2");
  CHECK(print_expr(*parse_expression("<param:a, 1 + 2>")) == "<param:a, 1 + 2>");
  CHECK(print_expr(*parse_expression("<1, -2>")) == "<1, -2>");
  CHECK(print_expr(*Expr::unary(UnaryOp::kNeg, Expr::constant(2.0))) == "-(2)");
}

TEST_CASE("pi and exponents lex as numbers") {
  auto e = parse_expression("pi / 50");
  CHECK(print_expr(*e) == "3.141592653589793 / 50");
  CHECK(std::get<double>(parse_expression("1.5e-3")->value) == 1.5e-3);
}

TEST_CASE("round trip of the attacker") {
  TransitionFn fn = attacker();
  TransitionFn again = parse_rsm(print_rsm(fn));
  CHECK(structurally_equal(fn, again));
}

TEST_CASE("round trip of generated programs") {
  for (std::uint64_t seed = 0; seed < 300; ++seed) {
    ProgramGenerator gen(seed);
    TransitionFn fn = gen.function();
    CAPTURE(seed);
    REQUIRE(typecheck(fn).empty());
    TransitionFn first = parse_rsm(print_rsm(fn));
    TransitionFn second = parse_rsm(print_rsm(first));
    CHECK(structurally_equal(first, second));
    CHECK(print_rsm(first) == print_rsm(second));
  }
}

TEST_CASE("trace element of the worked example") {
  Trace trace = attacker_trace();
  REQUIRE(trace.size() > 5);
  const TraceElement& e = trace[5];
  TraceElement want = tau5();
  CHECK(e.t == 5);
  CHECK(e.state == "GOTO");
  CHECK(e.ins == want.ins);
  CHECK(e.vars == want.vars);
  validate_trace(attacker().sig, trace);
}

TEST_CASE("corrections and params files") {
  CHECK(parse_corrections("[]").empty());
  auto cs = attacker_corrections();
  REQUIRE(cs.size() == 1);
  CHECK(cs[0].t == 5);
  CHECK(cs[0].expected == "KICK");

  ParamMap p = attacker_params();
  CHECK(p.at("maxDist") == 80);
  CHECK(p.at("aimMargin") == std::numbers::pi / 50);
  p.erase("kickTimeout");
  try {
    validate_params(attacker().sig, p);
    FAIL("no error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::kSignatureMismatch);
  }
}

TEST_CASE("schema errors") {
  auto kind = [](auto f) {
    try {
      f();
    } catch (const Error& e) {
      return e.kind();
    }
    return ErrorKind::kIoError;
  };
  CHECK(kind([] { parse_params("[1]"); }) == ErrorKind::kSchemaError);
  CHECK(kind([] { parse_params("{\"a\": \"x\"}"); }) == ErrorKind::kSchemaError);
  CHECK(kind([] { parse_corrections("[{\"t\": -1, \"expected\": \"A\"}]"); }) ==
        ErrorKind::kSchemaError);
  CHECK(kind([] { parse_trace("{\"t\": 1, \"state\": \"A\", \"in\": {}, \"var\": {}}"); }) ==
        ErrorKind::kSchemaError);
  CHECK(kind([] { parse_trace("{\"t\": 0, \"state\": \"A\", \"in\": {\"x\": [1]}, \"var\": {}}"); }) ==
        ErrorKind::kSchemaError);
  TraceElement e = tau5();
  e.ins.erase("time");
  CHECK(kind([&] { validate_trace_element(attacker().sig, e); }) == ErrorKind::kSignatureMismatch);
  e = tau5();
  e.ins["time"] = Vec2{1, 2};
  CHECK(kind([&] { validate_trace_element(attacker().sig, e); }) == ErrorKind::kSchemaError);
}

TEST_CASE("trace JSON round trip") {
  Trace trace = attacker_trace();
  CHECK(format_trace(parse_trace(format_trace(trace))) == format_trace(trace));
}
