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

// Random well-typed transition functions, trace elements and parameter maps
// for property tests.

#pragma once

#include <random>
#include <string>
#include <vector>

#include "srtr/ast.hpp"
#include "srtr/dsl.hpp"
#include "srtr/io.hpp"

namespace srtr::testing {

struct GeneratorConfig {
  int num_params = 4;
  int max_expr_depth = 3;
  int max_stmt_depth = 3;
  // Probability that a numeric leaf is a parameter reference.
  double param_leaf = 0.35;
  bool allow_nonlinear = true;
  // `!=` between arbitrary numeric expressions (makes their params unrepairable).
  bool numeric_ne = true;
};

// Programs whose parameters mostly survive repairability analysis.
inline GeneratorConfig repairable_config() {
  GeneratorConfig c;
  c.num_params = 4;
  c.max_expr_depth = 2;
  c.max_stmt_depth = 2;
  c.param_leaf = 0.4;
  c.allow_nonlinear = false;
  c.numeric_ne = false;
  return c;
}

class ProgramGenerator {
 public:
  explicit ProgramGenerator(std::uint64_t seed, GeneratorConfig cfg = {})
      : rng_(seed), cfg_(cfg) {}

  TransitionFn function() {
    TransitionFn fn;
    Signature& s = fn.sig;
    s.states = {"A", "B", "C", "D"};
    s.start = "A";
    s.end = "D";
    s.inputs = {{"x0", Type::kNum}, {"x1", Type::kNum}, {"x2", Type::kNum},
                {"v0", Type::kVec2}};
    s.vars = {{"u0", Type::kNum, 0.0}, {"w0", Type::kVec2, Vec2{1, 0}}};
    s.locals = {{"l0", Type::kNum}, {"l1", Type::kNum}, {"lv", Type::kVec2}};
    for (int i = 0; i < cfg_.num_params; ++i) s.params.push_back("p" + std::to_string(i));
    sig_ = &s;
    fn.body = body(cfg_.max_stmt_depth);
    sig_ = nullptr;
    return fn;
  }

  TraceElement element(const TransitionFn& fn, int t = 0) {
    TraceElement e;
    e.t = t;
    e.state = pick(fn.sig.states);
    for (const auto& d : fn.sig.inputs) e.ins[d.name] = random_value(d.type);
    for (const auto& d : fn.sig.vars) e.vars[d.name] = random_value(d.type);
    return e;
  }

  ParamMap params(const TransitionFn& fn) {
    ParamMap p;
    for (const auto& name : fn.sig.params) p[name] = real(-5, 5);
    return p;
  }

  std::mt19937_64& rng() { return rng_; }

  double real(double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(rng_);
  }
  int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }
  bool chance(double p) { return std::bernoulli_distribution(p)(rng_); }

  template <class T>
  const T& pick(const std::vector<T>& v) {
    return v[static_cast<std::size_t>(integer(0, static_cast<int>(v.size()) - 1))];
  }

 private:
  Value random_value(Type t) {
    if (t == Type::kVec2) return Vec2{small_number(), small_number()};
    return small_number();
  }

  // Values on a coarse grid so that generated comparisons are sometimes
  // tight and sometimes not.
  double small_number() {
    if (chance(0.5)) return integer(-6, 6);
    return std::round(real(-6, 6) * 4) / 4;
  }

  ExprPtr num_leaf() {
    if (param_free_) {
      if (chance(0.5)) return Expr::constant(small_number());
      return Expr::input(pick(std::vector<std::string>{"x0", "x1", "x2"}));
    }
    if (!sig_->params.empty() && chance(cfg_.param_leaf)) return Expr::param(pick(sig_->params));
    switch (integer(0, 3)) {
      case 0: return Expr::constant(small_number());
      case 1: return Expr::input(pick(std::vector<std::string>{"x0", "x1", "x2"}));
      case 2: return Expr::var(pick(std::vector<std::string>{"u0", "l0", "l1"}));
      default: return Expr::param(pick(sig_->params));
    }
  }

  ExprPtr nonzero_constant() {
    double c = 0;
    while (c == 0) c = small_number();
    return Expr::constant(c);
  }

  ExprPtr num(int depth) {
    if (depth <= 0 || chance(0.3)) return num_leaf();
    int k = integer(0, cfg_.allow_nonlinear ? 9 : 6);
    switch (k) {
      case 0:
      case 1: return Expr::binary(BinaryOp::kAdd, num(depth - 1), num(depth - 1));
      case 2: return Expr::binary(BinaryOp::kSub, num(depth - 1), num(depth - 1));
      case 3: return Expr::binary(BinaryOp::kMul, num(depth - 1), num(depth - 1));
      case 4: return Expr::binary(BinaryOp::kDiv, num(depth - 1), nonzero_constant());
      case 5: return Expr::unary(UnaryOp::kNeg, num(depth - 1));
      case 6: return Expr::binary(BinaryOp::kDot, vec(depth - 1), vec(depth - 1));
      case 7: return Expr::unary(pick(std::vector<UnaryOp>{UnaryOp::kSin, UnaryOp::kCos,
                                                           UnaryOp::kAbs, UnaryOp::kAngleMod}),
                                 num(depth - 1));
      case 8: return Expr::unary(UnaryOp::kNorm, vec(depth - 1));
      default: return Expr::unary(UnaryOp::kNorm, num(depth - 1));
    }
  }

  ExprPtr vec(int depth) {
    if (depth <= 0 || chance(0.3)) {
      if (param_free_) return chance(0.5) ? Expr::input("v0") : Expr::vec2(num_leaf(), num_leaf());
      switch (integer(0, 2)) {
        case 0: return Expr::input("v0");
        case 1: return Expr::var(chance(0.5) ? "w0" : "lv");
        default: return Expr::vec2(num_leaf(), num_leaf());
      }
    }
    switch (integer(0, 4)) {
      case 0: return Expr::binary(BinaryOp::kAdd, vec(depth - 1), vec(depth - 1));
      case 1: return Expr::binary(BinaryOp::kSub, vec(depth - 1), vec(depth - 1));
      case 2: return Expr::binary(BinaryOp::kMul, num(depth - 1), vec(depth - 1));
      case 3: return Expr::vec2(num(depth - 1), num(depth - 1));
      default: return Expr::binary(BinaryOp::kDiv, vec(depth - 1), nonzero_constant());
    }
  }

  // Numeric equality only compares operands built from constants and inputs:
  // exact equality of a repaired real is not something a replay can be
  // expected to hit, and variables may carry parameters.
  ExprPtr param_free_num(int depth) {
    param_free_ = true;
    ExprPtr e = num(depth);
    param_free_ = false;
    return e;
  }

  ExprPtr atom(int depth) {
    int k = integer(0, 9);
    if (k <= 5) {
      BinaryOp op = pick(std::vector<BinaryOp>{BinaryOp::kLt, BinaryOp::kGt, BinaryOp::kLe,
                                               BinaryOp::kGe});
      return Expr::binary(op, num(depth), num(depth));
    }
    if (k <= 7) {
      BinaryOp op = chance(0.5) ? BinaryOp::kEq : BinaryOp::kNe;
      return Expr::binary(op, Expr::state_ref(), Expr::constant(StateName{pick(sig_->states)}));
    }
    if (k == 8) {
      BinaryOp op = chance(0.5) ? BinaryOp::kEq : BinaryOp::kNe;
      return Expr::binary(op, param_free_num(depth), param_free_num(depth));
    }
    if (!cfg_.numeric_ne) return Expr::binary(BinaryOp::kLt, num(depth), num(depth));
    return Expr::binary(BinaryOp::kNe, num(depth), num(depth));
  }

  ExprPtr cond(int depth) {
    if (depth <= 0 || chance(0.5)) return atom(cfg_.max_expr_depth - 1);
    BinaryOp op = chance(0.6) ? BinaryOp::kAnd : BinaryOp::kOr;
    return Expr::binary(op, cond(depth - 1), cond(depth - 1));
  }

  ExprPtr state_value() {
    if (chance(0.2)) return Expr::state_ref();
    return Expr::constant(StateName{pick(sig_->states)});
  }

  StmtPtr assignment() {
    if (chance(0.6)) {
      std::string target = pick(std::vector<std::string>{"u0", "l0", "l1"});
      return Stmt::assign(target, num(cfg_.max_expr_depth));
    }
    return Stmt::assign(chance(0.5) ? "w0" : "lv", vec(cfg_.max_expr_depth));
  }

  // A statement list that always returns.
  StmtPtr body(int depth) {
    std::vector<StmtPtr> out;
    int n = integer(0, 2);
    for (int i = 0; i < n; ++i) out.push_back(assignment());
    if (depth > 0 && chance(0.3)) {
      // A conditional that may fall through, followed by more code.
      std::vector<StmtPtr> then_body;
      if (chance(0.5)) then_body.push_back(assignment());
      if (chance(0.5)) then_body.push_back(Stmt::make_return(state_value()));
      out.push_back(Stmt::make_if(cond(2), Stmt::block(std::move(then_body)),
                                  Stmt::block({})));
    }
    if (depth > 0 && chance(0.75)) {
      out.push_back(Stmt::make_if(cond(2), body(depth - 1), body(depth - 1)));
    } else {
      out.push_back(Stmt::make_return(state_value()));
    }
    return Stmt::block(std::move(out));
  }

  std::mt19937_64 rng_;
  GeneratorConfig cfg_;
  const Signature* sig_ = nullptr;
  bool param_free_ = false;
};

}  // namespace srtr::testing
