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
#include <functional>

#include "srtr/dsl.hpp"
#include "srtr/error.hpp"
#include "srtr/peval.hpp"

namespace srtr {
namespace {

struct Linearizer {
  const std::vector<std::string>& rep;
  const ParamMap& params;

  std::size_t n() const { return rep.size(); }

  AffineNum lift(double v) const { return {v, std::vector<double>(n(), 0.0)}; }
  AffineVec lift(const Vec2& v) const { return {lift(v.x), lift(v.y)}; }

  static std::optional<AffineNum> as_num(const SymExpr& s, const Linearizer& l) {
    if (auto* a = std::get_if<AffineNum>(&s)) return *a;
    if (auto* v = std::get_if<Value>(&s)) {
      if (auto* d = std::get_if<double>(v)) return l.lift(*d);
    }
    return std::nullopt;
  }

  static std::optional<AffineVec> as_vec(const SymExpr& s, const Linearizer& l) {
    if (auto* a = std::get_if<AffineVec>(&s)) return *a;
    if (auto* v = std::get_if<Value>(&s)) {
      if (auto* p = std::get_if<Vec2>(v)) return l.lift(*p);
    }
    return std::nullopt;
  }

  static bool constant(const SymExpr& s) { return std::holds_alternative<Value>(s); }

  // Applies a concrete binary evaluator to the constant terms so that the
  // result matches concrete evaluation bit for bit.
  static double apply(BinaryOp op, double a, double b) {
    return std::get<double>(op_info(op).eval(a, b));
  }

  static AffineNum combine(BinaryOp op, const AffineNum& a, const AffineNum& b) {
    AffineNum r{apply(op, a.c0, b.c0), a.coef};
    double sign = op == BinaryOp::kSub ? -1.0 : 1.0;
    for (std::size_t j = 0; j < r.coef.size(); ++j) r.coef[j] += sign * b.coef[j];
    return r;
  }

  static AffineNum scale(const AffineNum& a, double k, bool k_left, BinaryOp op) {
    AffineNum r{k_left ? apply(op, k, a.c0) : apply(op, a.c0, k), a.coef};
    for (double& c : r.coef) c = op == BinaryOp::kDiv ? c / k : c * k;
    return r;
  }

  SymExpr operator()(const ExprPtr& e) const {
    switch (e->kind) {
      case Expr::Kind::kConst:
        return e->value;
      case Expr::Kind::kParam: {
        auto it = std::find(rep.begin(), rep.end(), e->name);
        auto pv = params.find(e->name);
        if (pv == params.end()) return Opaque{e};
        if (it == rep.end()) return Value(pv->second);
        AffineNum a = lift(pv->second);
        a.coef[it - rep.begin()] = 1.0;
        return a;
      }
      case Expr::Kind::kUnary: {
        SymExpr x = (*this)(e->lhs);
        if (auto* v = std::get_if<Value>(&x)) return op_info(e->unary_op).eval(*v);
        if (e->unary_op != UnaryOp::kNeg) return Opaque{e};
        if (auto* a = std::get_if<AffineNum>(&x)) {
          AffineNum r{-a->c0, a->coef};
          for (double& c : r.coef) c = -c;
          return r;
        }
        if (auto* v = std::get_if<AffineVec>(&x)) {
          AffineVec r = *v;
          for (AffineNum* c : {&r.x, &r.y}) {
            c->c0 = -c->c0;
            for (double& k : c->coef) k = -k;
          }
          return r;
        }
        return Opaque{e};
      }
      case Expr::Kind::kBinary:
        return binary(e);
      case Expr::Kind::kVec2: {
        SymExpr x = (*this)(e->lhs);
        SymExpr y = (*this)(e->rhs);
        if (constant(x) && constant(y)) {
          return Value(Vec2{std::get<double>(std::get<Value>(x)),
                            std::get<double>(std::get<Value>(y))});
        }
        auto ax = as_num(x, *this);
        auto ay = as_num(y, *this);
        if (!ax || !ay) return Opaque{e};
        return AffineVec{*ax, *ay};
      }
      default:
        return Opaque{e};
    }
  }

  SymExpr binary(const ExprPtr& e) const {
    BinaryOp op = e->binary_op;
    const auto& info = op_info(op);
    if (info.linearity == Linearity::kRelational || info.linearity == Linearity::kLogical) {
      SymExpr a = (*this)(e->lhs);
      SymExpr b = (*this)(e->rhs);
      if (constant(a) && constant(b)) {
        return info.eval(std::get<Value>(a), std::get<Value>(b));
      }
      return Opaque{e};
    }
    SymExpr a = (*this)(e->lhs);
    SymExpr b = (*this)(e->rhs);
    if (constant(a) && constant(b)) return info.eval(std::get<Value>(a), std::get<Value>(b));
    if (std::holds_alternative<Opaque>(a) || std::holds_alternative<Opaque>(b)) {
      return Opaque{e};
    }
    bool both_symbolic = !constant(a) && !constant(b);
    switch (op) {
      case BinaryOp::kAdd:
      case BinaryOp::kSub: {
        if (auto x = as_num(a, *this)) {
          if (auto y = as_num(b, *this)) return combine(op, *x, *y);
        }
        auto x = as_vec(a, *this);
        auto y = as_vec(b, *this);
        if (!x || !y) return Opaque{e};
        return AffineVec{combine(op, x->x, y->x), combine(op, x->y, y->y)};
      }
      case BinaryOp::kMul:
      case BinaryOp::kDiv: {
        if (both_symbolic) return Opaque{e};
        bool left_const = constant(a);
        if (op == BinaryOp::kDiv && left_const) return Opaque{e};
        const Value& k = std::get<Value>(left_const ? a : b);
        const SymExpr& s = left_const ? b : a;
        if (auto* kd = std::get_if<double>(&k)) {
          if (op == BinaryOp::kDiv && *kd == 0.0) {
            throw Error(ErrorKind::kDivisionByZero, "division by zero");
          }
          if (auto* x = std::get_if<AffineNum>(&s)) return scale(*x, *kd, left_const, op);
          const auto& v = std::get<AffineVec>(s);
          return AffineVec{scale(v.x, *kd, left_const, op), scale(v.y, *kd, left_const, op)};
        }
        // Vec2 constant times a symbolic Num.
        const Vec2& kv = std::get<Vec2>(k);
        const auto* x = std::get_if<AffineNum>(&s);
        if (!x) return Opaque{e};
        return AffineVec{scale(*x, kv.x, left_const, op), scale(*x, kv.y, left_const, op)};
      }
      case BinaryOp::kDot: {
        if (both_symbolic) return Opaque{e};
        bool left_const = constant(a);
        Vec2 k = std::get<Vec2>(std::get<Value>(left_const ? a : b));
        AffineVec v = *as_vec(left_const ? b : a, *this);
        // Concrete evaluation computes lhs.x * rhs.x + lhs.y * rhs.y.
        AffineNum px = scale(v.x, k.x, left_const, BinaryOp::kMul);
        AffineNum py = scale(v.y, k.y, left_const, BinaryOp::kMul);
        return combine(BinaryOp::kAdd, px, py);
      }
      default:
        return Opaque{e};
    }
  }
};

void walk_exprs(const Stmt& s, const std::function<void(const Stmt&)>& f) {
  f(s);
  if (s.then_branch) walk_exprs(*s.then_branch, f);
  if (s.else_branch) walk_exprs(*s.else_branch, f);
  for (const auto& c : s.body) walk_exprs(*c, f);
}

[[noreturn]] void non_affine(const Stmt& s, const std::string& why) {
  throw Error(ErrorKind::kNonAffine, "residual " + why + " in `" +
                                         print_stmt(s).substr(0, 120) + "`");
}

void check_closed(const Expr& e, const Stmt& s, const Classification& c) {
  switch (e.kind) {
    case Expr::Kind::kState:
    case Expr::Kind::kVar:
    case Expr::Kind::kInput:
      non_affine(s, "mentions " + print_expr(e));
    case Expr::Kind::kParam:
      if (!c.is_rep(e.name)) non_affine(s, "mentions unrepairable param:" + e.name);
      return;
    default:
      if (e.lhs) check_closed(*e.lhs, s, c);
      if (e.rhs) check_closed(*e.rhs, s, c);
  }
}

void check_guard(const Expr& g, const Stmt& s, const Linearizer& lin) {
  if (g.kind == Expr::Kind::kConst) return;
  if (g.kind != Expr::Kind::kBinary) non_affine(s, "has a non-boolean guard");
  const auto& info = op_info(g.binary_op);
  if (info.linearity == Linearity::kLogical) {
    check_guard(*g.lhs, s, lin);
    check_guard(*g.rhs, s, lin);
    return;
  }
  if (info.linearity != Linearity::kRelational) non_affine(s, "has a non-boolean guard");
  for (const auto& side : {g.lhs, g.rhs}) {
    SymExpr v = lin(side);
    if (std::holds_alternative<Opaque>(v) || std::holds_alternative<AffineVec>(v)) {
      non_affine(s, "has a non-affine comparison operand " + print_expr(*side));
    }
  }
}

}  // namespace

bool AffineNum::is_constant() const {
  return std::all_of(coef.begin(), coef.end(), [](double c) { return c == 0.0; });
}

SymExpr symbolize(const ExprPtr& e, const std::vector<std::string>& rep,
                  const ParamMap& params) {
  return Linearizer{rep, params}(e);
}

void check_residual(const ResidualFn& r) {
  Linearizer lin{r.classification.rep, r.params};
  walk_exprs(*r.body, [&](const Stmt& s) {
    switch (s.kind) {
      case Stmt::Kind::kReturn:
        if (s.expr->kind != Expr::Kind::kConst) non_affine(s, "returns a non-constant state");
        break;
      case Stmt::Kind::kAssign:
        non_affine(s, "contains an assignment");
      case Stmt::Kind::kIf:
        check_closed(*s.expr, s, r.classification);
        check_guard(*s.expr, s, lin);
        break;
      case Stmt::Kind::kBlock:
        break;
    }
  });
}

}  // namespace srtr
