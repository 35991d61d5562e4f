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

#include "srtr/ast.hpp"

#include <algorithm>

namespace srtr {

std::string format_pos(SourcePos pos) {
  return std::to_string(pos.line) + ":" + std::to_string(pos.column);
}

ExprPtr Expr::constant(Value v, SourcePos pos) {
  auto e = std::make_shared<Expr>();
  e->kind = Kind::kConst;
  e->value = std::move(v);
  e->pos = pos;
  return e;
}

ExprPtr Expr::state_ref(SourcePos pos) {
  auto e = std::make_shared<Expr>();
  e->kind = Kind::kState;
  e->pos = pos;
  return e;
}

namespace {

ExprPtr named(Expr::Kind kind, std::string name, SourcePos pos) {
  auto e = std::make_shared<Expr>();
  e->kind = kind;
  e->name = std::move(name);
  e->pos = pos;
  return e;
}

}  // namespace

ExprPtr Expr::var(std::string name, SourcePos pos) {
  return named(Kind::kVar, std::move(name), pos);
}

ExprPtr Expr::input(std::string name, SourcePos pos) {
  return named(Kind::kInput, std::move(name), pos);
}

ExprPtr Expr::param(std::string name, SourcePos pos) {
  return named(Kind::kParam, std::move(name), pos);
}

ExprPtr Expr::unary(UnaryOp op, ExprPtr operand, SourcePos pos) {
  auto e = std::make_shared<Expr>();
  e->kind = Kind::kUnary;
  e->unary_op = op;
  e->lhs = std::move(operand);
  e->pos = pos;
  return e;
}

ExprPtr Expr::binary(BinaryOp op, ExprPtr lhs, ExprPtr rhs, SourcePos pos) {
  auto e = std::make_shared<Expr>();
  e->kind = Kind::kBinary;
  e->binary_op = op;
  e->lhs = std::move(lhs);
  e->rhs = std::move(rhs);
  e->pos = pos;
  return e;
}

ExprPtr Expr::vec2(ExprPtr x, ExprPtr y, SourcePos pos) {
  auto e = std::make_shared<Expr>();
  e->kind = Kind::kVec2;
  e->lhs = std::move(x);
  e->rhs = std::move(y);
  e->pos = pos;
  return e;
}

StmtPtr Stmt::make_return(ExprPtr value, SourcePos pos) {
  auto s = std::make_shared<Stmt>();
  s->kind = Kind::kReturn;
  s->expr = std::move(value);
  s->pos = pos;
  return s;
}

StmtPtr Stmt::assign(std::string target, ExprPtr value, SourcePos pos) {
  auto s = std::make_shared<Stmt>();
  s->kind = Kind::kAssign;
  s->target = std::move(target);
  s->expr = std::move(value);
  s->pos = pos;
  return s;
}

StmtPtr Stmt::make_if(ExprPtr cond, StmtPtr then_branch, StmtPtr else_branch,
                      SourcePos pos) {
  auto s = std::make_shared<Stmt>();
  s->kind = Kind::kIf;
  s->expr = std::move(cond);
  s->then_branch = std::move(then_branch);
  s->else_branch = std::move(else_branch);
  s->pos = pos;
  return s;
}

StmtPtr Stmt::block(std::vector<StmtPtr> body, SourcePos pos) {
  auto s = std::make_shared<Stmt>();
  s->kind = Kind::kBlock;
  s->body = std::move(body);
  s->pos = pos;
  return s;
}

bool Signature::has_state(const std::string& s) const {
  return std::find(states.begin(), states.end(), s) != states.end();
}

bool Signature::has_param(const std::string& p) const {
  return std::find(params.begin(), params.end(), p) != params.end();
}

std::optional<Type> Signature::input_type(const std::string& name) const {
  for (const auto& d : inputs) {
    if (d.name == name) return d.type;
  }
  return std::nullopt;
}

std::optional<Type> Signature::var_type(const std::string& name) const {
  for (const auto& d : vars) {
    if (d.name == name) return d.type;
  }
  for (const auto& d : locals) {
    if (d.name == name) return d.type;
  }
  return std::nullopt;
}

bool Signature::is_local(const std::string& name) const {
  return std::any_of(locals.begin(), locals.end(),
                     [&](const Declaration& d) { return d.name == name; });
}

ValueMap Signature::initial_vars() const {
  ValueMap out;
  for (const auto& d : vars) out[d.name] = d.initial;
  return out;
}

bool structurally_equal(const Expr& a, const Expr& b) {
  if (&a == &b) return true;
  if (a.kind != b.kind) return false;
  switch (a.kind) {
    case Expr::Kind::kConst: return identical(a.value, b.value);
    case Expr::Kind::kState: return true;
    case Expr::Kind::kVar:
    case Expr::Kind::kInput:
    case Expr::Kind::kParam: return a.name == b.name;
    case Expr::Kind::kUnary:
      return a.unary_op == b.unary_op && structurally_equal(*a.lhs, *b.lhs);
    case Expr::Kind::kBinary:
      return a.binary_op == b.binary_op && structurally_equal(*a.lhs, *b.lhs) &&
             structurally_equal(*a.rhs, *b.rhs);
    case Expr::Kind::kVec2:
      return structurally_equal(*a.lhs, *b.lhs) &&
             structurally_equal(*a.rhs, *b.rhs);
  }
  return false;
}

bool structurally_equal(const Stmt& a, const Stmt& b) {
  if (&a == &b) return true;
  if (a.kind != b.kind) return false;
  switch (a.kind) {
    case Stmt::Kind::kReturn: return structurally_equal(*a.expr, *b.expr);
    case Stmt::Kind::kAssign:
      return a.target == b.target && structurally_equal(*a.expr, *b.expr);
    case Stmt::Kind::kIf:
      return structurally_equal(*a.expr, *b.expr) &&
             structurally_equal(*a.then_branch, *b.then_branch) &&
             structurally_equal(*a.else_branch, *b.else_branch);
    case Stmt::Kind::kBlock:
      if (a.body.size() != b.body.size()) return false;
      for (std::size_t i = 0; i < a.body.size(); ++i) {
        if (!structurally_equal(*a.body[i], *b.body[i])) return false;
      }
      return true;
  }
  return false;
}

namespace {

bool same_decls(const std::vector<Declaration>& a,
                const std::vector<Declaration>& b) {
  return std::equal(a.begin(), a.end(), b.begin(), b.end(),
                    [](const Declaration& x, const Declaration& y) {
                      return x.name == y.name && x.type == y.type;
                    });
}

}  // namespace

bool structurally_equal(const TransitionFn& a, const TransitionFn& b) {
  const Signature& s = a.sig;
  const Signature& t = b.sig;
  bool vars_equal = std::equal(
      s.vars.begin(), s.vars.end(), t.vars.begin(), t.vars.end(),
      [](const VarDeclaration& x, const VarDeclaration& y) {
        return x.name == y.name && x.type == y.type &&
               identical(x.initial, y.initial);
      });
  return s.states == t.states && s.start == t.start && s.end == t.end &&
         same_decls(s.inputs, t.inputs) && vars_equal &&
         same_decls(s.locals, t.locals) && s.params == t.params &&
         structurally_equal(*a.body, *b.body);
}

}  // namespace srtr
