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

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "srtr/ops.hpp"
#include "srtr/value.hpp"

namespace srtr {

struct SourcePos {
  int line = 0;
  int column = 0;
};

std::string format_pos(SourcePos pos);

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

/// Expression node. Nodes are immutable once built and freely shared between
/// trees, so rewriting passes return the original pointer for unchanged
/// subtrees.
struct Expr {
  enum class Kind {
    kConst,
    kState,
    kVar,
    kInput,
    kParam,
    kUnary,
    kBinary,
    kVec2,
  };

  Kind kind = Kind::kConst;
  Value value;       // kConst
  std::string name;  // kVar, kInput, kParam
  UnaryOp unary_op = UnaryOp::kNeg;
  BinaryOp binary_op = BinaryOp::kAdd;
  ExprPtr lhs;  // operand of kUnary, left of kBinary, x of kVec2
  ExprPtr rhs;  // right of kBinary, y of kVec2
  SourcePos pos;

  static ExprPtr constant(Value v, SourcePos pos = {});
  static ExprPtr state_ref(SourcePos pos = {});
  static ExprPtr var(std::string name, SourcePos pos = {});
  static ExprPtr input(std::string name, SourcePos pos = {});
  static ExprPtr param(std::string name, SourcePos pos = {});
  static ExprPtr unary(UnaryOp op, ExprPtr operand, SourcePos pos = {});
  static ExprPtr binary(BinaryOp op, ExprPtr lhs, ExprPtr rhs,
                        SourcePos pos = {});
  static ExprPtr vec2(ExprPtr x, ExprPtr y, SourcePos pos = {});
};

struct Stmt;
using StmtPtr = std::shared_ptr<const Stmt>;

struct Stmt {
  enum class Kind { kReturn, kAssign, kIf, kBlock };

  Kind kind = Kind::kBlock;
  ExprPtr expr;        // returned state, assigned value, or if-condition
  std::string target;  // kAssign: variable name (without the `var:` prefix)
  StmtPtr then_branch;
  StmtPtr else_branch;
  std::vector<StmtPtr> body;  // kBlock
  SourcePos pos;

  static StmtPtr make_return(ExprPtr value, SourcePos pos = {});
  static StmtPtr assign(std::string target, ExprPtr value, SourcePos pos = {});
  static StmtPtr make_if(ExprPtr cond, StmtPtr then_branch, StmtPtr else_branch,
                         SourcePos pos = {});
  static StmtPtr block(std::vector<StmtPtr> body, SourcePos pos = {});
};

struct Declaration {
  std::string name;
  Type type = Type::kNum;
};

struct VarDeclaration {
  std::string name;
  Type type = Type::kNum;
  Value initial;
};

/// Declared identifiers of a transition function. Program variables and
/// transition-local temporaries share the `var:` namespace; only program
/// variables are part of V (and therefore of trace elements).
struct Signature {
  std::vector<std::string> states;
  std::string start;
  std::string end;
  std::vector<Declaration> inputs;
  std::vector<VarDeclaration> vars;
  std::vector<Declaration> locals;
  std::vector<std::string> params;

  bool has_state(const std::string& s) const;
  bool has_param(const std::string& p) const;
  std::optional<Type> input_type(const std::string& name) const;
  /// Type of a program variable or local temporary.
  std::optional<Type> var_type(const std::string& name) const;
  bool is_local(const std::string& name) const;

  /// Initial values V0 of the program variables.
  ValueMap initial_vars() const;
};

/// A parsed transition function: declarations plus body.
struct TransitionFn {
  Signature sig;
  StmtPtr body;
};

bool structurally_equal(const Expr& a, const Expr& b);
bool structurally_equal(const Stmt& a, const Stmt& b);
bool structurally_equal(const TransitionFn& a, const TransitionFn& b);

}  // namespace srtr
