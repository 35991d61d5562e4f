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

#include "srtr/dsl.hpp"

namespace srtr {
namespace {

int infix_precedence(const Expr& e) {
  if (e.kind != Expr::Kind::kBinary) return 100;
  int p = op_info(e.binary_op).precedence;
  return p == 0 ? 100 : p;
}

std::string wrap(const Expr& e, bool parens) {
  std::string s = print_expr(e);
  return parens ? "(" + s + ")" : s;
}

std::string pad(int indent) { return std::string(2 * indent, ' '); }

void print_children(const Stmt& block, int indent, std::string& out) {
  for (const auto& c : block.body) out += print_stmt(*c, indent);
}

// Prints an if statement starting at the current column (no leading pad).
void print_if(const Stmt& s, int indent, std::string& out) {
  out += "if (" + print_expr(*s.expr) + ")";
  const Stmt& t = *s.then_branch;
  if (t.kind == Stmt::Kind::kBlock) {
    out += " {\n";
    print_children(t, indent + 1, out);
    out += pad(indent) + "} else";
  } else {
    out += "\n" + print_stmt(t, indent + 1) + pad(indent) + "else";
  }
  const Stmt& e = *s.else_branch;
  if (e.kind == Stmt::Kind::kBlock) {
    out += " {\n";
    print_children(e, indent + 1, out);
    out += pad(indent) + "}\n";
  } else if (e.kind == Stmt::Kind::kIf) {
    out += " ";
    print_if(e, indent, out);
  } else {
    out += "\n" + print_stmt(e, indent + 1);
  }
}

std::string print_declarations(const std::vector<Declaration>& ds) {
  std::string out;
  for (std::size_t i = 0; i < ds.size(); ++i) {
    if (i) out += ", ";
    out += ds[i].name + ": " + type_name(ds[i].type);
  }
  return out;
}

}  // namespace

std::string print_expr(const Expr& e) {
  switch (e.kind) {
    case Expr::Kind::kConst:
      if (auto* s = std::get_if<StateName>(&e.value)) return "\"" + s->name + "\"";
      return format_value(e.value);
    case Expr::Kind::kState:
      return "state";
    case Expr::Kind::kVar:
      return "var:" + e.name;
    case Expr::Kind::kInput:
      return "in:" + e.name;
    case Expr::Kind::kParam:
      return "param:" + e.name;
    case Expr::Kind::kUnary: {
      const auto& info = op_info(e.unary_op);
      if (e.unary_op != UnaryOp::kNeg) {
        return std::string(info.spelling) + "(" + print_expr(*e.lhs) + ")";
      }
      // A bare literal after '-' would be folded into a negative constant
      // on re-parse, so literals keep their parentheses.
      const Expr& x = *e.lhs;
      bool parens = infix_precedence(x) < kUnaryPrecedence ||
                    (x.kind == Expr::Kind::kConst && type_of(x.value) == Type::kNum);
      return "-" + wrap(x, parens);
    }
    case Expr::Kind::kBinary: {
      const auto& info = op_info(e.binary_op);
      if (info.precedence == 0) {
        return std::string(info.spelling) + "(" + print_expr(*e.lhs) + ", " +
               print_expr(*e.rhs) + ")";
      }
      return wrap(*e.lhs, infix_precedence(*e.lhs) < info.precedence) + " " +
             std::string(info.spelling) + " " +
             wrap(*e.rhs, infix_precedence(*e.rhs) <= info.precedence);
    }
    case Expr::Kind::kVec2:
      return "<" + wrap(*e.lhs, infix_precedence(*e.lhs) < 5) + ", " +
             wrap(*e.rhs, infix_precedence(*e.rhs) < 5) + ">";
  }
  return "?";
}

std::string print_stmt(const Stmt& s, int indent) {
  std::string out = pad(indent);
  switch (s.kind) {
    case Stmt::Kind::kReturn:
      out += "return " + print_expr(*s.expr) + ";\n";
      break;
    case Stmt::Kind::kAssign:
      out += "var:" + s.target + " := " + print_expr(*s.expr) + ";\n";
      break;
    case Stmt::Kind::kIf:
      print_if(s, indent, out);
      break;
    case Stmt::Kind::kBlock:
      out += "{\n";
      print_children(s, indent + 1, out);
      out += pad(indent) + "}\n";
      break;
  }
  return out;
}

std::string print_rsm(const TransitionFn& fn) {
  const Signature& sig = fn.sig;
  std::string out = "states {";
  for (std::size_t i = 0; i < sig.states.size(); ++i) {
    if (i) out += ", ";
    out += sig.states[i];
  }
  out += "} start " + sig.start + " end " + sig.end + ";\n";
  if (!sig.inputs.empty()) out += "inputs {" + print_declarations(sig.inputs) + "};\n";
  if (!sig.vars.empty()) {
    out += "vars {";
    for (std::size_t i = 0; i < sig.vars.size(); ++i) {
      const auto& v = sig.vars[i];
      if (i) out += ", ";
      out += v.name + ": " + type_name(v.type) + " = " + format_value(v.initial);
    }
    out += "};\n";
  }
  if (!sig.locals.empty()) out += "locals {" + print_declarations(sig.locals) + "};\n";
  if (!sig.params.empty()) {
    out += "params {";
    for (std::size_t i = 0; i < sig.params.size(); ++i) {
      if (i) out += ", ";
      out += sig.params[i];
    }
    out += "};\n";
  }
  out += "transition " + print_stmt(*fn.body, 0);
  return out;
}

}  // namespace srtr
