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

class Checker {
 public:
  explicit Checker(const Signature& sig) : sig_(sig) {}

  std::vector<Diagnostic> take() { return std::move(diags_); }

  std::optional<Type> expr(const Expr& e) {
    switch (e.kind) {
      case Expr::Kind::kConst:
        if (auto* s = std::get_if<StateName>(&e.value)) {
          if (!sig_.has_state(s->name)) {
            report(ErrorKind::kUnboundIdentifier, e.pos,
                   "state \"" + s->name + "\" is not declared");
            return std::nullopt;
          }
        }
        return type_of(e.value);
      case Expr::Kind::kState:
        return Type::kState;
      case Expr::Kind::kVar:
        if (auto t = sig_.var_type(e.name)) return t;
        unbound(e, "var");
        return std::nullopt;
      case Expr::Kind::kInput:
        if (auto t = sig_.input_type(e.name)) return t;
        unbound(e, "in");
        return std::nullopt;
      case Expr::Kind::kParam:
        if (sig_.has_param(e.name)) return Type::kNum;
        unbound(e, "param");
        return std::nullopt;
      case Expr::Kind::kUnary: {
        auto t = expr(*e.lhs);
        if (!t) return std::nullopt;
        const auto& info = op_info(e.unary_op);
        auto r = info.result_type(*t);
        if (!r) {
          report(ErrorKind::kTypeError, e.pos,
                 "operator '" + std::string(info.spelling) +
                     "' does not accept " + type_name(*t));
        }
        return r;
      }
      case Expr::Kind::kBinary: {
        auto a = expr(*e.lhs);
        auto b = expr(*e.rhs);
        if (!a || !b) return std::nullopt;
        const auto& info = op_info(e.binary_op);
        auto r = info.result_type(*a, *b);
        if (!r) {
          report(ErrorKind::kTypeError, e.pos,
                 "operator '" + std::string(info.spelling) +
                     "' does not accept " + type_name(*a) + " and " +
                     type_name(*b));
          return std::nullopt;
        }
        if (e.binary_op == BinaryOp::kDiv && e.rhs->kind == Expr::Kind::kConst &&
            std::get<double>(e.rhs->value) == 0.0) {
          report(ErrorKind::kDivisionByZero, e.pos, "division by literal zero");
        }
        return r;
      }
      case Expr::Kind::kVec2: {
        auto a = expr(*e.lhs);
        auto b = expr(*e.rhs);
        if (!a || !b) return std::nullopt;
        if (*a != Type::kNum || *b != Type::kNum) {
          report(ErrorKind::kTypeError, e.pos,
                 "vector components must be num, found " + type_name(*a) +
                     " and " + type_name(*b));
          return std::nullopt;
        }
        return Type::kVec2;
      }
    }
    return std::nullopt;
  }

  void expect(const Expr& e, Type want, const std::string& context) {
    auto t = expr(e);
    if (t && *t != want) {
      report(ErrorKind::kTypeError, e.pos,
             context + " must have type " + type_name(want) + ", found " +
                 type_name(*t));
    }
  }

  void stmt(const Stmt& s) {
    switch (s.kind) {
      case Stmt::Kind::kReturn:
        expect(*s.expr, Type::kState, "returned value");
        break;
      case Stmt::Kind::kAssign: {
        auto target = sig_.var_type(s.target);
        if (!target) {
          std::string msg = "assignment to undeclared variable 'var:" + s.target + "'";
          if (sig_.input_type(s.target)) msg += " (inputs are read-only)";
          if (sig_.has_param(s.target)) msg += " (parameters are read-only)";
          report(ErrorKind::kUnboundIdentifier, s.pos, msg);
          expr(*s.expr);
          break;
        }
        expect(*s.expr, *target, "value assigned to 'var:" + s.target + "'");
        break;
      }
      case Stmt::Kind::kIf:
        expect(*s.expr, Type::kBool, "condition");
        stmt(*s.then_branch);
        stmt(*s.else_branch);
        break;
      case Stmt::Kind::kBlock:
        for (const auto& c : s.body) stmt(*c);
        break;
    }
  }

  void report(ErrorKind kind, SourcePos pos, std::string msg) {
    diags_.push_back({kind, std::move(msg), pos});
  }

 private:
  void unbound(const Expr& e, const std::string& ns) {
    std::string msg = "'" + ns + ":" + e.name + "' is not declared";
    std::vector<std::string> guesses;
    if (ns != "in" && sig_.input_type(e.name)) guesses.push_back("in:" + e.name);
    if (ns != "var" && sig_.var_type(e.name)) guesses.push_back("var:" + e.name);
    if (ns != "param" && sig_.has_param(e.name)) guesses.push_back("param:" + e.name);
    if (!guesses.empty()) msg += "; did you mean '" + guesses.front() + "'?";
    report(ErrorKind::kUnboundIdentifier, e.pos, msg);
  }

  const Signature& sig_;
  std::vector<Diagnostic> diags_;
};

// Describes one control path that falls off the end, or nullopt if every
// path returns.
std::optional<std::string> fallthrough_path(const Stmt& s) {
  switch (s.kind) {
    case Stmt::Kind::kReturn:
      return std::nullopt;
    case Stmt::Kind::kAssign:
      return "";
    case Stmt::Kind::kIf: {
      if (auto p = fallthrough_path(*s.then_branch)) {
        return "then-branch of if at " + format_pos(s.pos) +
               (p->empty() ? "" : ", " + *p);
      }
      if (auto p = fallthrough_path(*s.else_branch)) {
        return "else-branch of if at " + format_pos(s.pos) +
               (p->empty() ? "" : ", " + *p);
      }
      return std::nullopt;
    }
    case Stmt::Kind::kBlock: {
      std::string last;
      for (const auto& c : s.body) {
        auto p = fallthrough_path(*c);
        if (!p) return std::nullopt;
        if (!p->empty()) last = *p;
      }
      return last;
    }
  }
  return "";
}

}  // namespace

std::string format_diagnostic(const Diagnostic& d) {
  return format_pos(d.pos) + ": " + d.message;
}

std::vector<Diagnostic> typecheck(const TransitionFn& fn) {
  Checker c(fn.sig);
  if (!fn.sig.has_state(fn.sig.start)) {
    c.report(ErrorKind::kUnboundIdentifier, {}, "start state '" + fn.sig.start + "' is not declared");
  }
  if (!fn.sig.has_state(fn.sig.end)) {
    c.report(ErrorKind::kUnboundIdentifier, {}, "end state '" + fn.sig.end + "' is not declared");
  }
  c.stmt(*fn.body);
  auto diags = c.take();
  if (auto p = fallthrough_path(*fn.body)) {
    std::string where = p->empty() ? "the end of the transition body" : *p;
    diags.push_back({ErrorKind::kMissingReturn,
                     "control reaches the end of the transition without a "
                     "return (via " + where + ")",
                     fn.body->pos});
  }
  return diags;
}

std::vector<Diagnostic> typecheck_expr(const Expr& expr, const Signature& sig) {
  Checker c(sig);
  c.expr(expr);
  return c.take();
}

std::optional<Type> infer_type(const Expr& expr, const Signature& sig) {
  Checker c(sig);
  auto t = c.expr(expr);
  if (!c.take().empty()) return std::nullopt;
  return t;
}

bool always_returns(const Stmt& stmt) { return !fallthrough_path(stmt); }

}  // namespace srtr
