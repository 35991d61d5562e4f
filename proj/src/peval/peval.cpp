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

#include <map>
#include <set>

#include "srtr/dsl.hpp"
#include "srtr/error.hpp"
#include "srtr/peval.hpp"

namespace srtr {
namespace {

bool is_const(const ExprPtr& e) { return e->kind == Expr::Kind::kConst; }

// Variable slots: a Const is a known value, `var:name` itself means the
// runtime variable holds the value, anything else is a symbolic value
// (inline mode only).
using VarEnv = std::map<std::string, ExprPtr>;

struct Residual {
  std::vector<StmtPtr> stmts;
  bool falls_through = true;
};

class Specializer {
 public:
  Specializer(const TransitionFn& fn, const Bindings& b, const PevalOptions& o)
      : fn_(fn), bind_(b), opt_(o) {}

  VarEnv initial_env() const {
    VarEnv env;
    for (const auto& [k, v] : bind_.vars) env[k] = Expr::constant(v);
    for (const auto& l : fn_.sig.locals) env[l.name] = Expr::constant(zero_value(l.type));
    return env;
  }

  ExprPtr expr(const ExprPtr& e, const VarEnv& env) const {
    switch (e->kind) {
      case Expr::Kind::kConst:
        return e;
      case Expr::Kind::kState:
        if (bind_.state) return Expr::constant(StateName{*bind_.state}, e->pos);
        return e;
      case Expr::Kind::kVar: {
        auto it = env.find(e->name);
        if (it == env.end() || it->second->kind == Expr::Kind::kVar) return e;
        return it->second;
      }
      case Expr::Kind::kInput: {
        auto it = bind_.ins.find(e->name);
        return it == bind_.ins.end() ? e : Expr::constant(it->second, e->pos);
      }
      case Expr::Kind::kParam: {
        auto it = bind_.params.find(e->name);
        return it == bind_.params.end() ? e : Expr::constant(it->second, e->pos);
      }
      case Expr::Kind::kUnary: {
        ExprPtr x = expr(e->lhs, env);
        if (is_const(x)) return Expr::constant(op_info(e->unary_op).eval(x->value), e->pos);
        return x == e->lhs ? e : Expr::unary(e->unary_op, x, e->pos);
      }
      case Expr::Kind::kBinary: {
        ExprPtr a = expr(e->lhs, env);
        if (is_const(a) && (e->binary_op == BinaryOp::kAnd || e->binary_op == BinaryOp::kOr)) {
          bool lhs = std::get<bool>(a->value);
          if (lhs == (e->binary_op == BinaryOp::kOr)) return Expr::constant(lhs, e->pos);
          return expr(e->rhs, env);
        }
        ExprPtr b = expr(e->rhs, env);
        if (is_const(a) && is_const(b)) {
          return Expr::constant(op_info(e->binary_op).eval(a->value, b->value), e->pos);
        }
        if (a == e->lhs && b == e->rhs) return e;
        return Expr::binary(e->binary_op, a, b, e->pos);
      }
      case Expr::Kind::kVec2: {
        ExprPtr x = expr(e->lhs, env);
        ExprPtr y = expr(e->rhs, env);
        if (is_const(x) && is_const(y)) {
          return Expr::constant(Vec2{std::get<double>(x->value), std::get<double>(y->value)},
                                e->pos);
        }
        if (x == e->lhs && y == e->rhs) return e;
        return Expr::vec2(x, y, e->pos);
      }
    }
    return e;
  }

  Residual stmt(const StmtPtr& s, VarEnv& env) const {
    switch (s->kind) {
      case Stmt::Kind::kReturn: {
        ExprPtr v = expr(s->expr, env);
        return {{v == s->expr ? s : Stmt::make_return(v, s->pos)}, false};
      }
      case Stmt::Kind::kAssign: {
        ExprPtr v = expr(s->expr, env);
        if (opt_.inline_assignments || is_const(v)) {
          env[s->target] = v;
          return {};
        }
        env[s->target] = Expr::var(s->target);
        return {{v == s->expr ? s : Stmt::assign(s->target, v, s->pos)}, true};
      }
      case Stmt::Kind::kBlock: {
        Residual out;
        for (const auto& c : s->body) {
          Residual r = stmt(c, env);
          out.stmts.insert(out.stmts.end(), r.stmts.begin(), r.stmts.end());
          if (!r.falls_through) {
            out.falls_through = false;
            break;
          }
        }
        return {{Stmt::block(std::move(out.stmts), s->pos)}, out.falls_through};
      }
      case Stmt::Kind::kIf:
        return conditional(s, env);
    }
    return {};
  }

 private:
  // Splices a known branch into the enclosing statement list.
  Residual splice(const StmtPtr& branch, VarEnv& env) const {
    Residual r = stmt(branch, env);
    if (branch->kind == Stmt::Kind::kBlock && r.stmts.size() == 1) {
      return {r.stmts.front()->body, r.falls_through};
    }
    return r;
  }

  static bool empty(const Residual& r) {
    for (const auto& st : r.stmts) {
      if (st->kind != Stmt::Kind::kBlock || !st->body.empty()) return false;
    }
    return true;
  }

  static StmtPtr wrap(const StmtPtr& original, std::vector<StmtPtr> stmts) {
    if (original->kind == Stmt::Kind::kBlock) {
      // stmt() already returned the block itself.
      return stmts.front();
    }
    if (stmts.size() == 1) return stmts.front();
    return Stmt::block(std::move(stmts), original->pos);
  }

  Residual conditional(const StmtPtr& s, VarEnv& env) const {
    ExprPtr c = expr(s->expr, env);
    if (is_const(c)) {
      return splice(std::get<bool>(c->value) ? s->then_branch : s->else_branch, env);
    }
    VarEnv env_t = env;
    VarEnv env_e = env;
    Residual rt = stmt(s->then_branch, env_t);
    Residual re = stmt(s->else_branch, env_e);

    if (rt.falls_through && re.falls_through) {
      join(env_t, rt, s->then_branch, env_e, re, s->else_branch);
      env = std::move(env_t);
    } else if (rt.falls_through) {
      env = std::move(env_t);
    } else if (re.falls_through) {
      env = std::move(env_e);
    }
    bool falls = rt.falls_through || re.falls_through;
    if (opt_.inline_assignments && empty(rt) && empty(re)) return {{}, true};
    StmtPtr tb = wrap(s->then_branch, std::move(rt.stmts));
    StmtPtr eb = wrap(s->else_branch, std::move(re.stmts));
    if (c == s->expr && tb == s->then_branch && eb == s->else_branch) return {{s}, falls};
    return {{Stmt::make_if(c, tb, eb, s->pos)}, falls};
  }

  // Reconciles the variable environments of two branches that both fall
  // through. Known values that differ are written back to the variable at
  // the end of each branch, after which the variable is runtime-valued.
  void join(VarEnv& env_t, Residual& rt, const StmtPtr& then_src, VarEnv& env_e,
            Residual& re, const StmtPtr& else_src) const {
    std::set<std::string> names;
    for (const auto& [k, v] : env_t) names.insert(k);
    for (const auto& [k, v] : env_e) names.insert(k);
    auto slot = [](const VarEnv& env, const std::string& k) {
      auto it = env.find(k);
      return it == env.end() ? Expr::var(k) : it->second;
    };
    for (const auto& k : names) {
      ExprPtr a = slot(env_t, k);
      ExprPtr b = slot(env_e, k);
      if (structurally_equal(*a, *b)) continue;
      if (opt_.inline_assignments) {
        throw Error(ErrorKind::kNonAffine,
                    "var:" + k + " takes different values on the two sides of a "
                    "parameter-dependent conditional");
      }
      materialize(rt, then_src, k, a);
      materialize(re, else_src, k, b);
      env_t[k] = Expr::var(k);
    }
  }

  static void materialize(Residual& r, const StmtPtr& src, const std::string& k,
                          const ExprPtr& value) {
    if (value->kind == Expr::Kind::kVar && value->name == k) return;
    StmtPtr a = Stmt::assign(k, value);
    if (src->kind == Stmt::Kind::kBlock) {
      std::vector<StmtPtr> body = r.stmts.front()->body;
      body.push_back(a);
      r.stmts.front() = Stmt::block(std::move(body), src->pos);
    } else {
      r.stmts.push_back(a);
    }
  }

  const TransitionFn& fn_;
  const Bindings& bind_;
  const PevalOptions& opt_;
};

void require_bound(const TransitionFn& fn, const Bindings& b) {
  if (!b.state) throw Error(ErrorKind::kSignatureMismatch, "state is not bound");
  for (const auto& d : fn.sig.inputs) {
    if (!b.ins.count(d.name)) {
      throw Error(ErrorKind::kSignatureMismatch, "in:" + d.name + " is not bound");
    }
  }
  for (const auto& d : fn.sig.vars) {
    if (!b.vars.count(d.name)) {
      throw Error(ErrorKind::kSignatureMismatch, "var:" + d.name + " is not bound");
    }
  }
}

}  // namespace

StmtPtr peval(const TransitionFn& fn, const Bindings& bindings,
              const PevalOptions& options) {
  if (options.inline_assignments) require_bound(fn, bindings);
  Specializer sp(fn, bindings, options);
  VarEnv env = sp.initial_env();
  Residual r = sp.stmt(fn.body, env);
  return r.stmts.front();
}

ResidualFn make_residual(const TransitionFn& fn, const TraceElement& e,
                         const ParamMap& params) {
  return make_residual(fn, e, params, classify_params(fn));
}

ResidualFn make_residual(const TransitionFn& fn, const TraceElement& e,
                         const ParamMap& params,
                         const Classification& classification) {
  Bindings b;
  b.state = e.state;
  b.ins = e.ins;
  b.vars = e.vars;
  for (const auto& p : classification.unrep) {
    auto it = params.find(p);
    if (it == params.end()) {
      throw Error(ErrorKind::kSignatureMismatch, "params: missing " + p);
    }
    b.params[p] = it->second;
  }
  PevalOptions opt;
  opt.inline_assignments = true;
  ResidualFn r{peval(fn, b, opt), classification, e, params};
  check_residual(r);
  return r;
}

}  // namespace srtr
