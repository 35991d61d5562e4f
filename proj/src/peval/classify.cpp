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
#include <set>

#include "srtr/dsl.hpp"
#include "srtr/peval.hpp"

namespace srtr {
namespace {

using ParamSet = std::set<std::string>;

void visit_stmts(const Stmt& s, const std::function<void(const Stmt&)>& f) {
  f(s);
  switch (s.kind) {
    case Stmt::Kind::kIf:
      visit_stmts(*s.then_branch, f);
      visit_stmts(*s.else_branch, f);
      break;
    case Stmt::Kind::kBlock:
      for (const auto& c : s.body) visit_stmts(*c, f);
      break;
    default:
      break;
  }
}

bool contains_assignment(const Stmt& s) {
  bool found = false;
  visit_stmts(s, [&](const Stmt& x) { found |= x.kind == Stmt::Kind::kAssign; });
  return found;
}

class Analysis {
 public:
  Analysis(const TransitionFn& fn, const ParamSet& rep) : fn_(fn), rep_(rep) {
    // Variable taint, iterated to a fixpoint since assignments may feed each
    // other in any order.
    bool changed = true;
    while (changed) {
      changed = false;
      visit_stmts(*fn_.body, [&](const Stmt& s) {
        if (s.kind != Stmt::Kind::kAssign) return;
        ParamSet& dst = var_deps_[s.target];
        std::size_t before = dst.size();
        ParamSet d = deps(*s.expr);
        dst.insert(d.begin(), d.end());
        changed |= dst.size() != before;
      });
    }
  }

  ParamSet deps(const Expr& e) const {
    ParamSet out;
    collect(e, out);
    return out;
  }

  // Params that must become unrepairable because of `e`, or empty.
  ParamSet nonlinear_violation(const Expr& e) const {
    ParamSet out;
    walk(e, [&](const Expr& x) {
      if (!out.empty() || x.kind != Expr::Kind::kUnary) return;
      if (op_info(x.unary_op).linearity == Linearity::kNonlinear) out = deps(*x.lhs);
    });
    return out;
  }

  ParamSet structural_violation(const Expr& e) const {
    ParamSet out;
    walk(e, [&](const Expr& x) {
      if (!out.empty()) return;
      if (x.kind == Expr::Kind::kUnary &&
          op_info(x.unary_op).linearity == Linearity::kNonlinear) {
        out = deps(*x.lhs);
        return;
      }
      if (x.kind != Expr::Kind::kBinary) return;
      const auto& info = op_info(x.binary_op);
      ParamSet a = deps(*x.lhs);
      ParamSet b = deps(*x.rhs);
      switch (info.linearity) {
        case Linearity::kScaling:
          if (!a.empty() && !b.empty()) out = a.size() < b.size() ? a : b;
          break;
        case Linearity::kDivision:
          out = b;
          break;
        case Linearity::kRelational:
          if (info.relop == RelOp::kNe) {
            out = a;
            out.insert(b.begin(), b.end());
          }
          break;
        default:
          break;
      }
    });
    return out;
  }

  ParamSet guard_violation(const Stmt& s) const {
    if (s.kind != Stmt::Kind::kIf) return {};
    auto escapes = [](const Stmt& b) {
      return !always_returns(b) && contains_assignment(b);
    };
    if (escapes(*s.then_branch) || escapes(*s.else_branch)) return deps(*s.expr);
    return {};
  }

 private:
  static void walk(const Expr& e, const std::function<void(const Expr&)>& f) {
    f(e);
    if (e.lhs) walk(*e.lhs, f);
    if (e.rhs) walk(*e.rhs, f);
  }

  void collect(const Expr& e, ParamSet& out) const {
    switch (e.kind) {
      case Expr::Kind::kParam:
        if (rep_.count(e.name)) out.insert(e.name);
        return;
      case Expr::Kind::kVar: {
        auto it = var_deps_.find(e.name);
        if (it != var_deps_.end()) out.insert(it->second.begin(), it->second.end());
        return;
      }
      default:
        if (e.lhs) collect(*e.lhs, out);
        if (e.rhs) collect(*e.rhs, out);
    }
  }

  const TransitionFn& fn_;
  const ParamSet& rep_;
  std::map<std::string, ParamSet> var_deps_;
};

// First violation found anywhere in the body under the current Rep set.
ParamSet find_violation(const TransitionFn& fn, const ParamSet& rep,
                        bool nonlinear_only) {
  Analysis a(fn, rep);
  ParamSet out;
  visit_stmts(*fn.body, [&](const Stmt& s) {
    if (!out.empty()) return;
    if (s.expr) {
      out = nonlinear_only ? a.nonlinear_violation(*s.expr)
                           : a.structural_violation(*s.expr);
    }
    if (out.empty() && !nonlinear_only) out = a.guard_violation(s);
  });
  return out;
}

}  // namespace

bool Classification::is_rep(const std::string& p) const {
  return std::find(rep.begin(), rep.end(), p) != rep.end();
}

Classification classify_params(const TransitionFn& fn) {
  ParamSet rep(fn.sig.params.begin(), fn.sig.params.end());
  for (bool nonlinear_only : {true, false}) {
    for (;;) {
      ParamSet bad = find_violation(fn, rep, nonlinear_only);
      if (bad.empty()) break;
      for (const auto& p : bad) rep.erase(p);
    }
  }
  Classification c;
  for (const auto& p : fn.sig.params) {
    (rep.count(p) ? c.rep : c.unrep).push_back(p);
  }
  return c;
}

}  // namespace srtr
