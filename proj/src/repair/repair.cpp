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

#include "srtr/repair.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <future>
#include <thread>

#include "srtr/dsl.hpp"
#include "srtr/error.hpp"

namespace srtr {
namespace {

using Dnf = std::vector<Conjunction>;

Dnf dnf_true() { return {Conjunction{}}; }

Dnf dnf_or(Dnf a, const Dnf& b) {
  a.insert(a.end(), b.begin(), b.end());
  return a;
}

Dnf dnf_and(const Dnf& a, const Dnf& b) {
  Dnf out;
  out.reserve(a.size() * b.size());
  for (const auto& x : a) {
    for (const auto& y : b) {
      Conjunction c = x;
      c.insert(c.end(), y.begin(), y.end());
      out.push_back(std::move(c));
    }
  }
  return out;
}

bool all_zero(const std::vector<double>& v) {
  return std::all_of(v.begin(), v.end(), [](double x) { return x == 0.0; });
}

double eval_affine(const AffineNum& a, const std::vector<double>& delta) {
  double v = a.c0;
  for (std::size_t j = 0; j < a.coef.size(); ++j) v += a.coef[j] * delta[j];
  return v;
}

class FormulaBuilder {
 public:
  FormulaBuilder(const ResidualFn& r, std::string expected)
      : r_(r), expected_(std::move(expected)) {}

  Dnf run() {
    walk(*r_.body, dnf_true());
    return std::move(found_);
  }

 private:
  AffineNum side(const ExprPtr& e) const {
    SymExpr s = symbolize(e, r_.classification.rep, r_.params);
    std::size_t n = r_.classification.rep.size();
    if (auto* v = std::get_if<Value>(&s)) {
      if (auto* d = std::get_if<double>(v)) return {*d, std::vector<double>(n, 0.0)};
    }
    if (auto* a = std::get_if<AffineNum>(&s)) return *a;
    throw Error(ErrorKind::kNonAffine,
                "comparison operand is not affine: " + print_expr(*e));
  }

  Dnf atom(const ExprPtr& lhs, RelOp op, const ExprPtr& rhs) const {
    AffineNum a = side(lhs);
    AffineNum b = side(rhs);
    if (a.is_constant() && b.is_constant()) {
      return compare(a.c0, op, b.c0) ? dnf_true() : Dnf{};
    }
    if (op == RelOp::kNe) {
      return {Conjunction{{a, RelOp::kLt, b}}, Conjunction{{a, RelOp::kGt, b}}};
    }
    return {Conjunction{{std::move(a), op, std::move(b)}}};
  }

  Dnf guard(const ExprPtr& e, bool positive) const {
    if (e->kind == Expr::Kind::kConst) {
      const bool* b = std::get_if<bool>(&e->value);
      if (!b) throw Error(ErrorKind::kNonAffine, "non-boolean guard " + print_expr(*e));
      return *b == positive ? dnf_true() : Dnf{};
    }
    if (e->kind == Expr::Kind::kBinary) {
      const BinaryOpInfo& info = op_info(e->binary_op);
      if (e->binary_op == BinaryOp::kAnd || e->binary_op == BinaryOp::kOr) {
        Dnf l = guard(e->lhs, positive);
        Dnf r = guard(e->rhs, positive);
        bool conj = (e->binary_op == BinaryOp::kAnd) == positive;
        return conj ? dnf_and(l, r) : dnf_or(std::move(l), r);
      }
      if (info.relop) {
        RelOp op = positive ? *info.relop : negate(*info.relop);
        return atom(e->lhs, op, e->rhs);
      }
    }
    throw Error(ErrorKind::kNonAffine, "unsupported guard " + print_expr(*e));
  }

  // Returns the formula under which control falls through `s`.
  Dnf walk(const Stmt& s, Dnf ctx) {
    if (ctx.empty()) return ctx;
    switch (s.kind) {
      case Stmt::Kind::kReturn: {
        const auto* st = std::get_if<StateName>(&s.expr->value);
        if (s.expr->kind != Expr::Kind::kConst || !st) {
          throw Error(ErrorKind::kNonAffine, "residual return is not a state constant");
        }
        if (st->name == expected_) found_.insert(found_.end(), ctx.begin(), ctx.end());
        return {};
      }
      case Stmt::Kind::kBlock:
        for (const auto& c : s.body) ctx = walk(*c, std::move(ctx));
        return ctx;
      case Stmt::Kind::kIf: {
        Dnf then_ctx = dnf_and(ctx, guard(s.expr, true));
        Dnf else_ctx = dnf_and(ctx, guard(s.expr, false));
        Dnf out = walk(*s.then_branch, std::move(then_ctx));
        Dnf rest = s.else_branch ? walk(*s.else_branch, std::move(else_ctx)) : else_ctx;
        return dnf_or(std::move(out), rest);
      }
      case Stmt::Kind::kAssign:
        throw Error(ErrorKind::kNonAffine, "assignment left in residual");
    }
    return ctx;
  }

  const ResidualFn& r_;
  std::string expected_;
  Dnf found_;
};

const TraceElement& element_at(const Trace& trace, int t) {
  if (trace.empty()) {
    throw Error(ErrorKind::kIndexError, "correction at t=" + std::to_string(t) + " but the trace is empty");
  }
  long i = static_cast<long>(t) - trace.front().t;
  if (i < 0 || i >= static_cast<long>(trace.size())) {
    throw Error(ErrorKind::kIndexError,
                "correction at t=" + std::to_string(t) + " is outside the trace (t=" +
                    std::to_string(trace.front().t) + ".." + std::to_string(trace.back().t) + ")");
  }
  return trace[static_cast<std::size_t>(i)];
}

void check_state(const Signature& sig, const std::string& s) {
  if (!sig.has_state(s)) throw Error(ErrorKind::kUnknownState, "unknown state '" + s + "'");
}

void append_row(std::vector<DeltaRow>& rows, std::vector<double> coef, double rhs, bool eq) {
  rows.push_back({std::move(coef), rhs, eq});
}

}  // namespace

bool PathFormula::is_true() const {
  return std::any_of(paths.begin(), paths.end(), [](const Conjunction& c) { return c.empty(); });
}

bool holds(const PathFormula& f, const std::vector<double>& delta) {
  for (const auto& c : f.paths) {
    bool ok = true;
    for (const auto& a : c) {
      if (!compare(eval_affine(a.lhs, delta), a.op, eval_affine(a.rhs, delta))) {
        ok = false;
        break;
      }
    }
    if (ok) return true;
  }
  return false;
}

std::string format_formula(const PathFormula& f) {
  if (f.paths.empty()) return "false";
  auto affine = [&](const AffineNum& a) {
    std::string s = format_number(a.c0);
    for (std::size_t j = 0; j < a.coef.size(); ++j) {
      if (a.coef[j] == 0) continue;
      s += (a.coef[j] < 0 ? " - " : " + ");
      double k = std::fabs(a.coef[j]);
      if (k != 1) s += format_number(k) + "*";
      s += "d:" + f.rep[j];
    }
    return s;
  };
  std::string out;
  for (std::size_t i = 0; i < f.paths.size(); ++i) {
    if (i) out += " || ";
    if (f.paths[i].empty()) {
      out += "true";
      continue;
    }
    out += "(";
    for (std::size_t k = 0; k < f.paths[i].size(); ++k) {
      const auto& a = f.paths[i][k];
      if (k) out += " && ";
      out += affine(a.lhs) + " " + std::string(relop_spelling(a.op)) + " " + affine(a.rhs);
    }
    out += ")";
  }
  return out;
}

PathFormula correct_one(const TransitionFn& fn, const TraceElement& e,
                        const ParamMap& params, const Correction& c) {
  return correct_one(fn, e, params, c, classify_params(fn));
}

PathFormula correct_one(const TransitionFn& fn, const TraceElement& e,
                        const ParamMap& params, const Correction& c,
                        const Classification& classification) {
  check_state(fn.sig, c.expected);
  ResidualFn r = make_residual(fn, e, params, classification);
  PathFormula f;
  f.rep = classification.rep;
  f.paths = FormulaBuilder(r, c.expected).run();
  return f;
}

RepairProblem correct_all(const TransitionFn& fn, const ParamMap& params,
                          const Trace& trace,
                          const std::vector<Correction>& corrections, double penalty) {
  Classification cls = classify_params(fn);
  std::vector<const TraceElement*> elems;
  for (const auto& c : corrections) {
    check_state(fn.sig, c.expected);
    elems.push_back(&element_at(trace, c.t));
  }

  RepairProblem p;
  p.rep = cls.rep;
  p.penalty = penalty;
  p.clauses.resize(corrections.size());
  auto work = [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      p.clauses[i] = correct_one(fn, *elems[i], params, corrections[i], cls);
    }
  };
  std::size_t n = corrections.size();
  std::size_t workers = std::min<std::size_t>(std::max(1u, std::thread::hardware_concurrency()), n / 8);
  if (workers <= 1) {
    work(0, n);
    return p;
  }
  std::vector<std::future<void>> jobs;
  std::size_t chunk = (n + workers - 1) / workers;
  for (std::size_t b = 0; b < n; b += chunk) {
    jobs.push_back(std::async(std::launch::async, work, b, std::min(n, b + chunk)));
  }
  for (auto& j : jobs) j.get();
  return p;
}

std::vector<DeltaRow> lower_atom(const DeltaAtom& atom, const std::vector<double>& point,
                                 double epsilon) {
  const AffineNum* a = &atom.lhs;
  const AffineNum* b = &atom.rhs;
  RelOp op = atom.op;
  if (op == RelOp::kGt || op == RelOp::kGe) {
    std::swap(a, b);
    op = flip(op);
  }
  std::size_t n = std::max(a->coef.size(), b->coef.size());
  std::vector<double> coef(n, 0.0);
  for (std::size_t j = 0; j < n; ++j) {
    coef[j] = (j < a->coef.size() ? a->coef[j] : 0.0) - (j < b->coef.size() ? b->coef[j] : 0.0);
  }
  // a op b  <=>  coef . delta  op  slack
  double slack = b->c0 - a->c0;
  bool holds_at_zero = compare(a->c0, op, b->c0);
  std::vector<DeltaRow> rows;
  if (all_zero(coef)) {
    if (!holds_at_zero) append_row(rows, coef, -1.0, false);
    return rows;
  }
  switch (op) {
    case RelOp::kEq:
      append_row(rows, coef, slack, true);
      return rows;
    case RelOp::kNe:
      throw Error(ErrorKind::kNonAffine, "`!=` over repairable parameters");
    default:
      break;
  }
  double margin;
  if (op == RelOp::kLt) {
    margin = epsilon;
  } else {
    double scale = 1 + std::fabs(a->c0) + std::fabs(b->c0);
    for (std::size_t j = 0; j < n; ++j) {
      scale += std::fabs(coef[j]) * (j < point.size() ? std::fabs(point[j]) : 0.0);
    }
    margin = 1e-10 * scale;
  }
  if (holds_at_zero) margin = std::min(margin, slack);
  append_row(rows, coef, slack - margin, false);
  return rows;
}

MaxSmtProblem lower_problem(const RepairProblem& problem, const ParamMap& params,
                            const RepairOptions& options) {
  if (!(options.epsilon > 0) || !std::isfinite(options.epsilon)) {
    throw Error(ErrorKind::kConfigError, "epsilon must be a positive finite number");
  }
  if (!(options.penalty > 0) || !std::isfinite(options.penalty)) {
    throw Error(ErrorKind::kConfigError, "penalty must be a positive finite number");
  }
  MaxSmtProblem mp;
  mp.n = problem.rep.size();
  mp.penalty = options.penalty;
  std::vector<double> point;
  for (const auto& name : problem.rep) {
    auto it = params.find(name);
    point.push_back(it == params.end() ? 0.0 : it->second);
  }
  for (const auto& [name, range] : options.bounds) {
    auto it = std::find(problem.rep.begin(), problem.rep.end(), name);
    if (it == problem.rep.end()) {
      throw Error(ErrorKind::kKeyError,
                  params.count(name) ? "bound on unrepairable parameter '" + name + "'"
                                     : "bound on unknown parameter '" + name + "'");
    }
    if (range.first > 0 || range.second < 0 || range.first > range.second) {
      throw Error(ErrorKind::kConfigError, "bounds for '" + name + "' must contain zero");
    }
    if (mp.lower.empty()) {
      mp.lower.assign(mp.n, -kInf);
      mp.upper.assign(mp.n, kInf);
    }
    auto j = static_cast<std::size_t>(it - problem.rep.begin());
    mp.lower[j] = range.first;
    mp.upper[j] = range.second;
  }
  for (const auto& f : problem.clauses) {
    SoftClause clause;
    for (const auto& conj : f.paths) {
      std::vector<DeltaRow> rows;
      for (const auto& a : conj) {
        auto r = lower_atom(a, point, options.epsilon);
        rows.insert(rows.end(), r.begin(), r.end());
      }
      clause.paths.push_back(std::move(rows));
    }
    mp.clauses.push_back(std::move(clause));
  }
  return mp;
}

RepairResult srtr(const TransitionFn& fn, const ParamMap& params, const Trace& trace,
                  const std::vector<Correction>& corrections,
                  const RepairOptions& options) {
  RepairProblem problem = correct_all(fn, params, trace, corrections, options.penalty);
  MaxSmtProblem mp = lower_problem(problem, params, options);

  MaxSmtResult solved;
  if (options.backend == Backend::kInternal) {
    solved = solve_maxsmt(mp);
  } else {
    auto start = std::chrono::steady_clock::now();
    std::string out = run_external_solver(options.solver_command,
                                          emit_smtlib(mp, problem.rep, options.encoding));
    solved = result_from_model(parse_smt_model(out), mp, problem.rep);
    solved.stats.millis = std::chrono::duration<double, std::milli>(
                              std::chrono::steady_clock::now() - start)
                              .count();
  }

  RepairResult r;
  for (std::size_t j = 0; j < problem.rep.size(); ++j) {
    // Normalise -0.0 so reports never print a negative zero.
    r.deltas[problem.rep[j]] = solved.delta[j] == 0.0 ? 0.0 : solved.delta[j];
  }
  Classification cls{problem.rep, {}};
  r.params = apply_deltas(params, r.deltas, cls);
  r.solver_satisfied = solved.satisfied;
  r.objective = solved.objective;
  r.stats = solved.stats;
  for (const auto& c : corrections) {
    bool ok;
    try {
      ok = step_transition(fn, element_at(trace, c.t), r.params) == c.expected;
    } catch (const Error&) {
      ok = false;
    }
    r.satisfied.push_back(ok);
  }
  return r;
}

ParamMap apply_deltas(const ParamMap& params, const DeltaMap& deltas,
                      const Classification& classification) {
  ParamMap out = params;
  for (const auto& [name, d] : deltas) {
    auto it = out.find(name);
    if (it == out.end()) throw Error(ErrorKind::kKeyError, "unknown parameter '" + name + "'");
    if (!classification.is_rep(name)) {
      throw Error(ErrorKind::kKeyError, "parameter '" + name + "' is not repairable");
    }
    it->second += d;
  }
  return out;
}

ParamMap apply_deltas(const TransitionFn& fn, const ParamMap& params,
                      const DeltaMap& deltas) {
  return apply_deltas(params, deltas, classify_params(fn));
}

}  // namespace srtr
