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

#include "srtr/interp.hpp"

#include "srtr/error.hpp"

namespace srtr {
namespace {

template <class Map>
const auto& lookup(const Map* m, const std::string& name, const char* ns) {
  if (m) {
    auto it = m->find(name);
    if (it != m->end()) return it->second;
  }
  throw Error(ErrorKind::kUnboundIdentifier,
              std::string(ns) + ":" + name + " has no value");
}

}  // namespace

Value eval_expr(const Expr& e, const Env& env) {
  switch (e.kind) {
    case Expr::Kind::kConst:
      return e.value;
    case Expr::Kind::kState:
      if (!env.state) throw Error(ErrorKind::kUnboundIdentifier, "state has no value");
      return StateName{*env.state};
    case Expr::Kind::kVar:
      return lookup(env.vars, e.name, "var");
    case Expr::Kind::kInput:
      return lookup(env.ins, e.name, "in");
    case Expr::Kind::kParam:
      return lookup(env.params, e.name, "param");
    case Expr::Kind::kUnary:
      return op_info(e.unary_op).eval(eval_expr(*e.lhs, env));
    case Expr::Kind::kBinary: {
      Value a = eval_expr(*e.lhs, env);
      if (e.binary_op == BinaryOp::kAnd && !std::get<bool>(a)) return false;
      if (e.binary_op == BinaryOp::kOr && std::get<bool>(a)) return true;
      return op_info(e.binary_op).eval(a, eval_expr(*e.rhs, env));
    }
    case Expr::Kind::kVec2: {
      Value x = eval_expr(*e.lhs, env);
      Value y = eval_expr(*e.rhs, env);
      return Vec2{std::get<double>(x), std::get<double>(y)};
    }
  }
  return 0.0;
}

std::optional<std::string> exec_stmt(const Stmt& s, const Env& env,
                                     ValueMap& vars) {
  switch (s.kind) {
    case Stmt::Kind::kReturn:
      return std::get<StateName>(eval_expr(*s.expr, env)).name;
    case Stmt::Kind::kAssign:
      vars[s.target] = eval_expr(*s.expr, env);
      return std::nullopt;
    case Stmt::Kind::kIf:
      if (std::get<bool>(eval_expr(*s.expr, env))) {
        return exec_stmt(*s.then_branch, env, vars);
      }
      return exec_stmt(*s.else_branch, env, vars);
    case Stmt::Kind::kBlock:
      for (const auto& c : s.body) {
        if (auto r = exec_stmt(*c, env, vars)) return r;
      }
      return std::nullopt;
  }
  return std::nullopt;
}

std::string step_transition(const TransitionFn& fn, const std::string& state,
                            const ValueMap& ins, const ValueMap& vars,
                            const ParamMap& params) {
  ValueMap scratch = vars;
  for (const auto& l : fn.sig.locals) scratch[l.name] = zero_value(l.type);
  Env env{&state, &ins, &scratch, &params};
  auto next = exec_stmt(*fn.body, env, scratch);
  if (!next) {
    throw Error(ErrorKind::kMissingReturn, "transition fell off the end in state " + state);
  }
  return *next;
}

std::string step_transition(const TransitionFn& fn, const TraceElement& e,
                            const ParamMap& params) {
  return step_transition(fn, e.state, e.ins, e.vars, params);
}

Trace run_rsm(const Rsm& rsm, const InputSource& inputs, int max_steps) {
  Trace trace;
  std::string state = rsm.fn.sig.start;
  ValueMap vars = rsm.fn.sig.initial_vars();
  ValueMap outputs;
  for (int t = 0; t < max_steps; ++t) {
    auto ins = inputs(t, outputs);
    if (!ins) break;
    trace.push_back({t, *ins, vars, state});
    if (state == rsm.fn.sig.end) break;
    try {
      state = step_transition(rsm.fn, state, *ins, vars, rsm.params);
      if (rsm.emission) outputs = rsm.emission(state, *ins, vars);
    } catch (const Error& err) {
      throw Error(ErrorKind::kStepError, "step " + std::to_string(t) + ": " +
                                             std::string(err.kind_name()) + ": " +
                                             err.what());
    }
  }
  return trace;
}

Trace run_rsm(const Rsm& rsm, const std::vector<ValueMap>& inputs,
              int max_steps) {
  return run_rsm(
      rsm,
      [&](int t, const ValueMap&) -> std::optional<ValueMap> {
        if (t >= static_cast<int>(inputs.size())) return std::nullopt;
        return inputs[t];
      },
      max_steps);
}

std::vector<TraceMismatch> check_trace_consistency(const TransitionFn& fn,
                                                   const ParamMap& params,
                                                   const Trace& trace) {
  std::vector<TraceMismatch> out;
  for (std::size_t k = 0; k + 1 < trace.size(); ++k) {
    std::string next;
    try {
      next = step_transition(fn, trace[k], params);
    } catch (const Error& err) {
      next = "<" + std::string(err.kind_name()) + ">";
    }
    if (next != trace[k + 1].state) {
      out.push_back({trace[k].t, next, trace[k + 1].state});
    }
  }
  return out;
}

}  // namespace srtr
