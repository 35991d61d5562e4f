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
#include <atomic>
#include <exception>
#include <thread>

#include "srtr/error.hpp"
#include "srtr/ops.hpp"
#include "world.hpp"

namespace srtr {

using namespace sim;

namespace {

const std::vector<Declaration>& provided_inputs(ScenarioKind kind) {
  static const std::vector<Declaration> attacker = {
      {"ballLoc", Type::kVec2}, {"ballVel", Type::kVec2},  {"robotLoc", Type::kVec2},
      {"robotAng", Type::kNum}, {"targetAng", Type::kNum}, {"time", Type::kNum}};
  static const std::vector<Declaration> deflector = {
      {"ballLoc", Type::kVec2},  {"ballVel", Type::kVec2},       {"robotLoc", Type::kVec2},
      {"robotAng", Type::kNum},  {"targetAng", Type::kNum},      {"interceptLoc", Type::kVec2},
      {"time", Type::kNum}};
  static const std::vector<Declaration> docker = {
      {"robotLoc", Type::kVec2},    {"robotAng", Type::kNum},      {"wayLoc", Type::kVec2},
      {"chargerLoc", Type::kVec2},  {"dockHeading", Type::kNum},   {"wayBearing", Type::kNum},
      {"chargerBearing", Type::kNum}, {"time", Type::kNum}};
  switch (kind) {
    case ScenarioKind::kAttacker: return attacker;
    case ScenarioKind::kDeflector: return deflector;
    case ScenarioKind::kDocker: return docker;
  }
  return attacker;
}

void check_signature(const Signature& sig, ScenarioKind kind) {
  const auto& provided = provided_inputs(kind);
  for (const auto& in : sig.inputs) {
    auto it = std::find_if(provided.begin(), provided.end(),
                           [&](const Declaration& d) { return d.name == in.name; });
    if (it == provided.end()) {
      throw Error(ErrorKind::kSignatureMismatch,
                  "input '" + in.name + "' is not provided by the " + kind_name(kind) + " simulator");
    }
    if (it->type != in.type) {
      throw Error(ErrorKind::kSignatureMismatch,
                  "input '" + in.name + "' has type " + type_name(in.type) + " but the simulator provides " +
                      type_name(it->type));
    }
  }
}

void check_scenario(const Scenario& sc) {
  const Physics& p = sc.physics;
  const Field& f = sc.field;
  if (!(p.dt > 0)) throw Error(ErrorKind::kConfigError, "timestep must be positive");
  if (!(p.friction >= 0)) throw Error(ErrorKind::kConfigError, "friction must be non-negative");
  if (!(p.max_speed >= 0) || !(p.max_turn >= 0)) {
    throw Error(ErrorKind::kConfigError, "speed limits must be non-negative");
  }
  auto in_field = [&](Vec2 v) {
    return std::fabs(v.x) <= f.half_length && std::fabs(v.y) <= f.half_width;
  };
  if (!in_field(sc.robot)) throw Error(ErrorKind::kConfigError, "robot starts outside the field");
  if (sc.kind != ScenarioKind::kDocker && !in_field(sc.ball)) {
    throw Error(ErrorKind::kConfigError, "ball starts outside the field");
  }
  if (sc.kind == ScenarioKind::kDocker && !in_field(f.charger)) {
    throw Error(ErrorKind::kConfigError, "charger is outside the field");
  }
}

// Ball stays in play after the attacker stops; bounded so a slow ball
// cannot stall the run.
constexpr double kCoastSeconds = 10.0;

bool successful(Termination t) {
  return t == Termination::kGoalScored || t == Termination::kDeflected ||
         t == Termination::kDocked;
}

}  // namespace

Outcome simulate(const TransitionFn& fn, const ParamMap& params, const Scenario& sc,
                 int max_steps) {
  check_signature(fn.sig, sc.kind);
  check_scenario(sc);
  World world(sc);
  EmissionFn emit = controller(sc);
  Outcome out;
  std::string state = fn.sig.start;
  ValueMap vars = fn.sig.initial_vars();
  std::optional<Termination> event;
  for (int t = 0; t < max_steps && !event; ++t) {
    ValueMap ins = world.inputs(t);
    out.trace.push_back({t, ins, vars, state});
    if (state == fn.sig.end) break;
    try {
      state = step_transition(fn, state, ins, vars, params);
    } catch (const Error& err) {
      throw Error(ErrorKind::kStepError, "step " + std::to_string(t) + ": " +
                                             std::string(err.kind_name()) + ": " + err.what() +
                                             " [" + world.describe() + "]");
    }
    event = world.step(emit(state, ins, vars));
    if (!event && sc.kind == ScenarioKind::kDeflector && world.ball_dead()) {
      event = Termination::kTimeout;
    }
  }
  if (!event && state == fn.sig.end) {
    switch (sc.kind) {
      case ScenarioKind::kAttacker: {
        int budget = static_cast<int>(kCoastSeconds / sc.physics.dt);
        for (int k = 0; k < budget && !event && !world.ball_dead(); ++k) event = world.coast();
        break;
      }
      case ScenarioKind::kDeflector:
        break;
      case ScenarioKind::kDocker:
        if (world.docked()) event = Termination::kDocked;
        break;
    }
  }
  out.reason = event.value_or(Termination::kTimeout);
  out.success = successful(out.reason);
  return out;
}

SuccessRate success_rate(const TransitionFn& fn, const ParamMap& params,
                         const std::vector<Scenario>& scenarios, int max_steps) {
  if (scenarios.empty()) throw Error(ErrorKind::kEmptyScenarioSet, "no scenarios to evaluate");
  SuccessRate r;
  r.outcomes.resize(scenarios.size());
  std::vector<std::exception_ptr> errors(scenarios.size());
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i; (i = next++) < scenarios.size();) {
      try {
        r.outcomes[i] = simulate(fn, params, scenarios[i], max_steps);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  std::size_t n = std::min<std::size_t>(scenarios.size(),
                                        std::max(1u, std::thread::hardware_concurrency()));
  std::vector<std::thread> pool;
  for (std::size_t k = 1; k < n; ++k) pool.emplace_back(work);
  work();
  for (auto& t : pool) t.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  long ok = std::count_if(r.outcomes.begin(), r.outcomes.end(),
                          [](const Outcome& o) { return o.success; });
  r.rate = static_cast<double>(ok) / static_cast<double>(scenarios.size());
  return r;
}

GridSearchResult exhaustive_search(const TransitionFn& fn, const ParamMap& base,
                                   const ParamGrid& grid,
                                   const std::vector<LabeledElement>& labeled) {
  double points = 1;
  for (const auto& [name, values] : grid) {
    if (!base.count(name)) throw Error(ErrorKind::kKeyError, "grid axis '" + name + "' is not a parameter");
    if (values.empty()) throw Error(ErrorKind::kConfigError, "grid axis '" + name + "' is empty");
    points *= static_cast<double>(values.size());
  }
  if (points > 1e7) {
    throw Error(ErrorKind::kGridTooLarge,
                "grid has " + format_number(points) + " points (limit 1e7)");
  }
  auto count = [&](const ParamMap& p) {
    int n = 0;
    for (const auto& l : labeled) {
      try {
        if (step_transition(fn, l.element, p) == l.expected) ++n;
      } catch (const Error&) {
      }
    }
    return n;
  };
  GridSearchResult best;
  best.satisfied = -1;
  std::vector<std::size_t> idx(grid.size(), 0);
  ParamMap p = base;
  for (;;) {
    for (std::size_t a = 0; a < grid.size(); ++a) p[grid[a].first] = grid[a].second[idx[a]];
    int n = count(p);
    ++best.points;
    if (n > best.satisfied) {
      best.satisfied = n;
      best.params = p;
    }
    // Odometer increment, last axis fastest.
    std::size_t a = grid.size();
    while (a > 0 && ++idx[a - 1] == grid[a - 1].second.size()) idx[--a] = 0;
    if (a == 0) break;
  }
  return best;
}

namespace {

double num_at(const ValueMap& m, const char* k) { return std::get<double>(m.at(k)); }
Vec2 vec_at(const ValueMap& m, const char* k) { return std::get<Vec2>(m.at(k)); }

// Lined up behind a slow ball, close enough to kick.
bool attacker_ready(const ValueMap& ins) {
  Vec2 rel = vec_at(ins, "ballLoc") - vec_at(ins, "robotLoc");
  double ang = num_at(ins, "robotAng");
  double d = sim::norm(rel);
  double along = sim::dot(unit(ang), rel);
  double across = sim::dot(Vec2{std::sin(ang), -std::cos(ang)}, rel);
  double aim = angle_mod(num_at(ins, "targetAng") - ang);
  return along > 0 && d >= 0.12 && d <= 0.25 && std::fabs(across) < 0.05 &&
         std::fabs(aim) < 0.03 && sim::norm(vec_at(ins, "ballVel")) < 0.3;
}

// Ball on its way in and about to arrive.
bool deflector_ready(const ValueMap& ins) {
  Vec2 rel = vec_at(ins, "robotLoc") - vec_at(ins, "ballLoc");
  return sim::dot(rel, vec_at(ins, "ballVel")) > 0 && sim::norm(rel) <= 0.3;
}

// Pressed against the charger and facing along it.
bool docker_ready(const ValueMap& ins) {
  double d = sim::norm(vec_at(ins, "chargerLoc") - vec_at(ins, "robotLoc"));
  double err = angle_mod(num_at(ins, "dockHeading") - num_at(ins, "robotAng"));
  return d <= 0.125 && std::fabs(err) < 0.1;
}

}  // namespace

std::optional<Correction> label_failure(ScenarioKind kind, const Outcome& outcome) {
  if (outcome.success) return std::nullopt;
  const Trace& tr = outcome.trace;
  std::optional<Correction> best;
  double best_dist = -1;
  for (std::size_t k = 0; k + 1 < tr.size(); ++k) {
    const TraceElement& e = tr[k];
    const std::string& next = tr[k + 1].state;
    switch (kind) {
      case ScenarioKind::kAttacker:
        // The farthest ready position, so the label is not a lucky close call.
        if ((e.state == "GOTO" || e.state == "INTERCEPT") && next != "KICK" &&
            attacker_ready(e.ins)) {
          double d = sim::norm(vec_at(e.ins, "ballLoc") - vec_at(e.ins, "robotLoc"));
          if (d > best_dist) {
            best_dist = d;
            best = Correction{e.t, "KICK"};
          }
        }
        break;
      case ScenarioKind::kDeflector:
        if (e.state == "WAIT" && next != "KICK" && deflector_ready(e.ins)) {
          return Correction{e.t, "KICK"};
        }
        break;
      case ScenarioKind::kDocker:
        if (e.state != "END" && next != "END" && docker_ready(e.ins)) {
          return Correction{e.t, "END"};
        }
        break;
    }
  }
  return best;
}

LabeledTrace join_traces(const std::vector<LabeledTrace>& parts) {
  LabeledTrace out;
  for (const auto& part : parts) {
    if (part.trace.empty()) continue;
    int shift = static_cast<int>(out.trace.size()) - part.trace.front().t;
    for (TraceElement e : part.trace) {
      e.t += shift;
      out.trace.push_back(std::move(e));
    }
    for (Correction c : part.corrections) {
      c.t += shift;
      out.corrections.push_back(std::move(c));
    }
  }
  return out;
}

RepairRun repair_from_failures(ScenarioKind kind, const TransitionFn& fn, const ParamMap& params,
                               const std::vector<Scenario>& training, int max_corrections,
                               const RepairOptions& options) {
  SuccessRate sr = success_rate(fn, params, training, default_max_steps(kind));
  std::vector<LabeledTrace> parts;
  for (const auto& o : sr.outcomes) {
    if (static_cast<int>(parts.size()) >= max_corrections) break;
    if (auto c = label_failure(kind, o)) parts.push_back({o.trace, {*c}});
  }
  RepairRun run;
  run.labels = join_traces(parts);
  run.result = srtr::srtr(fn, params, run.labels.trace, run.labels.corrections, options);
  run.params = run.result.params;
  return run;
}

}  // namespace srtr
