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

// Desk-scale 2D simulators for the three example behaviours (attacker,
// deflector, docker), scenario generators and success-rate evaluation.
//
// The field is the rectangle |x| <= half_length, |y| <= half_width with the
// goal mouth on the line x = +half_length. Robots are discs; the attacker and
// deflector move holonomically, the docker is a differential drive. Kicks are
// instantaneous: a kick command with the ball touching the robot's front half
// sets the ball velocity to kick_speed along the robot heading. Outside a
// kick the ball passes through the attacker, and is stopped dead by the
// deflector.

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "srtr/interp.hpp"
#include "srtr/io.hpp"
#include "srtr/repair.hpp"

namespace srtr {

enum class ScenarioKind { kAttacker, kDeflector, kDocker };

std::string kind_name(ScenarioKind kind);
/// Throws ConfigError for an unknown name.
ScenarioKind parse_kind(const std::string& name);

struct Physics {
  double dt = 1.0 / 60.0;        // s
  double friction = 0.3;         // ball deceleration, m/s^2
  double max_speed = 2.0;        // m/s
  double max_turn = 4.0;         // rad/s
  double kick_speed = 4.0;       // m/s
  double robot_radius = 0.09;    // m
  double ball_radius = 0.0215;   // m
};

struct Field {
  double half_length = 4.5;
  double half_width = 3.0;
  double goal_half_width = 0.5;
  Vec2 charger;                 // docker only
  double charger_heading = 0.0; // heading a docked robot faces
  double charger_radius = 0.12; // closest approach of the robot centre
  double approach = 0.8;        // waypoint distance in front of the charger
};

struct Scenario {
  ScenarioKind kind = ScenarioKind::kAttacker;
  std::uint64_t seed = 0;
  Vec2 ball;
  Vec2 ball_vel;
  Vec2 robot;
  double robot_ang = 0.0;
  Field field;
  Physics physics;
};

enum class Termination { kGoalScored, kDeflected, kDocked, kTimeout, kOutOfBounds };

std::string termination_name(Termination t);

struct Outcome {
  bool success = false;
  Trace trace;
  Termination reason = Termination::kTimeout;
};

nlohmann::json scenario_to_json(const Scenario& sc);
/// Missing fields take their defaults; throws SchemaError on wrong types.
Scenario scenario_from_json(const nlohmann::json& j);

/// n scenarios drawn from a generator seeded with `seed`.
std::vector<Scenario> gen_scenarios(std::uint64_t seed, int n, ScenarioKind kind);

/// Grid mode: the moving object (ball for attacker and deflector, robot for
/// docker) is placed on a grid x grid lattice and given each of `angles`
/// uniformly spaced directions, for grid * grid * angles scenarios.
std::vector<Scenario> gen_heatmap_scenarios(ScenarioKind kind, int grid = 10,
                                            int angles = 12,
                                            std::uint64_t seed = 0);

int default_max_steps(ScenarioKind kind);

/// The bundled transition function for a kind, with well-tuned and
/// deliberately detuned parameter values.
const std::string& builtin_rsm_source(ScenarioKind kind);
TransitionFn builtin_rsm(ScenarioKind kind);
ParamMap nominal_params(ScenarioKind kind);
ParamMap baseline_params(ScenarioKind kind);

/// Closed-loop run. Each step the world produces the inputs, the transition
/// runs, the emission controller turns the new state into commands and the
/// world advances by one timestep. Throws SignatureMismatch if `fn` lacks
/// an input the kind provides, ConfigError for an invalid scenario, and
/// StepError (with the world state appended) when the transition fails.
Outcome simulate(const TransitionFn& fn, const ParamMap& params,
                 const Scenario& sc, int max_steps);

struct SuccessRate {
  double rate = 0.0;
  std::vector<Outcome> outcomes;  // same order as the scenarios
};

/// Runs the scenarios in parallel. Throws EmptyScenarioSet.
SuccessRate success_rate(const TransitionFn& fn, const ParamMap& params,
                         const std::vector<Scenario>& scenarios,
                         int max_steps);

/// A single labelled trace element, as used for grid search.
struct LabeledElement {
  TraceElement element;
  std::string expected;
};

using ParamGrid = std::vector<std::pair<std::string, std::vector<double>>>;

struct GridSearchResult {
  ParamMap params;
  int satisfied = 0;
  long points = 0;
};

/// Enumerates the grid (first axis outermost) over `base` and returns the
/// first point satisfying the most labels. Throws GridTooLarge above 1e7
/// points and KeyError for a grid axis that is not a parameter.
GridSearchResult exhaustive_search(const TransitionFn& fn, const ParamMap& base,
                                   const ParamGrid& grid,
                                   const std::vector<LabeledElement>& labeled);

/// What a human reviewing a failed run would mark: the step where the robot
/// should have moved on (kicked, or docked) but did not.
std::optional<Correction> label_failure(ScenarioKind kind, const Outcome& outcome);

/// Several traces joined into one, with timesteps renumbered consecutively
/// and each trace's corrections shifted to match.
struct LabeledTrace {
  Trace trace;
  std::vector<Correction> corrections;
};

LabeledTrace join_traces(const std::vector<LabeledTrace>& parts);

struct RepairRun {
  ParamMap params;
  LabeledTrace labels;
  RepairResult result;
};

/// Simulates `training` with `params`, labels up to `max_corrections`
/// failing runs and repairs from those corrections.
RepairRun repair_from_failures(ScenarioKind kind, const TransitionFn& fn,
                               const ParamMap& params,
                               const std::vector<Scenario>& training,
                               int max_corrections,
                               const RepairOptions& options = {});

}  // namespace srtr
