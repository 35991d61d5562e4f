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

#include <array>
#include <numbers>

#include "srtr/dsl.hpp"
#include "srtr/error.hpp"
#include "world.hpp"

namespace srtr {
namespace sim {

extern const std::string kAttackerRsm;
extern const std::string kDeflectorRsm;
extern const std::string kDockerRsm;

namespace {

constexpr double kPi = std::numbers::pi;

// splitmix64; scenario i depends only on (seed, i).
class Rng {
 public:
  explicit Rng(std::uint64_t s) : s_(s) {}
  std::uint64_t next() {
    std::uint64_t z = (s_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }
  double uniform(double lo, double hi) {
    return lo + (hi - lo) * static_cast<double>(next() >> 11) * 0x1.0p-53;
  }

 private:
  std::uint64_t s_;
};

bool inside(const Field& f, Vec2 p, double margin) {
  return std::fabs(p.x) <= f.half_length - margin && std::fabs(p.y) <= f.half_width - margin;
}

void attacker(Scenario& sc, Rng& r) {
  sc.ball = {r.uniform(-3.5, 3.5), r.uniform(-2.3, 2.3)};
  sc.ball_vel = r.uniform(0.0, 0.6) * unit(r.uniform(-kPi, kPi));
  sc.robot = {r.uniform(-4.0, 4.0), r.uniform(-2.7, 2.7)};
  sc.robot_ang = r.uniform(-kPi, kPi);
}

// A pass toward the robot from somewhere in front of it.
void deflector(Scenario& sc, Rng& r) {
  for (;;) {
    sc.robot = {r.uniform(0.5, 3.0), r.uniform(-2.0, 2.0)};
    double to_goal = bearing(goal(sc.field) - sc.robot);
    sc.robot_ang = to_goal + r.uniform(-1.0, 1.0);
    double side = r.uniform(0, 1) < 0.5 ? -1.0 : 1.0;
    double from = to_goal + side * r.uniform(0.35, 1.4);
    sc.ball = sc.robot + r.uniform(2.0, 3.0) * unit(from);
    Vec2 aim = sc.robot + r.uniform(-0.4, 0.4) * unit(from + kPi / 2);
    sc.ball_vel = r.uniform(1.5, 2.5) * unit(bearing(aim - sc.ball));
    if (inside(sc.field, sc.ball, 0.2)) return;
  }
}

// Robot somewhere on the open side of the charger.
void docker(Scenario& sc, Rng& r) {
  Field& f = sc.field;
  for (;;) {
    f.charger = {r.uniform(-3.0, 3.0), r.uniform(-2.0, 2.0)};
    f.charger_heading = r.uniform(-kPi, kPi);
    Vec2 way = f.charger - f.approach * unit(f.charger_heading);
    sc.robot = f.charger + r.uniform(1.0, 2.5) * unit(f.charger_heading + kPi + r.uniform(-1.6, 1.6));
    sc.robot_ang = r.uniform(-kPi, kPi);
    if (inside(f, way, 0.3) && inside(f, sc.robot, 0.3)) return;
  }
}

std::array<double, 2> pair(const nlohmann::json& j, const char* key, Vec2 def) {
  if (!j.contains(key)) return {def.x, def.y};
  const auto& v = j.at(key);
  if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number()) {
    throw Error(ErrorKind::kSchemaError, std::string("scenario field '") + key + "' must be [x, y]");
  }
  return {v[0].get<double>(), v[1].get<double>()};
}

double number(const nlohmann::json& j, const char* key, double def) {
  if (!j.contains(key)) return def;
  if (!j.at(key).is_number()) {
    throw Error(ErrorKind::kSchemaError, std::string("scenario field '") + key + "' must be a number");
  }
  return j.at(key).get<double>();
}

Vec2 vec(const nlohmann::json& j, const char* key, Vec2 def) {
  auto p = pair(j, key, def);
  return {p[0], p[1]};
}

}  // namespace
}  // namespace sim

using namespace sim;

std::string kind_name(ScenarioKind kind) {
  switch (kind) {
    case ScenarioKind::kAttacker: return "attacker";
    case ScenarioKind::kDeflector: return "deflector";
    case ScenarioKind::kDocker: return "docker";
  }
  return "?";
}

ScenarioKind parse_kind(const std::string& name) {
  for (auto k : {ScenarioKind::kAttacker, ScenarioKind::kDeflector, ScenarioKind::kDocker}) {
    if (kind_name(k) == name) return k;
  }
  throw Error(ErrorKind::kConfigError,
              "unknown scenario kind '" + name + "' (expected attacker, deflector or docker)");
}

std::string termination_name(Termination t) {
  switch (t) {
    case Termination::kGoalScored: return "GoalScored";
    case Termination::kDeflected: return "Deflected";
    case Termination::kDocked: return "Docked";
    case Termination::kTimeout: return "Timeout";
    case Termination::kOutOfBounds: return "OutOfBounds";
  }
  return "?";
}

nlohmann::json scenario_to_json(const Scenario& sc) {
  auto v = [](Vec2 p) { return nlohmann::json::array({p.x, p.y}); };
  const Field& f = sc.field;
  const Physics& p = sc.physics;
  return {{"kind", kind_name(sc.kind)},
          {"seed", sc.seed},
          {"ball", v(sc.ball)},
          {"ballVel", v(sc.ball_vel)},
          {"robot", v(sc.robot)},
          {"robotAng", sc.robot_ang},
          {"field",
           {{"halfLength", f.half_length},
            {"halfWidth", f.half_width},
            {"goalHalfWidth", f.goal_half_width},
            {"charger", v(f.charger)},
            {"chargerHeading", f.charger_heading},
            {"chargerRadius", f.charger_radius},
            {"approach", f.approach}}},
          {"physics",
           {{"dt", p.dt},
            {"friction", p.friction},
            {"maxSpeed", p.max_speed},
            {"maxTurn", p.max_turn},
            {"kickSpeed", p.kick_speed},
            {"robotRadius", p.robot_radius},
            {"ballRadius", p.ball_radius}}}};
}

Scenario scenario_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw Error(ErrorKind::kSchemaError, "scenario must be a JSON object");
  Scenario sc;
  if (j.contains("kind")) {
    if (!j.at("kind").is_string()) throw Error(ErrorKind::kSchemaError, "scenario 'kind' must be a string");
    sc.kind = parse_kind(j.at("kind").get<std::string>());
  }
  if (j.contains("seed")) {
    if (!j.at("seed").is_number_unsigned()) {
      throw Error(ErrorKind::kSchemaError, "scenario 'seed' must be a non-negative integer");
    }
    sc.seed = j.at("seed").get<std::uint64_t>();
  }
  sc.ball = vec(j, "ball", sc.ball);
  sc.ball_vel = vec(j, "ballVel", sc.ball_vel);
  sc.robot = vec(j, "robot", sc.robot);
  sc.robot_ang = number(j, "robotAng", sc.robot_ang);
  if (j.contains("field")) {
    const auto& f = j.at("field");
    Field& o = sc.field;
    o.half_length = number(f, "halfLength", o.half_length);
    o.half_width = number(f, "halfWidth", o.half_width);
    o.goal_half_width = number(f, "goalHalfWidth", o.goal_half_width);
    o.charger = vec(f, "charger", o.charger);
    o.charger_heading = number(f, "chargerHeading", o.charger_heading);
    o.charger_radius = number(f, "chargerRadius", o.charger_radius);
    o.approach = number(f, "approach", o.approach);
  }
  if (j.contains("physics")) {
    const auto& p = j.at("physics");
    Physics& o = sc.physics;
    o.dt = number(p, "dt", o.dt);
    o.friction = number(p, "friction", o.friction);
    o.max_speed = number(p, "maxSpeed", o.max_speed);
    o.max_turn = number(p, "maxTurn", o.max_turn);
    o.kick_speed = number(p, "kickSpeed", o.kick_speed);
    o.robot_radius = number(p, "robotRadius", o.robot_radius);
    o.ball_radius = number(p, "ballRadius", o.ball_radius);
  }
  return sc;
}

std::vector<Scenario> gen_scenarios(std::uint64_t seed, int n, ScenarioKind kind) {
  std::vector<Scenario> out;
  for (int i = 0; i < n; ++i) {
    Rng r(seed * 0x100000001b3ULL + static_cast<std::uint64_t>(i));
    Scenario sc;
    sc.kind = kind;
    sc.seed = r.next();
    switch (kind) {
      case ScenarioKind::kAttacker: attacker(sc, r); break;
      case ScenarioKind::kDeflector: deflector(sc, r); break;
      case ScenarioKind::kDocker: docker(sc, r); break;
    }
    out.push_back(sc);
  }
  return out;
}

std::vector<Scenario> gen_heatmap_scenarios(ScenarioKind kind, int grid, int angles,
                                            std::uint64_t seed) {
  if (grid < 1 || angles < 1) {
    throw Error(ErrorKind::kConfigError, "heat-map grid and angle counts must be positive");
  }
  auto lerp = [grid](double lo, double hi, int i) {
    return grid == 1 ? (lo + hi) / 2 : lo + (hi - lo) * i / (grid - 1);
  };
  std::vector<Scenario> out;
  for (int ix = 0; ix < grid; ++ix) {
    for (int iy = 0; iy < grid; ++iy) {
      for (int k = 0; k < angles; ++k) {
        double ang = -kPi + 2 * kPi * k / angles;
        Scenario sc;
        sc.kind = kind;
        sc.seed = seed;
        switch (kind) {
          case ScenarioKind::kAttacker:
            sc.ball = {lerp(-3.5, 3.5, ix), lerp(-2.3, 2.3, iy)};
            sc.ball_vel = 0.5 * unit(ang);
            sc.robot = {-4.0, 0.0};
            break;
          case ScenarioKind::kDeflector:
            sc.ball = {lerp(-1.0, 3.5, ix), lerp(-2.5, 2.5, iy)};
            sc.robot = {2.5, 0.0};
            sc.robot_ang = bearing(goal(sc.field) - sc.robot);
            sc.ball_vel = 2.0 * unit(bearing(sc.robot - sc.ball) + 0.1 * std::sin(ang));
            break;
          case ScenarioKind::kDocker:
            sc.robot = {lerp(-4.0, 4.0, ix), lerp(-2.5, 2.5, iy)};
            sc.robot_ang = ang;
            sc.field.charger = {2.0, 0.0};
            break;
        }
        out.push_back(sc);
      }
    }
  }
  return out;
}

int default_max_steps(ScenarioKind kind) {
  switch (kind) {
    case ScenarioKind::kAttacker: return 900;
    case ScenarioKind::kDeflector: return 300;
    case ScenarioKind::kDocker: return 2400;
  }
  return 0;
}

const std::string& builtin_rsm_source(ScenarioKind kind) {
  switch (kind) {
    case ScenarioKind::kAttacker: return kAttackerRsm;
    case ScenarioKind::kDeflector: return kDeflectorRsm;
    case ScenarioKind::kDocker: return kDockerRsm;
  }
  return kAttackerRsm;
}

TransitionFn builtin_rsm(ScenarioKind kind) { return parse_rsm(builtin_rsm_source(kind)); }

ParamMap nominal_params(ScenarioKind kind) {
  switch (kind) {
    case ScenarioKind::kAttacker:
      return {{"aimMargin", 0.04},      {"maxDist", 0.3},         {"viewAng", kPi / 6},
              {"kickTimeout", 0.5},     {"maxKickSpeed", 0.5},    {"interceptSpeed", 0.8},
              {"settleSpeed", 0.4},     {"abortDist", 0.6}};
    case ScenarioKind::kDeflector:
      return {{"setupTol", 0.1}, {"alignTol", 0.1}, {"kickDist", 0.3},
              {"resetTol", 0.3}, {"kickTimeout", 0.5}};
    case ScenarioKind::kDocker:
      return {{"wayTol", 0.05},   {"turnTol1", 0.05}, {"driveTol1", 0.3}, {"turnTol2", 0.05},
              {"driveTol2", 0.3}, {"dockDist", 0.15}, {"dockAngTol", 0.12}};
  }
  return {};
}

// Each baseline has one threshold set below what the robot can physically
// reach, so the behaviour never advances past that point.
ParamMap baseline_params(ScenarioKind kind) {
  ParamMap p = nominal_params(kind);
  switch (kind) {
    case ScenarioKind::kAttacker: p["maxDist"] = 0.1; break;
    case ScenarioKind::kDeflector: p["kickDist"] = 0.05; break;
    case ScenarioKind::kDocker: p["dockDist"] = 0.08; break;
  }
  return p;
}

}  // namespace srtr
