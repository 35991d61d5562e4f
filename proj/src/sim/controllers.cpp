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

#include "srtr/ops.hpp"
#include "world.hpp"

namespace srtr::sim {
namespace {

constexpr double kStandoff = 0.2;  // m behind the ball before a kick
constexpr double kGain = 3.0;      // 1/s, position
constexpr double kTurnGain = 5.0;  // 1/s, heading
constexpr double kKickApproach = 1.0;  // m/s

double num_in(const ValueMap& m, const char* k) { return std::get<double>(m.at(k)); }
Vec2 vec_in(const ValueMap& m, const char* k) { return std::get<Vec2>(m.at(k)); }

double face(const ValueMap& ins) {
  return kTurnGain * angle_mod(num_in(ins, "targetAng") - num_in(ins, "robotAng"));
}

// Kick timer shared by the attacker and the deflector.
void tick(const std::string& state, const ValueMap& ins, ValueMap& vars, double dt) {
  if (!vars.count("timeInKick")) return;
  if (state == "KICK") {
    vars["timeInKick"] = std::get<double>(vars["timeInKick"]) + dt;
    if (vars.count("lastKick")) vars["lastKick"] = num_in(ins, "time");
  } else {
    vars["timeInKick"] = 0.0;
  }
}

ValueMap attacker(const std::string& state, const ValueMap& ins, const Physics& p) {
  Vec2 ball = vec_in(ins, "ballLoc"), vel = vec_in(ins, "ballVel");
  Vec2 robot = vec_in(ins, "robotLoc");
  Vec2 aim = unit(num_in(ins, "targetAng"));
  if (state == "GOTO") {
    Vec2 target = ball - kStandoff * aim;
    return {{"vel", vel + kGain * (target - robot)}, {"omega", face(ins)}, {"kick", false}};
  }
  if (state == "INTERCEPT") {
    // Wait where the ball will come to rest.
    double k = p.friction > 0 ? norm(vel) / (2 * p.friction) : 2.0;
    Vec2 target = ball + k * vel - kStandoff * aim;
    return {{"vel", kGain * (target - robot)}, {"omega", face(ins)}, {"kick", false}};
  }
  if (state == "KICK") {
    Vec2 rel = ball - robot;
    double d = norm(rel);
    Vec2 push = d > 0 ? (kKickApproach / d) * rel : Vec2{};
    return {{"vel", vel + push}, {"omega", face(ins)}, {"kick", true}};
  }
  return {{"vel", Vec2{}}, {"omega", 0.0}, {"kick", false}};
}

ValueMap deflector(const std::string& state, const ValueMap& ins) {
  if (state == "SETUP" || state == "WAIT" || state == "KICK") {
    Vec2 target = vec_in(ins, "interceptLoc");
    return {{"vel", kGain * (target - vec_in(ins, "robotLoc"))},
            {"omega", face(ins)},
            {"kick", state == "KICK"}};
  }
  return {{"vel", Vec2{}}, {"omega", 0.0}, {"kick", false}};
}

ValueMap docker(const std::string& state, const ValueMap& ins, const Field& f) {
  Vec2 robot = vec_in(ins, "robotLoc");
  bool stage1 = state.rfind("S1_", 0) == 0;
  bool stage2 = state.rfind("S2_", 0) == 0;
  if (!stage1 && !stage2) return {{"v", 0.0}, {"omega", 0.0}};
  double b = num_in(ins, stage1 ? "wayBearing" : "chargerBearing");
  double turn = std::clamp(2.0 * std::fabs(b), 0.3, 2.0);
  if (state.ends_with("_LEFT")) return {{"v", 0.0}, {"omega", turn}};
  if (state.ends_with("_RIGHT")) return {{"v", 0.0}, {"omega", -turn}};
  double v = stage1 ? std::clamp(norm(vec_in(ins, "wayLoc") - robot), 0.05, 0.5)
                    : std::clamp(0.8 * (norm(f.charger - robot) - f.charger_radius), 0.05, 0.3);
  return {{"v", v}, {"omega", 2.0 * b}};
}

}  // namespace

EmissionFn controller(const Scenario& sc) {
  Physics p = sc.physics;
  Field f = sc.field;
  switch (sc.kind) {
    case ScenarioKind::kAttacker:
      return [p](const std::string& s, const ValueMap& ins, ValueMap& vars) {
        tick(s, ins, vars, p.dt);
        return attacker(s, ins, p);
      };
    case ScenarioKind::kDeflector:
      return [p](const std::string& s, const ValueMap& ins, ValueMap& vars) {
        tick(s, ins, vars, p.dt);
        return deflector(s, ins);
      };
    case ScenarioKind::kDocker:
      return [f](const std::string& s, const ValueMap& ins, ValueMap&) {
        return docker(s, ins, f);
      };
  }
  return {};
}

}  // namespace srtr::sim
