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

#include "world.hpp"

#include <cstdio>

#include "srtr/error.hpp"
#include "srtr/ops.hpp"

namespace srtr::sim {
namespace {

double num_out(const ValueMap& m, const char* key) {
  auto it = m.find(key);
  return it == m.end() ? 0.0 : std::get<double>(it->second);
}

Vec2 vec_out(const ValueMap& m, const char* key) {
  auto it = m.find(key);
  return it == m.end() ? Vec2{} : std::get<Vec2>(it->second);
}

bool flag_out(const ValueMap& m, const char* key) {
  auto it = m.find(key);
  return it != m.end() && std::get<bool>(it->second);
}

Vec2 intercept_point(Vec2 ball, Vec2 vel, Vec2 robot) {
  double speed = norm(vel);
  if (speed == 0.0) return ball;
  Vec2 dir = (1.0 / speed) * vel;
  return ball + std::fmax(0.0, dot(robot - ball, dir)) * dir;
}

Vec2 waypoint(const Field& f) {
  return f.charger - f.approach * unit(f.charger_heading);
}

}  // namespace

World::World(const Scenario& sc)
    : sc_(sc), ball_(sc.ball), ball_vel_(sc.ball_vel), robot_(sc.robot),
      robot_ang_(sc.robot_ang) {}

ValueMap World::inputs(int t) const {
  double time = t * sc_.physics.dt;
  const Field& f = sc_.field;
  switch (sc_.kind) {
    case ScenarioKind::kAttacker:
      return {{"ballLoc", ball_},     {"ballVel", ball_vel_},
              {"robotLoc", robot_},   {"robotAng", robot_ang_},
              {"targetAng", bearing(goal(f) - ball_)}, {"time", time}};
    case ScenarioKind::kDeflector:
      return {{"ballLoc", ball_},     {"ballVel", ball_vel_},
              {"robotLoc", robot_},   {"robotAng", robot_ang_},
              {"targetAng", bearing(goal(f) - robot_)},
              {"interceptLoc", intercept_point(ball_, ball_vel_, robot_)},
              {"time", time}};
    case ScenarioKind::kDocker: {
      Vec2 way = waypoint(f);
      return {{"robotLoc", robot_},
              {"robotAng", robot_ang_},
              {"wayLoc", way},
              {"chargerLoc", f.charger},
              {"dockHeading", f.charger_heading},
              {"wayBearing", angle_mod(bearing(way - robot_) - robot_ang_)},
              {"chargerBearing", angle_mod(bearing(f.charger - robot_) - robot_ang_)},
              {"time", time}};
    }
  }
  return {};
}

std::optional<Termination> World::move_ball() {
  const Physics& p = sc_.physics;
  double speed = norm(ball_vel_);
  if (speed > 0) {
    double slowed = std::fmax(0.0, speed - p.friction * p.dt);
    ball_vel_ = (slowed / speed) * ball_vel_;
  }
  Vec2 prev = ball_;
  ball_ = ball_ + p.dt * ball_vel_;
  const Field& f = sc_.field;
  if (ball_.x >= f.half_length) {
    // Where the path crossed the goal line.
    double s = (f.half_length - prev.x) / (ball_.x - prev.x);
    double y = prev.y + s * (ball_.y - prev.y);
    if (sc_.kind == ScenarioKind::kAttacker && std::fabs(y) < f.goal_half_width) {
      return Termination::kGoalScored;
    }
    return Termination::kOutOfBounds;
  }
  if (ball_.x <= -f.half_length || std::fabs(ball_.y) >= f.half_width) {
    return Termination::kOutOfBounds;
  }
  return std::nullopt;
}

std::optional<Termination> World::contact(bool kick) {
  const Physics& p = sc_.physics;
  Vec2 rel = ball_ - robot_;
  if (norm(rel) > p.robot_radius + p.ball_radius) return std::nullopt;
  bool in_front = dot(rel, unit(robot_ang_)) > 0;
  if (kick && in_front) {
    ball_vel_ = p.kick_speed * unit(robot_ang_);
    if (sc_.kind == ScenarioKind::kDeflector) return Termination::kDeflected;
  } else if (sc_.kind == ScenarioKind::kDeflector) {
    ball_vel_ = {};
  }
  return std::nullopt;
}

void World::move_docker(double v, double omega) {
  const Physics& p = sc_.physics;
  v = clip(v, p.max_speed);
  omega = clip(omega, p.max_turn);
  robot_ang_ = angle_mod(robot_ang_ + omega * p.dt);
  Vec2 next = robot_ + (v * p.dt) * unit(robot_ang_);
  // Stop at the charger: take the largest fraction of the move that stays
  // outside its disc.
  const Field& f = sc_.field;
  Vec2 d = next - robot_, m = robot_ - f.charger;
  double r = f.charger_radius;
  if (norm(next - f.charger) < r) {
    double a = dot(d, d), b = 2 * dot(m, d), c = dot(m, m) - r * r;
    double s = 0.0;
    if (c > 0 && a > 0) {
      double disc = std::fmax(0.0, b * b - 4 * a * c);
      s = std::fmax(0.0, (-b - std::sqrt(disc)) / (2 * a));
    }
    next = robot_ + s * d;
  }
  robot_ = next;
}

std::optional<Termination> World::step(const ValueMap& out) {
  const Physics& p = sc_.physics;
  if (sc_.kind == ScenarioKind::kDocker) {
    move_docker(num_out(out, "v"), num_out(out, "omega"));
    return std::nullopt;
  }
  robot_ = robot_ + p.dt * clip(vec_out(out, "vel"), p.max_speed);
  robot_ang_ = angle_mod(robot_ang_ + p.dt * clip(num_out(out, "omega"), p.max_turn));
  if (auto r = contact(flag_out(out, "kick"))) return r;
  return move_ball();
}

std::optional<Termination> World::coast() { return move_ball(); }

bool World::docked() const {
  const Field& f = sc_.field;
  return norm(robot_ - f.charger) <= f.charger_radius + 0.03 &&
         std::fabs(angle_mod(f.charger_heading - robot_ang_)) <= 0.15;
}

std::string World::describe() const {
  char buf[160];
  std::snprintf(buf, sizeof buf, "robot=(%.3f, %.3f, %.3f) ball=(%.3f, %.3f) v=(%.3f, %.3f)",
                robot_.x, robot_.y, robot_ang_, ball_.x, ball_.y, ball_vel_.x, ball_vel_.y);
  return buf;
}

}  // namespace srtr::sim
