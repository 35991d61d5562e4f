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

#pragma once

#include <cmath>
#include <optional>
#include <string>

#include "srtr/sim.hpp"

namespace srtr::sim {

inline Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
inline Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
inline Vec2 operator*(double k, Vec2 a) { return {k * a.x, k * a.y}; }
inline double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
inline double norm(Vec2 a) { return std::hypot(a.x, a.y); }
inline Vec2 unit(double ang) { return {std::cos(ang), std::sin(ang)}; }
inline double bearing(Vec2 v) { return std::atan2(v.y, v.x); }
inline Vec2 clip(Vec2 v, double max) {
  double n = norm(v);
  return n > max && n > 0 ? (max / n) * v : v;
}
inline double clip(double v, double max) { return std::fmax(-max, std::fmin(max, v)); }

/// Goal centre for the attacker and deflector.
inline Vec2 goal(const Field& f) { return {f.half_length, 0.0}; }

class World {
 public:
  explicit World(const Scenario& sc);

  ValueMap inputs(int t) const;
  /// Advances one timestep under the emission outputs. Returns the outcome
  /// if the episode ended during the step.
  std::optional<Termination> step(const ValueMap& outputs);
  /// Ball-only step with the robot at rest.
  std::optional<Termination> coast();

  bool docked() const;
  bool ball_dead() const { return norm(ball_vel_) == 0.0; }
  std::string describe() const;

 private:
  std::optional<Termination> move_ball();
  std::optional<Termination> contact(bool kick);
  void move_docker(double v, double omega);

  Scenario sc_;
  Vec2 ball_, ball_vel_, robot_;
  double robot_ang_;
};

/// Emission controller for a kind: proportional controllers that turn the
/// current state into velocity (or wheel) and kick commands.
EmissionFn controller(const Scenario& sc);

}  // namespace srtr::sim
