// Copyright 2026 The memloco Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <Eigen/Core>

#include <array>

#include "mloc/env/model.hpp"

namespace mloc::env {

using Coords = Eigen::Matrix<double, kNumCoords, 1>;
using JointVector = std::array<double, kNumJoints>;

struct FootContact {
  bool active = false;
  double anchor = 0.0;  // x where the tangential spring is attached
};

struct BipedState {
  Coords q = Coords::Zero();
  Coords qd = Coords::Zero();
  std::array<FootContact, 2> feet{};
  long steps = 0;  // policy steps since reset
  int phase = 0;   // steps modulo the gait phase length
  bool failed = false;

  double time() const;
  double torso_x() const { return q[0]; }
  double torso_height() const { return q[1]; }
  double pitch() const { return q[2]; }
};

/// PD law clamped to +-limit.
double pd_torque(double target, double q, double qd, double kp, double kd, double limit);

/// Advances one physics substep with semi-implicit Euler. Sets `failed`
/// instead of throwing when the mass matrix or the state breaks down.
void physics_substep(BipedState& state, const JointVector& torques, const BipedModel& model,
                     double dt = 0.0005);

struct ContactForces {
  std::array<double, 2> normal{};
  std::array<double, 2> tangential{};
  std::array<double, 2> penetration{};
};

ContactForces contact_forces(const BipedState& state, const BipedModel& model);

Eigen::Vector2d foot_position(const BipedState& state, const BipedModel& model, int side);
Eigen::Vector2d center_of_mass(const BipedState& state, const BipedModel& model);
Eigen::Vector2d center_of_mass_velocity(const BipedState& state, const BipedModel& model);

struct Energy {
  double kinetic = 0.0;
  double potential = 0.0;
  double contact_spring = 0.0;
  double total() const { return kinetic + potential + contact_spring; }
};

Energy mechanical_energy(const BipedState& state, const BipedModel& model);

/// Standing posture at rest, torso upright, the lower foot touching z = 0.
BipedState standing_state(const BipedModel& model, const JointVector& joints);

/// PD targets that hold `model.stand_posture` at rest, found by repeatedly
/// settling the robot and correcting the targets by the residual sag.
JointVector calibrate_neutral_offset(const BipedModel& model, int iterations = 8);

}  // namespace mloc::env
