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

#include <array>
#include <string>

namespace mloc::env {

inline constexpr int kNumLinks = 5;
inline constexpr int kNumJoints = 4;
inline constexpr int kNumCoords = 7;  // torso x, torso z, torso pitch, left hip, left knee, right hip, right knee

enum Link : int { kTorso = 0, kLeftThigh, kLeftShank, kRightThigh, kRightShank };
enum Joint : int { kLeftHip = 0, kLeftKnee, kRightHip, kRightKnee };

const std::array<std::string, kNumLinks>& link_names();
const std::array<std::string, kNumJoints>& joint_names();

struct LinkParams {
  double mass = 1.0;     // kg
  double length = 1.0;   // m, proximal joint to distal end
  double inertia = 0.1;  // kg m^2 about the centre of mass
  double com = 0.5;      // m from the proximal joint along the link axis (torso: above the hip)
};

/// Planar five-link biped: a torso on a floating base with two
/// thigh/shank legs ending in point feet. Angles are counter-clockwise
/// positive; a leg with positive absolute angle has its foot in front.
struct BipedModel {
  std::array<LinkParams, kNumLinks> links{{
      {12.0, 0.50, 0.30, 0.25},
      {4.0, 0.45, 0.070, 0.20},
      {2.5, 0.45, 0.045, 0.20},
      {4.0, 0.45, 0.070, 0.20},
      {2.5, 0.45, 0.045, 0.20},
  }};
  double torso_com_x = 0.0;  // m, added to the torso centre of mass in the torso frame
  double torso_com_z = 0.0;
  std::array<double, kNumJoints> joint_damping{0.5, 0.5, 0.5, 0.5};  // N m s / rad
  std::array<double, kNumJoints> kp{300.0, 300.0, 300.0, 300.0};      // N m / rad
  std::array<double, kNumJoints> kd{8.0, 8.0, 8.0, 8.0};              // N m s / rad
  std::array<double, kNumJoints> torque_limit{150.0, 150.0, 150.0, 150.0};
  double contact_stiffness = 1e5;  // N / m
  double contact_damping = 1e3;    // N s / m
  double friction = 1.0;
  double gravity = 9.81;

  /// Joint angles of the standing posture and the PD targets that hold it at rest.
  std::array<double, kNumJoints> stand_posture{0.325, -0.15, -0.175, -0.15};
  std::array<double, kNumJoints> neutral_offset{0.325, -0.15, -0.175, -0.15};

  double total_mass() const;
  /// Throws ValidationError when a physical quantity is out of range.
  void validate() const;
};

/// Hidden parameters of the diagnostic velocity-tracking cart.
struct DiagnosticParams {
  double mass = 1.0;     // kg
  double damping = 1.0;  // N s / m

  void validate() const;
};

}  // namespace mloc::env
