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

#include "mloc/env/model.hpp"

namespace mloc::env {

inline constexpr double kPolicyPeriod = 0.03;  // s
inline constexpr double kPhysicsDt = 0.0005;   // s
inline constexpr int kSubstepsPerPolicyStep = 60;

/// Procedural periodic walking reference: sinusoidal hips around an offset
/// that keeps the torso upright in double support, knees that flex during
/// forward swing, right leg half a cycle behind the left.
struct ReferenceGait {
  int phase_length = 28;  // policy steps per cycle
  double hip_amplitude = 0.25;
  double knee_offset = -0.15;
  double knee_amplitude = 0.6;
  double speed = 1.0;  // m/s
  double pitch = 0.0;  // rad

  double hip_offset() const { return -0.5 * knee_offset; }
  /// Joint angles of the standing posture (phase 0 without swing flexion).
  std::array<double, kNumJoints> stand_posture() const;
  void validate() const;
};

struct GaitReference {
  std::array<double, kNumJoints> joints{};
  double forward_position = 0.0;  // m
  double speed = 0.0;             // m/s
  double pitch = 0.0;             // rad
  int phase = 0;
};

/// Reference at policy step `step` (not wrapped; the phase wraps modulo L,
/// the forward position keeps growing with elapsed time).
GaitReference reference_gait_state(const ReferenceGait& gait, long step);

}  // namespace mloc::env
