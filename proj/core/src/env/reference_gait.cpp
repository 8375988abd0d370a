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

#include "mloc/env/reference_gait.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "mloc/common/error.hpp"

namespace mloc::env {
namespace {

void leg_reference(const ReferenceGait& gait, int phase, double& hip, double& knee) {
  const double angle = 2.0 * std::numbers::pi * phase / gait.phase_length;
  hip = gait.hip_offset() + gait.hip_amplitude * std::cos(angle);
  knee = gait.knee_offset - gait.knee_amplitude * std::max(0.0, -std::sin(angle));
}

}  // namespace

std::array<double, kNumJoints> ReferenceGait::stand_posture() const {
  return {hip_offset() + hip_amplitude, knee_offset, hip_offset() - hip_amplitude, knee_offset};
}

void ReferenceGait::validate() const {
  if (phase_length < 2 || phase_length % 2 != 0) {
    throw ValidationError("reference gait: phase length must be even and at least 2");
  }
  if (!std::isfinite(hip_amplitude) || !std::isfinite(knee_offset) || !std::isfinite(knee_amplitude) ||
      !std::isfinite(speed) || !std::isfinite(pitch)) {
    throw ValidationError("reference gait: values must be finite");
  }
}

GaitReference reference_gait_state(const ReferenceGait& gait, long step) {
  if (step < 0) throw UsageError("reference gait: negative step");
  GaitReference ref;
  ref.phase = static_cast<int>(step % gait.phase_length);
  const int right_phase = (ref.phase + gait.phase_length / 2) % gait.phase_length;
  leg_reference(gait, ref.phase, ref.joints[kLeftHip], ref.joints[kLeftKnee]);
  leg_reference(gait, right_phase, ref.joints[kRightHip], ref.joints[kRightKnee]);
  ref.forward_position = gait.speed * static_cast<double>(step) * kPolicyPeriod;
  ref.speed = gait.speed;
  ref.pitch = gait.pitch;
  return ref;
}

}  // namespace mloc::env
