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

#include "mloc/env/model.hpp"

#include <cmath>

#include "mloc/common/error.hpp"

namespace mloc::env {
namespace {

void require(bool ok, const std::string& what) {
  if (!ok) throw ValidationError("biped model: " + what);
}

}  // namespace

const std::array<std::string, kNumLinks>& link_names() {
  static const std::array<std::string, kNumLinks> names{"torso", "left_thigh", "left_shank", "right_thigh",
                                                        "right_shank"};
  return names;
}

const std::array<std::string, kNumJoints>& joint_names() {
  static const std::array<std::string, kNumJoints> names{"left_hip", "left_knee", "right_hip", "right_knee"};
  return names;
}

double BipedModel::total_mass() const {
  double sum = 0.0;
  for (const LinkParams& l : links) sum += l.mass;
  return sum;
}

void BipedModel::validate() const {
  for (int b = 0; b < kNumLinks; ++b) {
    const LinkParams& l = links[static_cast<std::size_t>(b)];
    const std::string& name = link_names()[static_cast<std::size_t>(b)];
    require(std::isfinite(l.mass) && l.mass > 0.0, name + " mass must be positive");
    require(std::isfinite(l.length) && l.length > 0.0, name + " length must be positive");
    require(std::isfinite(l.inertia) && l.inertia > 0.0, name + " inertia must be positive");
    require(std::isfinite(l.com), name + " centre of mass must be finite");
  }
  require(std::isfinite(torso_com_x) && std::isfinite(torso_com_z), "torso centre of mass offset must be finite");
  for (int j = 0; j < kNumJoints; ++j) {
    const auto u = static_cast<std::size_t>(j);
    const std::string& name = joint_names()[u];
    require(joint_damping[u] >= 0.0, name + " damping must be non-negative");
    require(kp[u] > 0.0 && kd[u] > 0.0, name + " PD gains must be positive");
    require(torque_limit[u] > 0.0, name + " torque limit must be positive");
    require(std::isfinite(stand_posture[u]) && std::isfinite(neutral_offset[u]), name + " posture must be finite");
  }
  require(contact_stiffness > 0.0, "contact stiffness must be positive");
  require(contact_damping >= 0.0, "contact damping must be non-negative");
  require(friction >= 0.0, "friction must be non-negative");
  require(gravity > 0.0, "gravity must be positive");
}

void DiagnosticParams::validate() const {
  if (!(mass > 0.0) || !(damping > 0.0)) throw ValidationError("diagnostic cart: mass and damping must be positive");
}

}  // namespace mloc::env
