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

namespace mloc::env {

/// Tracking-reward weights: joint, forward velocity, forward position and
/// orientation terms of the walking reward, rescaled so they sum to one
/// once the lateral-velocity and spring terms are dropped.
struct RewardWeights {
  static constexpr double kRetained = 0.20 + 0.20 + 0.05 + 0.30;
  double joints = 0.20 / kRetained;
  double velocity = 0.20 / kRetained;
  double position = 0.05 / kRetained;
  double orientation = 0.30 / kRetained;

  double sum() const { return joints + velocity + position + orientation; }
};

struct TrackingErrors {
  double joints = 0.0;       // sum of squared joint errors, rad^2
  double velocity = 0.0;     // (m/s)^2
  double position = 0.0;     // m^2
  double orientation = 0.0;  // rad^2
};

/// Weighted sum of exp(-error) terms; in (0, 1], equal to 1 at zero error.
double compute_reward(const TrackingErrors& errors, const RewardWeights& weights = {});

}  // namespace mloc::env
