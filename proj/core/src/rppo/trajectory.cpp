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

#include "mloc/rppo/trajectory.hpp"

namespace mloc::rppo {

std::int64_t RolloutBuffer::total_steps() const {
  std::int64_t n = 0;
  for (const Trajectory& t : trajectories) n += t.length();
  return n;
}

double RolloutBuffer::mean_episode_reward() const {
  if (trajectories.empty()) return 0.0;
  double sum = 0.0;
  for (const Trajectory& t : trajectories) sum += t.total_reward();
  return sum / static_cast<double>(trajectories.size());
}

double RolloutBuffer::mean_episode_length() const {
  if (trajectories.empty()) return 0.0;
  return static_cast<double>(total_steps()) / static_cast<double>(trajectories.size());
}

void RolloutBuffer::clear() {
  trajectories.clear();
  advantages.clear();
  returns.clear();
}

}  // namespace mloc::rppo
