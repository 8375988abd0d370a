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

#include <cstdint>
#include <vector>

#include "mloc/dynrand/randomization.hpp"

namespace mloc::rppo {

/// One episode as seen by the behavior policy. Column t of every matrix is
/// policy step t.
struct Trajectory {
  std::uint64_t episode = 0;
  dynrand::DynamicsParameters params;
  Eigen::MatrixXd observations;  // normalized policy inputs
  Eigen::MatrixXd actions;
  Eigen::MatrixXd means;  // behavior policy means
  Eigen::RowVectorXd logprobs;
  Eigen::RowVectorXd rewards;
  Eigen::RowVectorXd values;
  bool terminal = false;          // ended by failure, so nothing to bootstrap
  double bootstrap_value = 0.0;   // critic value after the last step when cut short

  Eigen::Index length() const { return rewards.size(); }
  double total_reward() const { return rewards.sum(); }
};

struct RolloutBuffer {
  std::vector<Trajectory> trajectories;
  std::vector<Eigen::RowVectorXd> advantages;  // normalized
  std::vector<Eigen::RowVectorXd> returns;

  std::int64_t total_steps() const;
  bool estimated() const { return !trajectories.empty() && advantages.size() == trajectories.size(); }
  double mean_episode_reward() const;
  double mean_episode_length() const;
  void clear();
};

}  // namespace mloc::rppo
