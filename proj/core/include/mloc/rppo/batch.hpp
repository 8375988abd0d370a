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

#include <cstddef>
#include <utility>
#include <vector>

#include "mloc/common/rng.hpp"
#include "mloc/rppo/trajectory.hpp"

namespace mloc::rppo {

/// Time-major padded batch. Entry t of each vector holds step t of every
/// member, one column per member. Padded columns carry mask 0 and zeros.
struct TrajectoryBatch {
  std::vector<Eigen::MatrixXd> observations;
  std::vector<Eigen::MatrixXd> actions;
  std::vector<Eigen::MatrixXd> old_means;
  std::vector<Eigen::RowVectorXd> old_logprobs;
  std::vector<Eigen::RowVectorXd> advantages;
  std::vector<Eigen::RowVectorXd> returns;
  std::vector<Eigen::RowVectorXd> mask;

  Eigen::Index steps() const { return static_cast<Eigen::Index>(mask.size()); }
  Eigen::Index members() const { return mask.empty() ? 0 : mask.front().size(); }
  double valid_count() const;
};

/// A fresh permutation of [0, count) cut into consecutive groups of at most
/// `batch_size`. Every index appears exactly once.
std::vector<std::vector<std::size_t>> permuted_batches(std::size_t count, std::size_t batch_size, Rng& rng);

/// Whole trajectories `indices` padded to the longest member, or to `pad_to`
/// steps when that is larger.
TrajectoryBatch make_trajectory_batch(const RolloutBuffer& buffer, const std::vector<std::size_t>& indices,
                                      Eigen::Index pad_to = 0);

/// Single-step batch of individual timesteps (trajectory, step).
TrajectoryBatch make_timestep_batch(const RolloutBuffer& buffer,
                                    const std::vector<std::pair<std::size_t, Eigen::Index>>& samples);

/// Flat (trajectory, step) index of every timestep in buffer order.
std::vector<std::pair<std::size_t, Eigen::Index>> timestep_index(const RolloutBuffer& buffer);

}  // namespace mloc::rppo
