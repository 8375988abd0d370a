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

#include "mloc/rppo/batch.hpp"

#include <algorithm>
#include <numeric>

#include "mloc/common/error.hpp"

namespace mloc::rppo {

double TrajectoryBatch::valid_count() const {
  double n = 0.0;
  for (const Eigen::RowVectorXd& m : mask) n += m.sum();
  return n;
}

std::vector<std::vector<std::size_t>> permuted_batches(std::size_t count, std::size_t batch_size, Rng& rng) {
  if (batch_size == 0) throw ConfigError("batch size must be positive");
  std::vector<std::size_t> order(count);
  std::iota(order.begin(), order.end(), std::size_t{0});
  // Fisher-Yates on our own generator so the order is identical across standard libraries.
  for (std::size_t i = count; i > 1; --i) {
    const std::size_t j = static_cast<std::size_t>(rng.next() % i);
    std::swap(order[i - 1], order[j]);
  }
  std::vector<std::vector<std::size_t>> batches;
  for (std::size_t start = 0; start < count; start += batch_size) {
    batches.emplace_back(order.begin() + static_cast<std::ptrdiff_t>(start),
                         order.begin() + static_cast<std::ptrdiff_t>(std::min(count, start + batch_size)));
  }
  return batches;
}

namespace {

TrajectoryBatch allocate(const RolloutBuffer& buffer, Eigen::Index steps, Eigen::Index members) {
  const Trajectory& first = buffer.trajectories.front();
  TrajectoryBatch b;
  const auto n = static_cast<std::size_t>(steps);
  b.observations.assign(n, Eigen::MatrixXd::Zero(first.observations.rows(), members));
  b.actions.assign(n, Eigen::MatrixXd::Zero(first.actions.rows(), members));
  b.old_means.assign(n, Eigen::MatrixXd::Zero(first.means.rows(), members));
  b.old_logprobs.assign(n, Eigen::RowVectorXd::Zero(members));
  b.advantages.assign(n, Eigen::RowVectorXd::Zero(members));
  b.returns.assign(n, Eigen::RowVectorXd::Zero(members));
  b.mask.assign(n, Eigen::RowVectorXd::Zero(members));
  return b;
}

void fill(TrajectoryBatch& b, const RolloutBuffer& buffer, std::size_t traj, Eigen::Index step, std::size_t slot,
          Eigen::Index column) {
  const Trajectory& t = buffer.trajectories[traj];
  b.observations[slot].col(column) = t.observations.col(step);
  b.actions[slot].col(column) = t.actions.col(step);
  b.old_means[slot].col(column) = t.means.col(step);
  b.old_logprobs[slot][column] = t.logprobs[step];
  b.advantages[slot][column] = buffer.advantages[traj][step];
  b.returns[slot][column] = buffer.returns[traj][step];
  b.mask[slot][column] = 1.0;
}

void require_estimated(const RolloutBuffer& buffer) {
  if (buffer.trajectories.empty()) throw UsageError("cannot batch an empty rollout buffer");
  if (!buffer.estimated()) throw UsageError("advantages must be estimated before batching");
}

}  // namespace

TrajectoryBatch make_trajectory_batch(const RolloutBuffer& buffer, const std::vector<std::size_t>& indices,
                                      Eigen::Index pad_to) {
  require_estimated(buffer);
  Eigen::Index steps = pad_to;
  for (std::size_t i : indices) steps = std::max(steps, buffer.trajectories.at(i).length());
  TrajectoryBatch b = allocate(buffer, steps, static_cast<Eigen::Index>(indices.size()));
  for (std::size_t k = 0; k < indices.size(); ++k) {
    const Trajectory& t = buffer.trajectories[indices[k]];
    for (Eigen::Index s = 0; s < t.length(); ++s) {
      fill(b, buffer, indices[k], s, static_cast<std::size_t>(s), static_cast<Eigen::Index>(k));
    }
  }
  return b;
}

TrajectoryBatch make_timestep_batch(const RolloutBuffer& buffer,
                                    const std::vector<std::pair<std::size_t, Eigen::Index>>& samples) {
  require_estimated(buffer);
  TrajectoryBatch b = allocate(buffer, 1, static_cast<Eigen::Index>(samples.size()));
  for (std::size_t k = 0; k < samples.size(); ++k) {
    fill(b, buffer, samples[k].first, samples[k].second, 0, static_cast<Eigen::Index>(k));
  }
  return b;
}

std::vector<std::pair<std::size_t, Eigen::Index>> timestep_index(const RolloutBuffer& buffer) {
  std::vector<std::pair<std::size_t, Eigen::Index>> out;
  out.reserve(static_cast<std::size_t>(buffer.total_steps()));
  for (std::size_t i = 0; i < buffer.trajectories.size(); ++i) {
    for (Eigen::Index s = 0; s < buffer.trajectories[i].length(); ++s) out.emplace_back(i, s);
  }
  return out;
}

}  // namespace mloc::rppo
