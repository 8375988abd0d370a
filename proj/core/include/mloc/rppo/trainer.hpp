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

#include "mloc/env/environment.hpp"
#include "mloc/nn/adam.hpp"
#include "mloc/nn/network.hpp"
#include "mloc/rppo/batch.hpp"
#include "mloc/rppo/normalizer.hpp"
#include "mloc/rppo/trajectory.hpp"

namespace mloc::rppo {

struct PpoConfig {
  double clip = 0.2;
  double kl_threshold = 0.02;
  int epochs = 4;
  int rollouts = 0;  // episodes per iteration; 0 collects until timesteps_per_iteration
  std::int64_t timesteps_per_iteration = 50000;
  std::int64_t total_timesteps = 50000000;
  int trajectory_batch = 64;   // recurrent policies
  int timestep_batch = 1024;   // feedforward policies
  double gamma = 0.99;
  double lambda = 0.95;
  double learning_rate = 1e-4;
  double critic_learning_rate = 1e-4;
  int max_episode_steps = 300;
  std::int64_t prenormalization_steps = 10000;
  bool normalize_advantages = true;
  double head_scale = 0.01;  // initial scale of the policy and critic output layers
  /// Critic outputs are this multiple of its linear head; 0 picks 1 / (1 - gamma),
  /// the return of a unit reward stream, so the head works near unit scale.
  double value_scale = 0.0;

  double resolved_value_scale() const;

  void validate() const;
};

struct IterationMetrics {
  std::int64_t iteration = 0;
  std::int64_t timesteps = 0;  // cumulative
  std::int64_t iteration_steps = 0;
  int episodes = 0;
  double mean_reward = 0.0;
  double mean_length = 0.0;
  double kl = 0.0;  // after the last update that ran
  bool kl_stopped = false;
  int epochs_completed = 0;
  int batches = 0;
  double clip_fraction = 0.0;
  double policy_objective = 0.0;
  double value_loss = 0.0;
  double wall_seconds = 0.0;
};

/// Loss terms of one batch and, optionally, their parameter gradients.
struct BatchEvaluation {
  double objective = 0.0;   // masked mean clipped surrogate
  double value_loss = 0.0;  // masked mean squared error to the returns
  double clip_fraction = 0.0;
  double valid = 0.0;
  std::vector<Eigen::RowVectorXd> ratios;
  Eigen::VectorXd policy_grad;  // of -objective
  Eigen::VectorXd critic_grad;  // of value_loss
};

BatchEvaluation evaluate_batch(const nn::Network& policy, const nn::Network& critic, const TrajectoryBatch& batch,
                               double clip, bool gradients);

/// Masked mean KL between the batch's behavior means and `policy`'s current means.
double batch_kl(const nn::Network& policy, const TrajectoryBatch& batch);

/// Owns one policy/critic pair and its optimizer state. Every random draw is
/// derived from the master seed and the iteration number, so a run restored
/// from a checkpoint continues exactly as an uninterrupted one.
class Trainer {
 public:
  Trainer(env::EnvFactory factory, nn::NetworkSpec policy_spec, PpoConfig config, std::uint64_t seed, int workers = 1);

  /// Fresh weights and optimizer state.
  void initialize();
  void prenormalize();
  IterationMetrics train_iteration();
  bool finished() const { return timesteps_ >= config_.total_timesteps; }

  const PpoConfig& config() const { return config_; }
  std::uint64_t seed() const { return seed_; }
  void set_workers(int workers) { workers_ = workers; }
  nn::Network& policy() { return policy_; }
  const nn::Network& policy() const { return policy_; }
  nn::Network& critic() { return critic_; }
  const nn::Network& critic() const { return critic_; }
  nn::AdamState& policy_adam() { return policy_adam_; }
  const nn::AdamState& policy_adam() const { return policy_adam_; }
  nn::AdamState& critic_adam() { return critic_adam_; }
  const nn::AdamState& critic_adam() const { return critic_adam_; }
  const Normalizer& normalizer() const { return normalizer_; }
  void set_normalizer(Normalizer normalizer);
  bool prenormalized() const { return prenormalized_; }
  std::int64_t iteration() const { return iteration_; }
  std::int64_t timesteps() const { return timesteps_; }
  void set_progress(std::int64_t iteration, std::int64_t timesteps);
  const env::EnvFactory& factory() const { return factory_; }

 private:
  void optimize(RolloutBuffer& buffer, IterationMetrics& metrics);

  env::EnvFactory factory_;
  PpoConfig config_;
  std::uint64_t seed_;
  int workers_;
  nn::Network policy_;
  nn::Network critic_;
  nn::AdamState policy_adam_;
  nn::AdamState critic_adam_;
  Normalizer normalizer_;
  bool prenormalized_ = false;
  std::int64_t iteration_ = 0;
  std::int64_t timesteps_ = 0;
};

/// Critic matching a policy: same family and hidden sizes, scalar output.
nn::NetworkSpec critic_spec_for(const nn::NetworkSpec& policy, double value_scale = 1.0);

}  // namespace mloc::rppo
