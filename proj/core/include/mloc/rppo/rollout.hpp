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
#include <functional>

#include "mloc/env/environment.hpp"
#include "mloc/nn/network.hpp"
#include "mloc/rppo/normalizer.hpp"
#include "mloc/rppo/trajectory.hpp"

namespace mloc::rppo {

struct EpisodeOptions {
  int max_steps = 300;
  bool deterministic = false;
};

/// What an observer sees after every policy step.
struct StepRecord {
  Eigen::Index step = 0;
  const Eigen::VectorXd& observation;  // raw observation the action was chosen from
  const nn::StepCache& policy_cache;
  const Eigen::VectorXd& action;
  const env::StepResult& result;
};

using StepObserver = std::function<void(const env::Environment&, const StepRecord&)>;

/// Rolls one episode from a zero hidden state. Randomness (reset noise and
/// action noise) comes from streams derived from `seed`. `critic` may be null,
/// in which case values are left at zero.
Trajectory run_episode(const nn::Network& policy, const nn::Network* critic, env::Environment& env,
                       const Normalizer& normalizer, const dynrand::DynamicsParameters& params, std::uint64_t seed,
                       const EpisodeOptions& options, const StepObserver& observer = {});

/// As above with dynamics drawn from env.randomization() on a stream of `seed`.
Trajectory run_episode(const nn::Network& policy, const nn::Network* critic, env::Environment& env,
                       const Normalizer& normalizer, std::uint64_t seed, const EpisodeOptions& options,
                       const StepObserver& observer = {});

/// Seed of episode `index` within a collection seeded by `seed`.
std::uint64_t episode_seed(std::uint64_t seed, std::uint64_t index);

struct RolloutOptions {
  std::uint64_t seed = 0;
  int episodes = 0;             // fixed episode count when positive
  std::int64_t min_steps = 0;   // otherwise the shortest episode prefix reaching this many steps
  int max_steps = 300;
  int workers = 1;
  bool deterministic = false;
  int max_episodes = 1000000;
};

/// Runs episodes 0, 1, ... on `workers` threads, each owning an environment
/// built by `factory`. Every episode draws from its own derived seed and
/// results are ordered by episode index, so the buffer does not depend on the
/// worker count.
RolloutBuffer collect_rollouts(const nn::Network& policy, const nn::Network& critic, const env::EnvFactory& factory,
                               const Normalizer& normalizer, const RolloutOptions& options);

/// Observation statistics from `n_steps` steps of the given (untrained,
/// stochastic) policy acting on raw observations.
Normalizer collect_prenormalization_stats(const nn::Network& policy, const env::EnvFactory& factory,
                                          std::int64_t n_steps, std::uint64_t seed, int workers = 1,
                                          int max_steps = 300);

inline constexpr std::int64_t kMinPrenormalizationSteps = 10000;

}  // namespace mloc::rppo
