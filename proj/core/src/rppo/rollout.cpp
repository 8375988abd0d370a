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

#include "mloc/rppo/rollout.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <optional>
#include <thread>

#include "mloc/common/error.hpp"
#include "mloc/nn/gaussian.hpp"

namespace mloc::rppo {
namespace {

enum Stream : std::uint64_t { kResetStream = 0, kActionStream = 1, kDynamicsStream = 2 };

}  // namespace

std::uint64_t episode_seed(std::uint64_t seed, std::uint64_t index) { return derive_seed(seed, {index}); }

Trajectory run_episode(const nn::Network& policy, const nn::Network* critic, env::Environment& env,
                       const Normalizer& normalizer, std::uint64_t seed, const EpisodeOptions& options,
                       const StepObserver& observer) {
  Rng rng(derive_seed(seed, {kDynamicsStream}));
  return run_episode(policy, critic, env, normalizer, dynrand::sample_parameters(env.randomization(), rng), seed,
                     options, observer);
}

Trajectory run_episode(const nn::Network& policy, const nn::Network* critic, env::Environment& env,
                       const Normalizer& normalizer, const dynrand::DynamicsParameters& params, std::uint64_t seed,
                       const EpisodeOptions& options, const StepObserver& observer) {
  if (options.max_steps <= 0) throw ConfigError("episode step cap must be positive");
  if (policy.input_dim() != env.observation_dim() || policy.output_dim() != env.action_dim()) {
    throw ConfigError("policy dimensions do not match environment " + env.name());
  }
  Rng reset_rng(derive_seed(seed, {kResetStream}));
  Rng action_rng(derive_seed(seed, {kActionStream}));
  Eigen::VectorXd obs = env.reset(params, reset_rng);

  const auto cap = static_cast<Eigen::Index>(options.max_steps);
  Trajectory t;
  t.params = env.parameters();
  t.observations.resize(policy.input_dim(), cap);
  t.actions.resize(policy.output_dim(), cap);
  t.means.resize(policy.output_dim(), cap);
  t.logprobs.resize(cap);
  t.rewards.resize(cap);
  t.values = Eigen::RowVectorXd::Zero(cap);

  nn::RecurrentState policy_state = policy.initial_state(1);
  nn::RecurrentState critic_state = critic ? critic->initial_state(1) : nn::RecurrentState{};
  nn::StepCache cache;
  Eigen::Index n = 0;
  bool ended = false;
  while (n < cap && !ended) {
    const Eigen::VectorXd x = normalizer.apply(obs);
    const Eigen::VectorXd mean = policy.step(x, policy_state, &cache);
    const Eigen::VectorXd action = nn::sample_action(mean, action_rng, options.deterministic);
    if (critic) t.values[n] = critic->step(x, critic_state)(0, 0);
    const env::StepResult r = env.step(action);
    t.observations.col(n) = x;
    t.actions.col(n) = action;
    t.means.col(n) = mean;
    t.logprobs[n] = nn::gaussian_logprob(mean, action);
    t.rewards[n] = r.reward;
    if (observer) observer(env, StepRecord{n, obs, cache, action, r});
    ++n;
    obs = r.observation;
    if (r.done) {
      ended = true;
      t.terminal = !r.truncated;
    }
  }
  if (!t.terminal && critic) t.bootstrap_value = critic->step(normalizer.apply(obs), critic_state)(0, 0);
  t.observations.conservativeResize(Eigen::NoChange, n);
  t.actions.conservativeResize(Eigen::NoChange, n);
  t.means.conservativeResize(Eigen::NoChange, n);
  t.logprobs.conservativeResize(n);
  t.rewards.conservativeResize(n);
  t.values.conservativeResize(n);
  return t;
}

RolloutBuffer collect_rollouts(const nn::Network& policy, const nn::Network& critic, const env::EnvFactory& factory,
                               const Normalizer& normalizer, const RolloutOptions& options) {
  const bool fixed = options.episodes > 0;
  if (!fixed && options.min_steps <= 0) throw ConfigError("rollouts need an episode count or a step target");
  const int workers = std::max(1, options.workers);
  const EpisodeOptions episode{options.max_steps, options.deterministic};

  std::mutex mu;
  std::vector<std::optional<Trajectory>> results;
  std::size_t prefix = 0;
  std::int64_t prefix_steps = 0;
  std::size_t needed = fixed ? static_cast<std::size_t>(options.episodes) : 0;
  std::atomic<std::size_t> next{0};
  std::atomic<bool> stop{false};
  std::exception_ptr failure;
  std::string failure_context;

  auto work = [&] {
    std::unique_ptr<env::Environment> env;
    std::size_t i = 0;
    try {
      env = factory();
      while (!stop.load()) {
        i = next.fetch_add(1);
        if (fixed ? i >= needed : i >= static_cast<std::size_t>(options.max_episodes)) break;
        Trajectory t = run_episode(policy, &critic, *env, normalizer, episode_seed(options.seed, i), episode);
        t.episode = i;
        std::lock_guard lock(mu);
        if (results.size() <= i) results.resize(i + 1);
        results[i] = std::move(t);
        while (prefix < results.size() && results[prefix] && !(needed > 0 && !fixed)) {
          prefix_steps += results[prefix++]->length();
          if (!fixed && prefix_steps >= options.min_steps) {
            needed = prefix;
            stop = true;
          }
        }
      }
    } catch (...) {
      std::lock_guard lock(mu);
      if (!failure) {
        failure = std::current_exception();
        failure_context = "rollout worker failed on episode " + std::to_string(i);
      }
      stop = true;
    }
  };

  if (workers == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w) pool.emplace_back(work);
    for (std::thread& th : pool) th.join();
  }
  if (failure) {
    try {
      std::rethrow_exception(failure);
    } catch (const std::exception& e) {
      throw Error(failure_context + ": " + e.what());
    }
  }
  if (needed == 0) {
    throw Error("could not collect " + std::to_string(options.min_steps) + " steps within " +
                std::to_string(options.max_episodes) + " episodes (got " + std::to_string(prefix_steps) + ")");
  }
  RolloutBuffer buffer;
  buffer.trajectories.reserve(needed);
  for (std::size_t i = 0; i < needed; ++i) buffer.trajectories.push_back(std::move(*results[i]));
  return buffer;
}

Normalizer collect_prenormalization_stats(const nn::Network& policy, const env::EnvFactory& factory,
                                          std::int64_t n_steps, std::uint64_t seed, int workers, int max_steps) {
  if (n_steps < kMinPrenormalizationSteps) {
    throw ConfigError("prenormalization needs at least " + std::to_string(kMinPrenormalizationSteps) + " steps");
  }
  const Normalizer raw = Normalizer::identity(policy.input_dim());
  // The critic is irrelevant here; a tiny stand-in keeps collect_rollouts' contract.
  nn::Network critic(nn::NetworkSpec::feedforward(policy.input_dim(), 1, 1));
  RolloutOptions options;
  options.seed = seed;
  options.min_steps = n_steps;
  options.max_steps = max_steps;
  options.workers = workers;
  options.max_episodes = static_cast<int>(std::min<std::int64_t>(n_steps, 1000000));
  const RolloutBuffer buffer = collect_rollouts(policy, critic, factory, raw, options);
  Eigen::MatrixXd samples(policy.input_dim(), n_steps);
  Eigen::Index filled = 0;
  for (const Trajectory& t : buffer.trajectories) {
    const Eigen::Index take = std::min<Eigen::Index>(t.length(), n_steps - filled);
    samples.middleCols(filled, take) = t.observations.leftCols(take);
    filled += take;
    if (filled == n_steps) break;
  }
  return Normalizer::from_samples(samples);
}

}  // namespace mloc::rppo
