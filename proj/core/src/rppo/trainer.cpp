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

#include "mloc/rppo/trainer.hpp"

#include <chrono>
#include <cmath>

#include "mloc/common/error.hpp"
#include "mloc/nn/gaussian.hpp"
#include "mloc/rppo/objective.hpp"
#include "mloc/rppo/rollout.hpp"

namespace mloc::rppo {
namespace {

enum Stream : std::uint64_t {
  kPolicyInit = 1,
  kCriticInit = 2,
  kPrenormalization = 3,
  kRollouts = 4,
  kBatches = 5,
};

}  // namespace

void PpoConfig::validate() const {
  if (!(clip > 0.0)) throw ConfigError("ppo.clip must be positive");
  if (!(kl_threshold >= 0.0)) throw ConfigError("ppo.kl_threshold must be non-negative");
  if (epochs < 1) throw ConfigError("ppo.epochs must be at least 1");
  if (rollouts < 0) throw ConfigError("ppo.rollouts must be non-negative");
  if (rollouts == 0 && timesteps_per_iteration <= 0) throw ConfigError("ppo.timesteps_per_iteration must be positive");
  if (total_timesteps < 0) throw ConfigError("ppo.total_timesteps must be non-negative");
  if (trajectory_batch < 1 || timestep_batch < 1) throw ConfigError("ppo batch sizes must be positive");
  if (!(gamma >= 0.0 && gamma <= 1.0)) throw ConfigError("ppo.gamma must lie in [0, 1]");
  if (!(lambda >= 0.0 && lambda <= 1.0)) throw ConfigError("ppo.lambda must lie in [0, 1]");
  if (!(learning_rate >= 0.0) || !(critic_learning_rate >= 0.0)) throw ConfigError("learning rates must be >= 0");
  if (max_episode_steps < 1) throw ConfigError("ppo.max_episode_steps must be positive");
  if (prenormalization_steps < kMinPrenormalizationSteps) {
    throw ConfigError("ppo.prenormalization_steps must be at least " + std::to_string(kMinPrenormalizationSteps));
  }
  if (!(head_scale > 0.0)) throw ConfigError("ppo.head_scale must be positive");
  if (!(value_scale >= 0.0)) throw ConfigError("ppo.value_scale must be non-negative");
}

double PpoConfig::resolved_value_scale() const {
  if (value_scale > 0.0) return value_scale;
  return gamma < 1.0 ? 1.0 / (1.0 - gamma) : 1.0;
}

BatchEvaluation evaluate_batch(const nn::Network& policy, const nn::Network& critic, const TrajectoryBatch& batch,
                               double clip, bool gradients) {
  const Eigen::Index steps = batch.steps();
  const Eigen::Index members = batch.members();
  BatchEvaluation out;
  out.valid = batch.valid_count();
  if (out.valid == 0.0) throw UsageError("batch has no valid steps");
  const double inv_n = 1.0 / out.valid;
  const double inv_var = 1.0 / (nn::kActionStd * nn::kActionStd);

  nn::RecurrentState ps = policy.initial_state(members);
  nn::RecurrentState cs = critic.initial_state(members);
  std::vector<nn::StepCache> pcache(gradients ? static_cast<std::size_t>(steps) : 0);
  std::vector<nn::StepCache> ccache(gradients ? static_cast<std::size_t>(steps) : 0);
  std::vector<Eigen::MatrixXd> pup, cup;
  if (gradients) {
    pup.reserve(static_cast<std::size_t>(steps));
    cup.reserve(static_cast<std::size_t>(steps));
  }
  double objective = 0.0, value_loss = 0.0, clipped = 0.0;
  for (Eigen::Index t = 0; t < steps; ++t) {
    const auto u = static_cast<std::size_t>(t);
    const Eigen::RowVectorXd& mask = batch.mask[u];
    const Eigen::MatrixXd mean = policy.step(batch.observations[u], ps, gradients ? &pcache[u] : nullptr);
    const Eigen::MatrixXd value = critic.step(batch.observations[u], cs, gradients ? &ccache[u] : nullptr);
    Eigen::RowVectorXd logp = nn::gaussian_logprob(mean, batch.actions[u]);
    // Padded columns hold arbitrary values; pin them to the identity ratio.
    for (Eigen::Index j = 0; j < members; ++j) {
      if (mask[j] == 0.0) logp[j] = batch.old_logprobs[u][j];
    }
    const Eigen::RowVectorXd ratio = probability_ratio(logp, batch.old_logprobs[u]);
    const Eigen::RowVectorXd& adv = batch.advantages[u];
    objective += clipped_objective(ratio, adv, clip).cwiseProduct(mask).sum();
    clipped += (((ratio.array() - 1.0).abs() > clip).cast<double>() * mask.array()).sum();
    const Eigen::RowVectorXd err = value.row(0) - batch.returns[u];
    value_loss += err.cwiseAbs2().cwiseProduct(mask).sum();
    out.ratios.push_back(ratio);
    if (gradients) {
      // d(-objective)/d mean = -(1/n) * dmin/dr * r * (a - mean) / sigma^2
      const Eigen::RowVectorXd coeff =
          (-inv_n * inv_var) * clipped_objective_grad(ratio, adv, clip).cwiseProduct(ratio).cwiseProduct(mask);
      pup.push_back((batch.actions[u] - mean).array().rowwise() * coeff.array());
      cup.push_back((2.0 * inv_n) * err.cwiseProduct(mask));
    }
  }
  out.objective = objective * inv_n;
  out.value_loss = value_loss * inv_n;
  out.clip_fraction = clipped * inv_n;
  if (gradients) {
    out.policy_grad = policy.bptt_gradients(pcache, pup, batch.mask);
    out.critic_grad = critic.bptt_gradients(ccache, cup, batch.mask);
  }
  return out;
}

double batch_kl(const nn::Network& policy, const TrajectoryBatch& batch) {
  nn::RecurrentState ps = policy.initial_state(batch.members());
  double sum = 0.0;
  for (Eigen::Index t = 0; t < batch.steps(); ++t) {
    const auto u = static_cast<std::size_t>(t);
    const Eigen::MatrixXd mean = policy.step(batch.observations[u], ps);
    sum += gaussian_kl(batch.old_means[u], mean).cwiseProduct(batch.mask[u]).sum();
  }
  return sum / batch.valid_count();
}

nn::NetworkSpec critic_spec_for(const nn::NetworkSpec& policy, double value_scale) {
  nn::NetworkSpec spec = policy;
  spec.output_dim = 1;
  spec.output_scale = value_scale;
  return spec;
}

Trainer::Trainer(env::EnvFactory factory, nn::NetworkSpec policy_spec, PpoConfig config, std::uint64_t seed,
                 int workers)
    : factory_(std::move(factory)),
      config_(config),
      seed_(seed),
      workers_(workers),
      policy_(policy_spec),
      critic_(critic_spec_for(policy_spec, config.resolved_value_scale())),
      normalizer_(Normalizer::identity(policy_spec.input_dim)) {
  config_.validate();
  initialize();
}

void Trainer::initialize() {
  Rng policy_rng(derive_seed(seed_, {kPolicyInit}));
  Rng critic_rng(derive_seed(seed_, {kCriticInit}));
  policy_.initialize(policy_rng, config_.head_scale);
  critic_.initialize(critic_rng, config_.head_scale);
  policy_adam_ = nn::AdamState::fresh(policy_.parameter_count(), {.learning_rate = config_.learning_rate});
  critic_adam_ = nn::AdamState::fresh(critic_.parameter_count(), {.learning_rate = config_.critic_learning_rate});
  iteration_ = 0;
  timesteps_ = 0;
}

void Trainer::prenormalize() {
  normalizer_ = collect_prenormalization_stats(policy_, factory_, config_.prenormalization_steps,
                                               derive_seed(seed_, {kPrenormalization}), workers_,
                                               config_.max_episode_steps);
  prenormalized_ = true;
}

void Trainer::set_normalizer(Normalizer normalizer) {
  if (normalizer.dim() != policy_.input_dim()) throw ConfigError("normalizer size does not match the policy");
  normalizer_ = std::move(normalizer);
  prenormalized_ = true;
}

void Trainer::set_progress(std::int64_t iteration, std::int64_t timesteps) {
  iteration_ = iteration;
  timesteps_ = timesteps;
}

IterationMetrics Trainer::train_iteration() {
  if (!prenormalized_) throw UsageError("train_iteration called before prenormalization");
  const auto start = std::chrono::steady_clock::now();

  RolloutOptions ro;
  ro.seed = derive_seed(seed_, {kRollouts, static_cast<std::uint64_t>(iteration_)});
  ro.episodes = config_.rollouts;
  ro.min_steps = config_.timesteps_per_iteration;
  ro.max_steps = config_.max_episode_steps;
  ro.workers = workers_;
  RolloutBuffer buffer = collect_rollouts(policy_, critic_, factory_, normalizer_, ro);
  estimate_advantages(buffer, config_.gamma, config_.lambda, config_.normalize_advantages);

  IterationMetrics m;
  m.episodes = static_cast<int>(buffer.trajectories.size());
  m.iteration_steps = buffer.total_steps();
  m.mean_reward = buffer.mean_episode_reward();
  m.mean_length = buffer.mean_episode_length();

  const Eigen::VectorXd policy_backup = policy_.parameters().flat();
  const Eigen::VectorXd critic_backup = critic_.parameters().flat();
  const nn::AdamState policy_adam_backup = policy_adam_, critic_adam_backup = critic_adam_;
  try {
    optimize(buffer, m);
  } catch (const NumericalError&) {
    policy_.parameters().flat() = policy_backup;
    critic_.parameters().flat() = critic_backup;
    policy_adam_ = policy_adam_backup;
    critic_adam_ = critic_adam_backup;
    throw;
  }
  ++iteration_;
  timesteps_ += m.iteration_steps;
  m.iteration = iteration_;
  m.timesteps = timesteps_;
  m.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return m;
}

void Trainer::optimize(RolloutBuffer& buffer, IterationMetrics& m) {
  Rng rng(derive_seed(seed_, {kBatches, static_cast<std::uint64_t>(iteration_)}));
  const bool recurrent = policy_.recurrent();
  const auto steps = recurrent ? std::vector<std::pair<std::size_t, Eigen::Index>>{} : timestep_index(buffer);
  double clip_sum = 0.0, objective_sum = 0.0, value_sum = 0.0, valid_sum = 0.0;
  for (int epoch = 0; epoch < config_.epochs && !m.kl_stopped; ++epoch) {
    const std::size_t count = recurrent ? buffer.trajectories.size() : steps.size();
    const std::size_t size = static_cast<std::size_t>(recurrent ? config_.trajectory_batch : config_.timestep_batch);
    for (const std::vector<std::size_t>& group : permuted_batches(count, size, rng)) {
      TrajectoryBatch batch;
      if (recurrent) {
        batch = make_trajectory_batch(buffer, group);
      } else {
        std::vector<std::pair<std::size_t, Eigen::Index>> picks;
        picks.reserve(group.size());
        for (std::size_t k : group) picks.push_back(steps[k]);
        batch = make_timestep_batch(buffer, picks);
      }
      const BatchEvaluation e = evaluate_batch(policy_, critic_, batch, config_.clip, true);
      if (!std::isfinite(e.objective) || !std::isfinite(e.value_loss)) {
        throw NumericalError("non-finite loss in iteration " + std::to_string(iteration_ + 1));
      }
      nn::adam_update(policy_.parameters(), e.policy_grad, policy_adam_);
      nn::adam_update(critic_.parameters(), e.critic_grad, critic_adam_);
      ++m.batches;
      clip_sum += e.clip_fraction * e.valid;
      objective_sum += e.objective * e.valid;
      value_sum += e.value_loss * e.valid;
      valid_sum += e.valid;
      m.kl = batch_kl(policy_, batch);
      if (m.kl > config_.kl_threshold) {
        m.kl_stopped = true;
        break;
      }
    }
    if (!m.kl_stopped) ++m.epochs_completed;
  }
  if (valid_sum > 0.0) {
    m.clip_fraction = clip_sum / valid_sum;
    m.policy_objective = objective_sum / valid_sum;
    m.value_loss = value_sum / valid_sum;
  }
}

}  // namespace mloc::rppo
