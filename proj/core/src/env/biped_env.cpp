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

#include "mloc/env/biped_env.hpp"

#include <cmath>
#include <numbers>

#include "mloc/common/error.hpp"

namespace mloc::env {

BipedEnvConfig BipedEnvConfig::defaults() {
  BipedEnvConfig config;
  config.model.stand_posture = config.gait.stand_posture();
  config.model.neutral_offset = calibrate_neutral_offset(config.model);
  return config;
}

void BipedEnvConfig::validate() const {
  model.validate();
  gait.validate();
  randomization.validate();
  if (randomization.domain != dynrand::Domain::kBiped) {
    throw ValidationError("biped env: randomization spec targets another domain");
  }
  if (!(init_noise >= 0.0) || !(observation_noise >= 0.0) || !std::isfinite(command_speed)) {
    throw ValidationError("biped env: noise levels must be non-negative and the command finite");
  }
}

bool check_termination(const BipedState& state, double standing_height) {
  if (state.failed) return true;
  return state.torso_height() < 0.6 * standing_height || std::abs(state.pitch()) > 1.0;
}

TrackingErrors tracking_errors(const BipedState& state, const GaitReference& ref) {
  TrackingErrors e;
  for (int j = 0; j < kNumJoints; ++j) {
    const double d = state.q[3 + j] - ref.joints[static_cast<std::size_t>(j)];
    e.joints += d * d;
  }
  e.velocity = (state.qd[0] - ref.speed) * (state.qd[0] - ref.speed);
  e.position = (state.q[0] - ref.forward_position) * (state.q[0] - ref.forward_position);
  e.orientation = (state.q[2] - ref.pitch) * (state.q[2] - ref.pitch);
  return e;
}

Eigen::VectorXd biped_observation(const BipedState& s, double command_speed, int phase_length) {
  Eigen::VectorXd obs(kBipedObservationDim);
  const double angle = 2.0 * std::numbers::pi * s.phase / phase_length;
  obs << command_speed, std::sin(angle), std::cos(angle), s.q[2], s.qd[2], s.q[1], s.qd[0], s.q[3], s.q[4], s.q[5],
      s.q[6], s.qd[3], s.qd[4], s.qd[5], s.qd[6];
  return obs;
}

BipedEnv::BipedEnv(BipedEnvConfig config) : config_(std::move(config)), model_(config_.model) {
  config_.validate();
  standing_height_ = standing_state(config_.model, config_.model.stand_posture).torso_height();
}

Eigen::VectorXd BipedEnv::reset(const dynrand::DynamicsParameters& params, Rng& rng) {
  model_ = dynrand::apply_parameters(params, config_.randomization, config_.model);
  params_ = params;
  JointVector joints = config_.model.stand_posture;
  for (double& q : joints) q += config_.init_noise > 0.0 ? rng.uniform(-config_.init_noise, config_.init_noise) : 0.0;
  state_ = standing_state(model_, joints);
  noise_rng_ = Rng(rng.next());
  done_ = check_termination(state_, standing_height_);
  return observe();
}

StepResult BipedEnv::step(const Eigen::VectorXd& action) {
  if (done_) throw UsageError("biped env: step called on a finished episode");
  if (action.size() != kNumJoints || !action.allFinite()) throw UsageError("biped env: expected 4 finite PD targets");
  JointVector targets;
  for (int j = 0; j < kNumJoints; ++j) {
    targets[static_cast<std::size_t>(j)] = model_.neutral_offset[static_cast<std::size_t>(j)] + action[j];
  }
  for (int k = 0; k < kSubstepsPerPolicyStep && !state_.failed; ++k) {
    JointVector tau;
    for (int j = 0; j < kNumJoints; ++j) {
      const auto u = static_cast<std::size_t>(j);
      tau[u] = pd_torque(targets[u], state_.q[3 + j], state_.qd[3 + j], model_.kp[u], model_.kd[u],
                         model_.torque_limit[u]);
    }
    physics_substep(state_, tau, model_);
  }
  ++state_.steps;
  state_.phase = static_cast<int>(state_.steps % config_.gait.phase_length);

  StepResult result;
  result.failed = state_.failed;
  result.reward = state_.failed ? 0.0
                                : compute_reward(tracking_errors(state_, reference_gait_state(config_.gait, state_.steps)));
  result.done = done_ = check_termination(state_, standing_height_);
  result.observation = state_.failed ? Eigen::VectorXd::Zero(kBipedObservationDim) : observe();
  return result;
}

Eigen::VectorXd BipedEnv::observe() {
  Eigen::VectorXd obs = biped_observation(state_, config_.command_speed, config_.gait.phase_length);
  if (config_.observation_noise > 0.0) {
    for (Eigen::Index k = 3; k < obs.size(); ++k) obs[k] += config_.observation_noise * noise_rng_.normal();
  }
  return obs;
}

std::vector<std::string> BipedEnv::state_names() const {
  return {"x", "z", "pitch", "left_hip", "left_knee", "right_hip", "right_knee",
          "xd", "zd", "pitchd", "left_hipd", "left_kneed", "right_hipd", "right_kneed"};
}

std::vector<double> BipedEnv::state_values() const {
  std::vector<double> out(state_.q.data(), state_.q.data() + kNumCoords);
  out.insert(out.end(), state_.qd.data(), state_.qd.data() + kNumCoords);
  return out;
}

}  // namespace mloc::env
