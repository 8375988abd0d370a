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

#include "mloc/env/diagnostic_env.hpp"

#include <algorithm>
#include <cmath>

#include "mloc/common/error.hpp"

namespace mloc::env {

void DiagnosticConfig::validate() const {
  params.validate();
  randomization.validate();
  if (randomization.domain != dynrand::Domain::kDiagnostic) {
    throw ValidationError("diagnostic env: randomization spec targets another domain");
  }
  if (!(dt > 0.0) || !(force_limit > 0.0) || command_lo > command_hi || command_interval <= 0 || episode_steps <= 0) {
    throw ValidationError("diagnostic env: invalid timing, force or command settings");
  }
}

double diagnostic_velocity(double v, double force, double mass, double damping, double dt) {
  const double decay = std::exp(-damping * dt / mass);
  return v * decay + (force / damping) * (1.0 - decay);
}

StepResult diagnostic_step(DiagnosticState& state, double force, const DiagnosticConfig& config, Rng& rng) {
  const double u = std::clamp(force, -config.force_limit, config.force_limit);
  state.velocity = diagnostic_velocity(state.velocity, u, state.mass, state.damping, config.dt);
  StepResult result;
  const double err = state.velocity - state.command;
  result.reward = std::exp(-err * err);
  ++state.steps;
  if (state.steps >= config.episode_steps) {
    result.done = true;
    result.truncated = true;
  } else if (state.steps % config.command_interval == 0) {
    state.command = rng.uniform(config.command_lo, config.command_hi);
  }
  result.observation = Eigen::Vector2d(state.command, state.velocity);
  return result;
}

DiagnosticEnv::DiagnosticEnv(DiagnosticConfig config) : config_(std::move(config)) { config_.validate(); }

Eigen::VectorXd DiagnosticEnv::reset(const dynrand::DynamicsParameters& params, Rng& rng) {
  const DiagnosticParams hidden = dynrand::apply_parameters(params, config_.randomization, config_.params);
  params_ = params;
  rng_ = Rng(rng.next());
  state_ = DiagnosticState{};
  state_.mass = hidden.mass;
  state_.damping = hidden.damping;
  state_.command = rng_.uniform(config_.command_lo, config_.command_hi);
  done_ = false;
  return observe();
}

StepResult DiagnosticEnv::step(const Eigen::VectorXd& action) {
  if (done_) throw UsageError("diagnostic env: step called on a finished episode");
  if (action.size() != 1 || !std::isfinite(action[0])) throw UsageError("diagnostic env: expected one finite force");
  StepResult result = diagnostic_step(state_, action[0], config_, rng_);
  done_ = result.done;
  return result;
}

Eigen::VectorXd DiagnosticEnv::observe() const { return Eigen::Vector2d(state_.command, state_.velocity); }

}  // namespace mloc::env
