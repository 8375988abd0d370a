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

#include "mloc/env/environment.hpp"

namespace mloc::env {

struct DiagnosticConfig {
  DiagnosticParams params;  // defaults before randomization
  dynrand::RandomizationSpec randomization = dynrand::RandomizationSpec::diagnostic_default();
  double dt = 0.03;
  double force_limit = 10.0;  // N
  double command_lo = 0.0;    // m/s
  double command_hi = 1.5;
  int command_interval = 100;  // steps between command resamples
  int episode_steps = 300;

  void validate() const;
};

struct DiagnosticState {
  double velocity = 0.0;
  double command = 0.0;
  double mass = 1.0;
  double damping = 1.0;
  int steps = 0;
};

/// Exact zero-order-hold solution of m dv/dt = u - c v over one interval.
double diagnostic_velocity(double v, double force, double mass, double damping, double dt);

/// Applies the clamped force for one interval, scores the new velocity
/// against the command with exp(-(v - v_cmd)^2), resamples the command every
/// `command_interval` steps and ends the episode after `episode_steps`.
StepResult diagnostic_step(DiagnosticState& state, double force, const DiagnosticConfig& config, Rng& rng);

/// Cart whose mass and damping are hidden; the policy observes only the
/// commanded and actual velocity and must infer the dynamics from history.
class DiagnosticEnv final : public Environment {
 public:
  explicit DiagnosticEnv(DiagnosticConfig config = {});

  std::string name() const override { return "diagnostic"; }
  int observation_dim() const override { return 2; }
  int action_dim() const override { return 1; }
  const dynrand::RandomizationSpec& randomization() const override { return config_.randomization; }

  using Environment::reset;
  Eigen::VectorXd reset(const dynrand::DynamicsParameters& params, Rng& rng) override;
  StepResult step(const Eigen::VectorXd& action) override;

  const dynrand::DynamicsParameters& parameters() const override { return params_; }
  int phase() const override { return 0; }
  int phase_length() const override { return 1; }
  double time() const override { return state_.steps * config_.dt; }
  std::vector<std::string> state_names() const override { return {"velocity", "command"}; }
  std::vector<double> state_values() const override { return {state_.velocity, state_.command}; }

  const DiagnosticState& state() const { return state_; }

 private:
  Eigen::VectorXd observe() const;

  DiagnosticConfig config_;
  DiagnosticState state_;
  dynrand::DynamicsParameters params_;
  Rng rng_;
  bool done_ = true;
};

}  // namespace mloc::env
