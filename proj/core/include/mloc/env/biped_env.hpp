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

#include "mloc/env/biped_dynamics.hpp"
#include "mloc/env/environment.hpp"
#include "mloc/env/reference_gait.hpp"
#include "mloc/env/reward.hpp"

namespace mloc::env {

inline constexpr int kBipedObservationDim = 15;

struct BipedEnvConfig {
  BipedModel model;  // defaults before randomization
  ReferenceGait gait;
  dynrand::RandomizationSpec randomization = dynrand::RandomizationSpec::biped_default();
  double command_speed = 1.0;      // m/s, observed as f_vel
  double init_noise = 0.02;        // rad, uniform half-width on joint angles at reset
  double observation_noise = 0.0;  // std of gaussian noise on the physical observations

  /// Model with the standing posture taken from the gait and a calibrated
  /// neutral offset.
  static BipedEnvConfig defaults();
  void validate() const;
};

/// Termination: torso below 60% of standing height, |pitch| > 1 rad, or a
/// numerical failure.
bool check_termination(const BipedState& state, double standing_height);

TrackingErrors tracking_errors(const BipedState& state, const GaitReference& ref);

/// Observation layout: f_vel, sin clock, cos clock, pitch, pitch rate,
/// torso height, forward velocity, 4 joint angles, 4 joint velocities.
Eigen::VectorXd biped_observation(const BipedState& state, double command_speed, int phase_length);

class BipedEnv final : public Environment {
 public:
  explicit BipedEnv(BipedEnvConfig config);

  std::string name() const override { return "biped"; }
  int observation_dim() const override { return kBipedObservationDim; }
  int action_dim() const override { return kNumJoints; }
  const dynrand::RandomizationSpec& randomization() const override { return config_.randomization; }

  using Environment::reset;
  Eigen::VectorXd reset(const dynrand::DynamicsParameters& params, Rng& rng) override;
  /// Adds `action` to the neutral offset and runs 60 PD/physics substeps.
  StepResult step(const Eigen::VectorXd& action) override;

  const dynrand::DynamicsParameters& parameters() const override { return params_; }
  int phase() const override { return state_.phase; }
  int phase_length() const override { return config_.gait.phase_length; }
  double time() const override { return state_.time(); }
  std::vector<std::string> state_names() const override;
  std::vector<double> state_values() const override;

  const BipedState& state() const { return state_; }
  const BipedModel& model() const { return model_; }
  const BipedEnvConfig& config() const { return config_; }
  double standing_height() const { return standing_height_; }

 private:
  Eigen::VectorXd observe();

  BipedEnvConfig config_;
  BipedModel model_;
  BipedState state_;
  dynrand::DynamicsParameters params_;
  double standing_height_ = 0.0;
  bool done_ = true;
  Rng noise_rng_;
};

}  // namespace mloc::env
