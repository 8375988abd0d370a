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

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "mloc/common/rng.hpp"
#include "mloc/dynrand/randomization.hpp"

namespace mloc::env {

struct StepResult {
  Eigen::VectorXd observation;
  double reward = 0.0;
  bool done = false;
  bool truncated = false;  // ended by a time limit rather than a failure
  bool failed = false;     // numerical breakdown of the simulation
};

/// Single-owner episodic environment. Hidden dynamics are fixed at reset.
class Environment {
 public:
  virtual ~Environment() = default;

  virtual std::string name() const = 0;
  virtual int observation_dim() const = 0;
  virtual int action_dim() const = 0;
  virtual const dynrand::RandomizationSpec& randomization() const = 0;

  virtual Eigen::VectorXd reset(const dynrand::DynamicsParameters& params, Rng& rng) = 0;
  virtual StepResult step(const Eigen::VectorXd& action) = 0;

  /// Samples fresh dynamics from randomization() and resets.
  Eigen::VectorXd reset(Rng& rng) {
    const dynrand::DynamicsParameters params = dynrand::sample_parameters(randomization(), rng);
    return reset(params, rng);
  }

  virtual const dynrand::DynamicsParameters& parameters() const = 0;
  virtual int phase() const = 0;
  virtual int phase_length() const = 0;
  virtual double time() const = 0;

  /// Flat physical state for trajectory recordings.
  virtual std::vector<std::string> state_names() const = 0;
  virtual std::vector<double> state_values() const = 0;
};

using EnvFactory = std::function<std::unique_ptr<Environment>()>;

}  // namespace mloc::env
