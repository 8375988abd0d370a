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

#include "mloc/nn/adam.hpp"

#include <cmath>

#include "mloc/common/error.hpp"

namespace mloc::nn {

AdamState AdamState::fresh(std::size_t parameter_count, AdamConfig config) {
  const auto n = static_cast<Eigen::Index>(parameter_count);
  return {config, Eigen::VectorXd::Zero(n), Eigen::VectorXd::Zero(n), 0};
}

void adam_update(ParameterStore& params, const Eigen::VectorXd& grads, AdamState& state) {
  Eigen::VectorXd& theta = params.flat();
  if (grads.size() != theta.size() || state.first_moment.size() != theta.size() ||
      state.second_moment.size() != theta.size()) {
    throw ConfigError("adam: gradient, moment and parameter sizes differ");
  }
  const AdamConfig& cfg = state.config;
  if (!(cfg.learning_rate >= 0.0)) throw ConfigError("adam: learning rate must be non-negative");
  for (Eigen::Index k = 0; k < grads.size(); ++k) {
    if (!std::isfinite(grads[k])) {
      throw NumericalError("adam: non-finite gradient for parameter '" + params.name_at(static_cast<std::size_t>(k)) +
                           "'");
    }
  }

  ++state.step;
  const double t = static_cast<double>(state.step);
  const double correction1 = 1.0 - std::pow(cfg.beta1, t);
  const double correction2 = 1.0 - std::pow(cfg.beta2, t);
  state.first_moment = cfg.beta1 * state.first_moment + (1.0 - cfg.beta1) * grads;
  state.second_moment = cfg.beta2 * state.second_moment + (1.0 - cfg.beta2) * grads.cwiseAbs2();
  if (cfg.learning_rate == 0.0) return;
  theta.array() -= cfg.learning_rate * (state.first_moment.array() / correction1) /
                   ((state.second_moment.array() / correction2).sqrt() + cfg.epsilon);
}

}  // namespace mloc::nn
