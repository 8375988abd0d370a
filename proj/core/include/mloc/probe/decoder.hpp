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
#include <string>
#include <vector>

#include "mloc/nn/network.hpp"
#include "mloc/probe/dataset.hpp"

namespace mloc::probe {

struct DecoderOptions {
  int hidden = 64;
  int epochs = 30;
  int batch = 256;
  double learning_rate = 1e-3;
  std::uint64_t seed = 0;
};

/// Dense tanh regressor from a latent vector to the dynamics parameters.
/// Inputs are standardized with training statistics and targets are scaled
/// to [0, 1] by their randomization range.
class Decoder {
 public:
  Decoder(int latent_dim, const dynrand::RandomizationSpec& spec, const DecoderOptions& options);

  /// Native-unit predictions, one column per latent column.
  Eigen::MatrixXd predict(const Eigen::MatrixXd& latents) const;

  const nn::Network& network() const { return net_; }
  nn::Network& network() { return net_; }

 private:
  friend Decoder train_decoder(const HiddenStateSplit&, const dynrand::RandomizationSpec&, const DecoderOptions&);

  nn::Network net_;
  Eigen::VectorXd input_mean_;
  Eigen::VectorXd input_std_;
  Eigen::VectorXd target_lo_;
  Eigen::VectorXd target_scale_;
};

/// Minibatch Adam on the mean squared error of the scaled targets for a fixed
/// number of epochs. Throws NumericalError if the loss becomes non-finite.
Decoder train_decoder(const HiddenStateSplit& train, const dynrand::RandomizationSpec& spec,
                      const DecoderOptions& options);

struct ParameterMetrics {
  std::string name;
  double mae = 0.0;  // native units
  double mpe = 0.0;  // percent of the range half-width
  double baseline_mae = 0.0;
  double baseline_mpe = 0.0;
};

struct ProbeMetrics {
  std::vector<ParameterMetrics> parameters;

  const ParameterMetrics& at(const std::string& name) const;
};

/// MAE and MPE = mean(|pred - true| / half-width) * 100 of `predictions`
/// against `truth`, next to the same errors of always predicting
/// `baseline` (the training mean).
ProbeMetrics score_predictions(const Eigen::MatrixXd& predictions, const Eigen::MatrixXd& truth,
                               const Eigen::VectorXd& baseline, const dynrand::RandomizationSpec& spec);

ProbeMetrics evaluate_decoder(const Decoder& decoder, const HiddenStateDataset& dataset);

}  // namespace mloc::probe
