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

#include "mloc/probe/decoder.hpp"

#include <cmath>
#include <numeric>
#include <utility>

#include "mloc/common/error.hpp"
#include "mloc/common/rng.hpp"
#include "mloc/nn/adam.hpp"

namespace mloc::probe {
namespace {

constexpr double kInputStdFloor = 1e-6;

}  // namespace

Decoder::Decoder(int latent_dim, const dynrand::RandomizationSpec& spec, const DecoderOptions& options)
    : net_(nn::NetworkSpec::feedforward(latent_dim, static_cast<int>(spec.size()), options.hidden)),
      input_mean_(Eigen::VectorXd::Zero(latent_dim)),
      input_std_(Eigen::VectorXd::Ones(latent_dim)),
      target_lo_(static_cast<Eigen::Index>(spec.size())),
      target_scale_(static_cast<Eigen::Index>(spec.size())) {
  if (spec.size() == 0) throw ConfigError("decoder needs at least one target parameter");
  for (std::size_t p = 0; p < spec.size(); ++p) {
    const dynrand::Entry& e = spec.entries[p];
    target_lo_[static_cast<Eigen::Index>(p)] = e.lo;
    target_scale_[static_cast<Eigen::Index>(p)] = e.hi > e.lo ? e.hi - e.lo : 1.0;
  }
  Rng rng(options.seed);
  net_.initialize(rng);
}

Eigen::MatrixXd Decoder::predict(const Eigen::MatrixXd& latents) const {
  const Eigen::MatrixXd x = (latents.colwise() - input_mean_).array().colwise() / input_std_.array();
  nn::RecurrentState state = net_.initial_state(x.cols());
  const Eigen::MatrixXd scaled = net_.step(x, state);
  return (scaled.array().colwise() * target_scale_.array()).colwise() + target_lo_.array();
}

Decoder train_decoder(const HiddenStateSplit& train, const dynrand::RandomizationSpec& spec,
                      const DecoderOptions& options) {
  const Eigen::Index n = train.size();
  if (n < 1) throw UsageError("decoder needs training records");
  if (options.epochs < 1 || options.batch < 1 || !(options.learning_rate > 0.0)) {
    throw ConfigError("decoder epochs, batch and learning rate must be positive");
  }
  Decoder decoder(static_cast<int>(train.latents.rows()), spec, options);
  decoder.input_mean_ = train.latents.rowwise().mean();
  const Eigen::MatrixXd centered = train.latents.colwise() - decoder.input_mean_;
  decoder.input_std_ = (centered.array().square().rowwise().sum() / static_cast<double>(n)).sqrt().max(kInputStdFloor);
  const Eigen::MatrixXd x = centered.array().colwise() / decoder.input_std_.array();
  const Eigen::MatrixXd y =
      (train.targets.colwise() - decoder.target_lo_).array().colwise() / decoder.target_scale_.array();

  nn::Network& net = decoder.net_;
  nn::AdamState adam = nn::AdamState::fresh(net.parameter_count(), {options.learning_rate, 0.9, 0.999, 1e-8});
  Rng rng(derive_seed(options.seed, {1}));
  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  const Eigen::Index outputs = y.rows();

  for (int epoch = 0; epoch < options.epochs; ++epoch) {
    for (std::size_t i = order.size() - 1; i > 0; --i) std::swap(order[i], order[rng.next() % (i + 1)]);
    for (Eigen::Index start = 0; start < n; start += options.batch) {
      const Eigen::Index size = std::min<Eigen::Index>(options.batch, n - start);
      Eigen::MatrixXd xb(x.rows(), size), yb(outputs, size);
      for (Eigen::Index k = 0; k < size; ++k) {
        xb.col(k) = x.col(order[static_cast<std::size_t>(start + k)]);
        yb.col(k) = y.col(order[static_cast<std::size_t>(start + k)]);
      }
      nn::RecurrentState state = net.initial_state(size);
      nn::StepCache cache;
      const Eigen::MatrixXd residual = net.step(xb, state, &cache) - yb;
      const double loss = residual.squaredNorm() / static_cast<double>(size * outputs);
      if (!std::isfinite(loss)) throw NumericalError("decoder loss became non-finite in epoch " + std::to_string(epoch));
      const Eigen::MatrixXd upstream = 2.0 * residual / static_cast<double>(size * outputs);
      const Eigen::RowVectorXd mask = Eigen::RowVectorXd::Ones(size);
      const Eigen::VectorXd grad = net.bptt_gradients({&cache, 1}, {&upstream, 1}, {&mask, 1});
      nn::adam_update(net.parameters(), grad, adam);
    }
  }
  return decoder;
}

const ParameterMetrics& ProbeMetrics::at(const std::string& name) const {
  for (const ParameterMetrics& m : parameters) {
    if (m.name == name) return m;
  }
  throw UsageError("no metrics for parameter " + name);
}

ProbeMetrics score_predictions(const Eigen::MatrixXd& predictions, const Eigen::MatrixXd& truth,
                               const Eigen::VectorXd& baseline, const dynrand::RandomizationSpec& spec) {
  if (predictions.rows() != truth.rows() || predictions.cols() != truth.cols() ||
      truth.rows() != static_cast<Eigen::Index>(spec.size()) || baseline.size() != truth.rows()) {
    throw ConfigError("prediction, truth and spec sizes differ");
  }
  if (truth.cols() == 0) throw UsageError("no records to score");
  ProbeMetrics out;
  const double n = static_cast<double>(truth.cols());
  for (Eigen::Index p = 0; p < truth.rows(); ++p) {
    const dynrand::Entry& e = spec.entries[static_cast<std::size_t>(p)];
    const double half = e.half_width() > 0.0 ? e.half_width() : 1.0;
    ParameterMetrics m;
    m.name = e.target;
    m.mae = (predictions.row(p) - truth.row(p)).cwiseAbs().sum() / n;
    m.baseline_mae = (truth.row(p).array() - baseline[p]).abs().sum() / n;
    m.mpe = 100.0 * m.mae / half;
    m.baseline_mpe = 100.0 * m.baseline_mae / half;
    out.parameters.push_back(m);
  }
  return out;
}

ProbeMetrics evaluate_decoder(const Decoder& decoder, const HiddenStateDataset& dataset) {
  return score_predictions(decoder.predict(dataset.test.latents), dataset.test.targets,
                           dataset.train.targets.rowwise().mean(), dataset.spec);
}

}  // namespace mloc::probe
