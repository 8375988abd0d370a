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

#include "mloc/nn/network.hpp"

#include <cmath>

#include "mloc/common/error.hpp"

namespace mloc::nn {
namespace {

using Eigen::Index;
using Eigen::MatrixXd;

MatrixXd sigmoid(const MatrixXd& z) { return (1.0 + (-z.array()).exp()).inverse().matrix(); }

void require_finite(const MatrixXd& m, const std::string& layer) {
  if (!m.allFinite()) throw NumericalError("non-finite activation in layer '" + layer + "'");
}

}  // namespace

std::string to_string(Family family) { return family == Family::kLstm ? "lstm" : "ff"; }

Family family_from_string(const std::string& text) {
  if (text == "lstm") return Family::kLstm;
  if (text == "ff") return Family::kFeedforward;
  throw ConfigError("unknown policy family '" + text + "' (expected lstm or ff)");
}

NetworkSpec NetworkSpec::lstm(int input_dim, int output_dim, int units) {
  return {Family::kLstm, input_dim, output_dim, {units, units}};
}

NetworkSpec NetworkSpec::feedforward(int input_dim, int output_dim, int units) {
  return {Family::kFeedforward, input_dim, output_dim, {units, units}};
}

Network::Network(NetworkSpec spec) : spec_(std::move(spec)) {
  if (spec_.input_dim <= 0 || spec_.output_dim <= 0 || spec_.hidden.empty() || !(spec_.output_scale > 0.0)) {
    throw ConfigError("network needs positive input/output sizes and at least one hidden layer");
  }
  const bool lstm = recurrent();
  int in = spec_.input_dim;
  for (std::size_t l = 0; l < spec_.hidden.size(); ++l) {
    const int units = spec_.hidden[l];
    if (units <= 0) throw ConfigError("hidden layer sizes must be positive");
    Layer layer;
    layer.name = (lstm ? "lstm" : "dense") + std::to_string(l);
    layer.in = in;
    layer.units = units;
    const std::size_t rows = static_cast<std::size_t>(lstm ? 4 * units : units);
    layer.w_in = params_.add(layer.name + ".w_in", {rows, static_cast<std::size_t>(in)});
    if (lstm) layer.w_rec = params_.add(layer.name + ".w_rec", {rows, static_cast<std::size_t>(units)});
    layer.bias = params_.add(layer.name + ".bias", {rows});
    layers_.push_back(layer);
    in = units;
  }
  head_w_ = params_.add("head.weight", {static_cast<std::size_t>(spec_.output_dim), static_cast<std::size_t>(in)});
  head_b_ = params_.add("head.bias", {static_cast<std::size_t>(spec_.output_dim)});
}

void Network::initialize(Rng& rng, double head_scale) {
  Eigen::VectorXd& w = params_.flat();
  auto fill = [&](std::size_t offset, std::size_t count, double bound) {
    for (std::size_t k = 0; k < count; ++k) w[static_cast<Index>(offset + k)] = rng.uniform(-bound, bound);
  };
  for (const Layer& layer : layers_) {
    if (recurrent()) {
      const double bound = 1.0 / std::sqrt(static_cast<double>(layer.units));
      const std::size_t rows = 4 * static_cast<std::size_t>(layer.units);
      fill(layer.w_in, rows * static_cast<std::size_t>(layer.in), bound);
      fill(layer.w_rec, rows * static_cast<std::size_t>(layer.units), bound);
      w.segment(static_cast<Index>(layer.bias), static_cast<Index>(rows)).setZero();
      w.segment(static_cast<Index>(layer.bias) + layer.units, layer.units).setConstant(1.0);
    } else {
      const double bound = 1.0 / std::sqrt(static_cast<double>(layer.in));
      fill(layer.w_in, static_cast<std::size_t>(layer.units) * static_cast<std::size_t>(layer.in), bound);
      w.segment(static_cast<Index>(layer.bias), layer.units).setZero();
    }
  }
  const int last = layers_.back().units;
  fill(head_w_, static_cast<std::size_t>(spec_.output_dim * last), head_scale / std::sqrt(static_cast<double>(last)));
  w.segment(static_cast<Index>(head_b_), spec_.output_dim).setZero();
}

RecurrentState Network::initial_state(Index batch) const {
  RecurrentState state;
  if (!recurrent()) return state;
  for (const Layer& layer : layers_) {
    state.h.push_back(MatrixXd::Zero(layer.units, batch));
    state.c.push_back(MatrixXd::Zero(layer.units, batch));
  }
  return state;
}

MatrixXd Network::step(const MatrixXd& input, RecurrentState& state, StepCache* cache) const {
  if (input.rows() != spec_.input_dim) {
    throw ConfigError("network input has " + std::to_string(input.rows()) + " rows, expected " +
                      std::to_string(spec_.input_dim));
  }
  if (!input.allFinite()) throw NumericalError("non-finite network input");
  const Index batch = input.cols();
  if (recurrent()) {
    if (state.h.size() != layers_.size() || state.c.size() != layers_.size()) {
      throw ConfigError("recurrent state has the wrong number of layers");
    }
    for (std::size_t l = 0; l < layers_.size(); ++l) {
      if (state.h[l].rows() != layers_[l].units || state.c[l].rows() != layers_[l].units ||
          state.h[l].cols() != batch || state.c[l].cols() != batch) {
        throw ConfigError("recurrent state of layer '" + layers_[l].name + "' does not match");
      }
    }
  }
  if (cache) {
    cache->input = input;
    cache->layers.resize(layers_.size());
  }

  MatrixXd x = input;
  for (std::size_t l = 0; l < layers_.size(); ++l) {
    const Layer& layer = layers_[l];
    const Index units = layer.units;
    if (recurrent()) {
      MatrixXd z = params_.matrix(layer.w_in, 4 * units, layer.in) * x;
      z.noalias() += params_.matrix(layer.w_rec, 4 * units, units) * state.h[l];
      z.colwise() += params_.vector(layer.bias, 4 * units);
      MatrixXd gates(4 * units, batch);
      gates.topRows(2 * units) = sigmoid(z.topRows(2 * units));
      gates.middleRows(2 * units, units) = z.middleRows(2 * units, units).array().tanh().matrix();
      gates.bottomRows(units) = sigmoid(z.bottomRows(units));
      MatrixXd cell = gates.middleRows(units, units).cwiseProduct(state.c[l]) +
                      gates.topRows(units).cwiseProduct(gates.middleRows(2 * units, units));
      MatrixXd cell_tanh = cell.array().tanh().matrix();
      MatrixXd h = gates.bottomRows(units).cwiseProduct(cell_tanh);
      require_finite(h, layer.name);
      require_finite(cell, layer.name);
      if (cache) {
        LayerCache& lc = cache->layers[l];
        lc.h_prev = std::move(state.h[l]);
        lc.c_prev = std::move(state.c[l]);
        lc.gates = std::move(gates);
        lc.cell_tanh = std::move(cell_tanh);
        lc.output = h;
      }
      state.h[l] = h;
      state.c[l] = std::move(cell);
      x = std::move(h);
    } else {
      MatrixXd z = params_.matrix(layer.w_in, units, layer.in) * x;
      z.colwise() += params_.vector(layer.bias, units);
      MatrixXd y = z.array().tanh().matrix();
      require_finite(y, layer.name);
      if (cache) cache->layers[l].output = y;
      x = std::move(y);
    }
  }
  MatrixXd out = params_.matrix(head_w_, spec_.output_dim, layers_.back().units) * x;
  out.colwise() += params_.vector(head_b_, spec_.output_dim);
  if (spec_.output_scale != 1.0) out *= spec_.output_scale;
  require_finite(out, "head");
  if (cache) cache->output = out;
  return out;
}

MatrixXd Network::replay_output(const StepCache& cache) const {
  MatrixXd out = params_.matrix(head_w_, spec_.output_dim, layers_.back().units) * cache.layers.back().output;
  out.colwise() += params_.vector(head_b_, spec_.output_dim);
  if (spec_.output_scale != 1.0) out *= spec_.output_scale;
  return out;
}

Eigen::VectorXd Network::bptt_gradients(std::span<const StepCache> caches, std::span<const MatrixXd> upstream,
                                        std::span<const Eigen::RowVectorXd> mask) const {
  Eigen::VectorXd grad = Eigen::VectorXd::Zero(static_cast<Index>(parameter_count()));
  accumulate_gradients(caches, upstream, mask, grad);
  return grad;
}

void Network::accumulate_gradients(std::span<const StepCache> caches, std::span<const MatrixXd> upstream,
                                   std::span<const Eigen::RowVectorXd> mask, Eigen::VectorXd& grad) const {
  if (caches.size() != upstream.size() || caches.size() != mask.size()) {
    throw UsageError("bptt: " + std::to_string(caches.size()) + " caches, " + std::to_string(upstream.size()) +
                     " upstream gradients and " + std::to_string(mask.size()) + " masks");
  }
  if (grad.size() != static_cast<Index>(parameter_count())) throw UsageError("gradient buffer has the wrong size");
  if (caches.empty()) return;

  double* g = grad.data();
  auto gmat = [&](std::size_t offset, Index rows, Index cols) { return Eigen::Map<RowMatrix>(g + offset, rows, cols); };
  auto gvec = [&](std::size_t offset, Index n) { return Eigen::Map<Eigen::VectorXd>(g + offset, n); };

  const std::size_t n_layers = layers_.size();
  const Index batch = caches.front().input.cols();
  const Index top_units = layers_.back().units;
  const auto head = params_.matrix(head_w_, spec_.output_dim, top_units);

  // Recurrent carries from step t+1 into step t.
  std::vector<MatrixXd> dh_next(n_layers), dc_next(n_layers);
  if (recurrent()) {
    for (std::size_t l = 0; l < n_layers; ++l) {
      dh_next[l] = MatrixXd::Zero(layers_[l].units, batch);
      dc_next[l] = MatrixXd::Zero(layers_[l].units, batch);
    }
  }

  for (std::size_t step = caches.size(); step-- > 0;) {
    const StepCache& cache = caches[step];
    if (upstream[step].rows() != spec_.output_dim || upstream[step].cols() != batch ||
        mask[step].size() != batch || cache.input.cols() != batch) {
      throw UsageError("bptt: step " + std::to_string(step) + " has mismatched shapes");
    }
    MatrixXd dy = upstream[step] * mask[step].asDiagonal();
    if (spec_.output_scale != 1.0) dy *= spec_.output_scale;

    gmat(head_w_, spec_.output_dim, top_units).noalias() += dy * cache.layers.back().output.transpose();
    gvec(head_b_, spec_.output_dim) += dy.rowwise().sum();
    MatrixXd dx = head.transpose() * dy;

    for (std::size_t l = n_layers; l-- > 0;) {
      const Layer& layer = layers_[l];
      const LayerCache& lc = cache.layers[l];
      const Index units = layer.units;
      const MatrixXd& layer_input = l == 0 ? cache.input : cache.layers[l - 1].output;
      if (recurrent()) {
        const MatrixXd dh = dx + dh_next[l];
        const auto i = lc.gates.topRows(units).array();
        const auto f = lc.gates.middleRows(units, units).array();
        const auto gg = lc.gates.middleRows(2 * units, units).array();
        const auto o = lc.gates.bottomRows(units).array();
        const auto tc = lc.cell_tanh.array();
        const Eigen::ArrayXXd dc = dc_next[l].array() + dh.array() * o * (1.0 - tc.square());
        MatrixXd dz(4 * units, batch);
        dz.topRows(units) = (dc * gg * i * (1.0 - i)).matrix();
        dz.middleRows(units, units) = (dc * lc.c_prev.array() * f * (1.0 - f)).matrix();
        dz.middleRows(2 * units, units) = (dc * i * (1.0 - gg.square())).matrix();
        dz.bottomRows(units) = (dh.array() * tc * o * (1.0 - o)).matrix();
        dc_next[l] = (dc * f).matrix();

        gmat(layer.w_in, 4 * units, layer.in).noalias() += dz * layer_input.transpose();
        gmat(layer.w_rec, 4 * units, units).noalias() += dz * lc.h_prev.transpose();
        gvec(layer.bias, 4 * units) += dz.rowwise().sum();
        dh_next[l].noalias() = params_.matrix(layer.w_rec, 4 * units, units).transpose() * dz;
        if (l > 0) dx.noalias() = params_.matrix(layer.w_in, 4 * units, layer.in).transpose() * dz;
      } else {
        const MatrixXd dz = (dx.array() * (1.0 - lc.output.array().square())).matrix();
        gmat(layer.w_in, units, layer.in).noalias() += dz * layer_input.transpose();
        gvec(layer.bias, units) += dz.rowwise().sum();
        if (l > 0) dx.noalias() = params_.matrix(layer.w_in, units, layer.in).transpose() * dz;
      }
    }
  }
}

Eigen::VectorXd Network::latent(const StepCache& cache, Index column) const {
  Eigen::VectorXd out(latent_dim());
  Index pos = 0;
  for (const LayerCache& lc : cache.layers) {
    out.segment(pos, lc.output.rows()) = lc.output.col(column);
    pos += lc.output.rows();
  }
  return out;
}

int Network::latent_dim() const {
  int n = 0;
  for (const Layer& layer : layers_) n += layer.units;
  return n;
}

}  // namespace mloc::nn
