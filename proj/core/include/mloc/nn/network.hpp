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

#include <span>
#include <string>
#include <vector>

#include "mloc/common/rng.hpp"
#include "mloc/nn/parameters.hpp"

namespace mloc::nn {

enum class Family { kLstm, kFeedforward };

std::string to_string(Family family);
Family family_from_string(const std::string& text);

struct NetworkSpec {
  Family family = Family::kLstm;
  int input_dim = 0;
  int output_dim = 0;
  std::vector<int> hidden;  // units per hidden layer
  double output_scale = 1.0;  // fixed multiplier on the linear head

  static NetworkSpec lstm(int input_dim, int output_dim, int units = 128);
  static NetworkSpec feedforward(int input_dim, int output_dim, int units = 300);
  bool operator==(const NetworkSpec&) const = default;
};

/// Per-layer (h, c) pairs, one column per batch element. Empty for
/// feedforward networks.
struct RecurrentState {
  std::vector<Eigen::MatrixXd> h;
  std::vector<Eigen::MatrixXd> c;

  Eigen::Index batch() const { return h.empty() ? 0 : h.front().cols(); }
};

struct LayerCache {
  Eigen::MatrixXd h_prev;     // lstm
  Eigen::MatrixXd c_prev;     // lstm
  Eigen::MatrixXd gates;      // lstm: [i; f; g; o] after their nonlinearities
  Eigen::MatrixXd cell_tanh;  // lstm: tanh(c')
  Eigen::MatrixXd output;     // h' for lstm, tanh activation for dense
};

/// Everything one forward step produced that the backward pass needs.
struct StepCache {
  Eigen::MatrixXd input;
  std::vector<LayerCache> layers;
  Eigen::MatrixXd output;
};

/// Stacked LSTM or tanh-dense layers followed by a linear head. Every matrix
/// argument carries one column per batch element.
class Network {
 public:
  explicit Network(NetworkSpec spec);

  const NetworkSpec& spec() const { return spec_; }
  Family family() const { return spec_.family; }
  bool recurrent() const { return spec_.family == Family::kLstm; }
  int input_dim() const { return spec_.input_dim; }
  int output_dim() const { return spec_.output_dim; }
  std::size_t parameter_count() const { return params_.size(); }

  ParameterStore& parameters() { return params_; }
  const ParameterStore& parameters() const { return params_; }

  /// Scaled-uniform weights, zero biases, forget-gate bias 1. `head_scale`
  /// shrinks the output layer.
  void initialize(Rng& rng, double head_scale = 1.0);

  RecurrentState initial_state(Eigen::Index batch) const;

  /// One forward step. Advances `state` in place and fills `cache` when given.
  Eigen::MatrixXd step(const Eigen::MatrixXd& input, RecurrentState& state, StepCache* cache = nullptr) const;

  /// Recomputes the head output from a cache.
  Eigen::MatrixXd replay_output(const StepCache& cache) const;

  /// Gradients of sum_t <upstream[t] * mask[t], output[t]> with respect to
  /// every parameter. Steps are in time order and every column starts from
  /// the zero state at t = 0.
  Eigen::VectorXd bptt_gradients(std::span<const StepCache> caches, std::span<const Eigen::MatrixXd> upstream,
                                 std::span<const Eigen::RowVectorXd> mask) const;

  /// As bptt_gradients, accumulating into `grad`.
  void accumulate_gradients(std::span<const StepCache> caches, std::span<const Eigen::MatrixXd> upstream,
                            std::span<const Eigen::RowVectorXd> mask, Eigen::VectorXd& grad) const;

  /// Concatenated hidden-layer outputs of batch column `column`.
  Eigen::VectorXd latent(const StepCache& cache, Eigen::Index column = 0) const;
  int latent_dim() const;

 private:
  struct Layer {
    std::string name;
    int in = 0;
    int units = 0;
    std::size_t w_in = 0;   // lstm: 4H x I, dense: H x I
    std::size_t w_rec = 0;  // lstm: 4H x H
    std::size_t bias = 0;
  };

  NetworkSpec spec_;
  ParameterStore params_;
  std::vector<Layer> layers_;
  std::size_t head_w_ = 0;
  std::size_t head_b_ = 0;
};

}  // namespace mloc::nn
