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

#include <cmath>

#include "mloc/common/rng.hpp"

namespace mloc::nn {

/// Fixed action log standard deviation shared by every policy. Never trained.
inline constexpr double kLogStd = -2.0;
inline const double kActionStd = std::exp(kLogStd);

/// Diagonal-Gaussian log-density with sigma = exp(kLogStd) per dimension.
double gaussian_logprob(const Eigen::VectorXd& mean, const Eigen::VectorXd& action);

/// Column-wise log-densities of a batch (one column per sample).
Eigen::RowVectorXd gaussian_logprob(const Eigen::MatrixXd& means, const Eigen::MatrixXd& actions);

/// d logprob / d mean, column-wise.
Eigen::MatrixXd gaussian_logprob_grad(const Eigen::MatrixXd& means, const Eigen::MatrixXd& actions);

/// mean + sigma * z with z ~ N(0, I); returns the mean untouched when `deterministic`.
Eigen::VectorXd sample_action(const Eigen::VectorXd& mean, Rng& rng, bool deterministic = false);

}  // namespace mloc::nn
