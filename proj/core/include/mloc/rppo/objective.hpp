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

#include "mloc/rppo/trajectory.hpp"

namespace mloc::rppo {

/// Exponent bound applied before exp() in probability_ratio.
inline constexpr double kMaxLogRatio = 30.0;

/// exp(logp_new - logp_old), with the exponent clamped to +-kMaxLogRatio.
Eigen::RowVectorXd probability_ratio(const Eigen::RowVectorXd& logp_new, const Eigen::RowVectorXd& logp_old);

/// Per-sample min(r A, clip(r, 1 - eps, 1 + eps) A).
Eigen::RowVectorXd clipped_objective(const Eigen::RowVectorXd& ratios, const Eigen::RowVectorXd& advantages,
                                     double clip);

/// Mean clipped objective. The masked form averages over entries with mask 1.
double surrogate_loss(const Eigen::RowVectorXd& ratios, const Eigen::RowVectorXd& advantages, double clip);
double surrogate_loss(const Eigen::RowVectorXd& ratios, const Eigen::RowVectorXd& advantages, double clip,
                      const Eigen::RowVectorXd& mask);

/// d clipped_objective / d ratio per sample. Zero where the clipped branch is active.
Eigen::RowVectorXd clipped_objective_grad(const Eigen::RowVectorXd& ratios, const Eigen::RowVectorXd& advantages,
                                          double clip);

/// Per-sample KL between two fixed-sigma diagonal Gaussians given their means
/// (one column per sample).
Eigen::RowVectorXd gaussian_kl(const Eigen::MatrixXd& means_old, const Eigen::MatrixXd& means_new);
double kl_estimate(const Eigen::MatrixXd& means_old, const Eigen::MatrixXd& means_new);

/// Generalized advantage estimates for one trajectory. `next_value` is the
/// critic value after the last step, zero for terminal endings.
Eigen::RowVectorXd generalized_advantages(const Eigen::RowVectorXd& rewards, const Eigen::RowVectorXd& values,
                                          double next_value, double gamma, double lambda);

/// Fills buffer.advantages and buffer.returns (= raw advantage + value). With
/// `normalize`, advantages are rescaled to zero mean and unit variance over
/// the whole buffer.
void estimate_advantages(RolloutBuffer& buffer, double gamma, double lambda, bool normalize = true);

}  // namespace mloc::rppo
