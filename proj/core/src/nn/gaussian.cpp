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

#include "mloc/nn/gaussian.hpp"

#include <numbers>

#include "mloc/common/error.hpp"

namespace mloc::nn {
namespace {

const double kLogNormalizer = kLogStd + 0.5 * std::log(2.0 * std::numbers::pi);

void check_shapes(Eigen::Index mr, Eigen::Index mc, Eigen::Index ar, Eigen::Index ac) {
  if (mr != ar || mc != ac) throw ConfigError("action and mean dimensions differ");
}

}  // namespace

double gaussian_logprob(const Eigen::VectorXd& mean, const Eigen::VectorXd& action) {
  check_shapes(mean.rows(), 1, action.rows(), 1);
  const double sq = ((action - mean) / kActionStd).squaredNorm();
  return -0.5 * sq - static_cast<double>(mean.size()) * kLogNormalizer;
}

Eigen::RowVectorXd gaussian_logprob(const Eigen::MatrixXd& means, const Eigen::MatrixXd& actions) {
  check_shapes(means.rows(), means.cols(), actions.rows(), actions.cols());
  const Eigen::RowVectorXd sq = ((actions - means) / kActionStd).colwise().squaredNorm();
  return (-0.5 * sq.array() - static_cast<double>(means.rows()) * kLogNormalizer).matrix();
}

Eigen::MatrixXd gaussian_logprob_grad(const Eigen::MatrixXd& means, const Eigen::MatrixXd& actions) {
  check_shapes(means.rows(), means.cols(), actions.rows(), actions.cols());
  return (actions - means) / (kActionStd * kActionStd);
}

Eigen::VectorXd sample_action(const Eigen::VectorXd& mean, Rng& rng, bool deterministic) {
  if (deterministic) return mean;
  Eigen::VectorXd action(mean.size());
  for (Eigen::Index d = 0; d < mean.size(); ++d) action[d] = mean[d] + kActionStd * rng.normal();
  return action;
}

}  // namespace mloc::nn
