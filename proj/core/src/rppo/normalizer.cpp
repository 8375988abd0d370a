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

#include "mloc/rppo/normalizer.hpp"

#include "mloc/common/error.hpp"

namespace mloc::rppo {

Normalizer Normalizer::identity(int dim) {
  return {Eigen::VectorXd::Zero(dim), Eigen::VectorXd::Ones(dim), 0};
}

Normalizer Normalizer::from_samples(const Eigen::MatrixXd& samples) {
  if (samples.cols() == 0) throw UsageError("normalizer needs at least one sample");
  if (!samples.allFinite()) throw NumericalError("non-finite observation in normalizer samples");
  Normalizer n;
  n.count = samples.cols();
  n.mean = samples.rowwise().mean();
  const Eigen::MatrixXd centered = samples.colwise() - n.mean;
  n.std = (centered.rowwise().squaredNorm() / static_cast<double>(samples.cols())).cwiseSqrt().cwiseMax(kStdFloor);
  return n;
}

Eigen::VectorXd Normalizer::apply(const Eigen::VectorXd& observation) const {
  if (observation.size() != mean.size()) throw ConfigError("observation size does not match normalizer");
  return (observation - mean).cwiseQuotient(std);
}

Eigen::MatrixXd Normalizer::apply_columns(const Eigen::MatrixXd& observations) const {
  if (observations.rows() != mean.size()) throw ConfigError("observation size does not match normalizer");
  return (observations.colwise() - mean).array().colwise() / std.array();
}

}  // namespace mloc::rppo
