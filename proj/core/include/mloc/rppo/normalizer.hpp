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

namespace mloc::rppo {

/// Frozen per-dimension observation statistics.
struct Normalizer {
  static constexpr double kStdFloor = 1e-6;

  Eigen::VectorXd mean;
  Eigen::VectorXd std;
  std::int64_t count = 0;

  static Normalizer identity(int dim);
  /// Population mean and standard deviation of the columns of `samples`.
  static Normalizer from_samples(const Eigen::MatrixXd& samples);

  int dim() const { return static_cast<int>(mean.size()); }
  Eigen::VectorXd apply(const Eigen::VectorXd& observation) const;
  Eigen::MatrixXd apply_columns(const Eigen::MatrixXd& observations) const;

  bool operator==(const Normalizer&) const = default;
};

}  // namespace mloc::rppo
