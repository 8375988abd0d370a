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

#include <vector>

namespace mloc::probe {

struct LatentProjection {
  Eigen::MatrixXd coordinates;  // T x 2
  Eigen::MatrixXd directions;   // D x 2, orthonormal
  Eigen::VectorXd mean;         // D
  double explained[2] = {0.0, 0.0};
  double eigenvalues[2] = {0.0, 0.0};
  bool degenerate = false;  // fewer than two directions carry variance
};

/// Top two principal directions of the rows of `latents` (T x D) by power
/// iteration with deflation on the sample covariance.
LatentProjection pca_top2(const Eigen::MatrixXd& latents, int max_iterations = 20000, double tolerance = 1e-12);

struct PhaseClustering {
  double same_phase = 0.0;       // mean distance between points sharing a phase
  double different_phase = 0.0;  // mean distance between points of different phases
  int cycles = 0;                // complete cycles covered
  bool passed = false;
};

/// Compares mean pairwise distances of same-phase and different-phase points.
/// Needs at least three complete cycles of `phase_length` points.
PhaseClustering phase_clustering(const Eigen::MatrixXd& points, const std::vector<int>& phases, int phase_length);

}  // namespace mloc::probe
