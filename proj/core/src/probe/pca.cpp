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

#include "mloc/probe/pca.hpp"

#include <cmath>
#include <utility>

#include "mloc/common/error.hpp"
#include "mloc/common/rng.hpp"

namespace mloc::probe {
namespace {

Eigen::VectorXd start_vector(Eigen::Index d, std::uint64_t stream) {
  Rng rng(derive_seed(0x9ca, {stream}));
  Eigen::VectorXd v(d);
  for (double& x : v) x = rng.uniform(-1.0, 1.0);
  return v.normalized();
}

// Largest-magnitude entry positive, so results do not depend on the start.
void fix_sign(Eigen::Ref<Eigen::VectorXd> v) {
  Eigen::Index k = 0;
  v.cwiseAbs().maxCoeff(&k);
  if (v[k] < 0.0) v = -v;
}

std::pair<double, Eigen::VectorXd> dominant(const Eigen::MatrixXd& a, Eigen::VectorXd v, const Eigen::VectorXd* exclude,
                                            double tolerance, int max_iterations) {
  const auto project = [&](Eigen::VectorXd& x) {
    if (exclude) x -= exclude->dot(x) * *exclude;
  };
  project(v);
  v.normalize();
  double lambda = 0.0;
  for (int it = 0; it < max_iterations; ++it) {
    Eigen::VectorXd w = a * v;
    project(w);
    lambda = v.dot(w);
    if ((w - lambda * v).norm() <= tolerance) break;
    const double norm = w.norm();
    if (norm == 0.0) break;
    v = w / norm;
  }
  return {lambda, v};
}

}  // namespace

LatentProjection pca_top2(const Eigen::MatrixXd& latents, int max_iterations, double tolerance) {
  const Eigen::Index t = latents.rows(), d = latents.cols();
  if (t <= 2) throw UsageError("projection needs more than two rows");
  if (d < 2) throw UsageError("projection needs at least two latent dimensions");
  LatentProjection out;
  out.mean = latents.colwise().mean().transpose();
  const Eigen::MatrixXd centered = latents.rowwise() - out.mean.transpose();
  const Eigen::MatrixXd cov = centered.transpose() * centered / static_cast<double>(t - 1);
  const double trace = cov.trace();
  const double scale = trace > 0.0 ? trace : 1.0;

  auto [l1, v1] = dominant(cov, start_vector(d, 1), nullptr, tolerance * scale, max_iterations);
  if (l1 <= 1e-12 * scale) v1 = Eigen::VectorXd::Unit(d, 0);
  fix_sign(v1);
  const Eigen::MatrixXd deflated = cov - l1 * v1 * v1.transpose();
  auto [l2, v2] = dominant(deflated, start_vector(d, 2), &v1, tolerance * scale, max_iterations);
  v2 -= v1.dot(v2) * v1;
  v2.normalize();
  fix_sign(v2);

  out.eigenvalues[0] = std::max(l1, 0.0);
  out.eigenvalues[1] = std::max(l2, 0.0);
  out.degenerate = out.eigenvalues[1] <= 1e-12 * scale;
  if (trace > 0.0) {
    out.explained[0] = out.eigenvalues[0] / trace;
    out.explained[1] = out.eigenvalues[1] / trace;
  }
  out.directions.resize(d, 2);
  out.directions.col(0) = v1;
  out.directions.col(1) = v2;
  out.coordinates = centered * out.directions;
  return out;
}

PhaseClustering phase_clustering(const Eigen::MatrixXd& points, const std::vector<int>& phases, int phase_length) {
  if (phase_length < 2) throw UsageError("phase length must be at least 2");
  if (static_cast<Eigen::Index>(phases.size()) != points.rows()) throw UsageError("one phase per point is required");
  PhaseClustering out;
  out.cycles = static_cast<int>(points.rows() / phase_length);
  if (out.cycles < 3) throw UsageError("phase clustering needs at least three complete cycles");
  double same = 0.0, different = 0.0;
  long long n_same = 0, n_different = 0;
  for (Eigen::Index i = 0; i < points.rows(); ++i) {
    for (Eigen::Index j = i + 1; j < points.rows(); ++j) {
      const double dist = (points.row(i) - points.row(j)).norm();
      if (phases[static_cast<std::size_t>(i)] == phases[static_cast<std::size_t>(j)]) {
        same += dist;
        ++n_same;
      } else {
        different += dist;
        ++n_different;
      }
    }
  }
  out.same_phase = same / static_cast<double>(n_same);
  out.different_phase = different / static_cast<double>(n_different);
  out.passed = out.same_phase < out.different_phase;
  return out;
}

}  // namespace mloc::probe
