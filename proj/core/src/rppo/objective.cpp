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

#include "mloc/rppo/objective.hpp"

#include <algorithm>
#include <cmath>

#include "mloc/common/error.hpp"
#include "mloc/common/log.hpp"
#include "mloc/nn/gaussian.hpp"

namespace mloc::rppo {
namespace {

void require_same_size(Eigen::Index a, Eigen::Index b, const char* what) {
  if (a != b) throw ConfigError(std::string(what) + ": length mismatch");
}

}  // namespace

Eigen::RowVectorXd probability_ratio(const Eigen::RowVectorXd& logp_new, const Eigen::RowVectorXd& logp_old) {
  require_same_size(logp_new.size(), logp_old.size(), "probability_ratio");
  if (!logp_new.allFinite() || !logp_old.allFinite()) throw NumericalError("non-finite log-probability");
  Eigen::RowVectorXd diff = logp_new - logp_old;
  const Eigen::Index clamped = (diff.array().abs() > kMaxLogRatio).count();
  if (clamped > 0) {
    log_warning("probability ratio exponent clamped for " + std::to_string(clamped) + " samples");
    diff = diff.cwiseMax(-kMaxLogRatio).cwiseMin(kMaxLogRatio);
  }
  return diff.array().exp();
}

Eigen::RowVectorXd clipped_objective(const Eigen::RowVectorXd& ratios, const Eigen::RowVectorXd& advantages,
                                     double clip) {
  require_same_size(ratios.size(), advantages.size(), "surrogate");
  const Eigen::ArrayXXd unclipped = ratios.array() * advantages.array();
  const Eigen::ArrayXXd clipped = ratios.array().max(1.0 - clip).min(1.0 + clip) * advantages.array();
  return unclipped.min(clipped);
}

double surrogate_loss(const Eigen::RowVectorXd& ratios, const Eigen::RowVectorXd& advantages, double clip) {
  if (ratios.size() == 0) return 0.0;
  return clipped_objective(ratios, advantages, clip).mean();
}

double surrogate_loss(const Eigen::RowVectorXd& ratios, const Eigen::RowVectorXd& advantages, double clip,
                      const Eigen::RowVectorXd& mask) {
  require_same_size(ratios.size(), mask.size(), "surrogate mask");
  const double n = mask.sum();
  if (n == 0.0) return 0.0;
  return clipped_objective(ratios, advantages, clip).cwiseProduct(mask).sum() / n;
}

Eigen::RowVectorXd clipped_objective_grad(const Eigen::RowVectorXd& ratios, const Eigen::RowVectorXd& advantages,
                                          double clip) {
  require_same_size(ratios.size(), advantages.size(), "surrogate");
  Eigen::RowVectorXd g(ratios.size());
  for (Eigen::Index i = 0; i < ratios.size(); ++i) {
    const double r = ratios[i], a = advantages[i];
    const double clipped = std::clamp(r, 1.0 - clip, 1.0 + clip) * a;
    g[i] = r * a <= clipped ? a : 0.0;
  }
  return g;
}

Eigen::RowVectorXd gaussian_kl(const Eigen::MatrixXd& means_old, const Eigen::MatrixXd& means_new) {
  if (means_old.rows() != means_new.rows() || means_old.cols() != means_new.cols()) {
    throw ConfigError("kl_estimate: shape mismatch");
  }
  const double var = nn::kActionStd * nn::kActionStd;
  return (means_old - means_new).colwise().squaredNorm() / (2.0 * var);
}

double kl_estimate(const Eigen::MatrixXd& means_old, const Eigen::MatrixXd& means_new) {
  if (means_old.cols() == 0) return 0.0;
  return gaussian_kl(means_old, means_new).mean();
}

Eigen::RowVectorXd generalized_advantages(const Eigen::RowVectorXd& rewards, const Eigen::RowVectorXd& values,
                                          double next_value, double gamma, double lambda) {
  require_same_size(rewards.size(), values.size(), "generalized_advantages");
  const Eigen::Index n = rewards.size();
  Eigen::RowVectorXd adv(n);
  double running = 0.0;
  for (Eigen::Index t = n - 1; t >= 0; --t) {
    const double v_next = t + 1 < n ? values[t + 1] : next_value;
    const double delta = rewards[t] + gamma * v_next - values[t];
    running = delta + gamma * lambda * running;
    adv[t] = running;
  }
  return adv;
}

void estimate_advantages(RolloutBuffer& buffer, double gamma, double lambda, bool normalize) {
  buffer.advantages.clear();
  buffer.returns.clear();
  double sum = 0.0;
  std::int64_t n = 0;
  for (const Trajectory& t : buffer.trajectories) {
    const double next = t.terminal ? 0.0 : t.bootstrap_value;
    Eigen::RowVectorXd adv = generalized_advantages(t.rewards, t.values, next, gamma, lambda);
    buffer.returns.push_back(adv + t.values);
    sum += adv.sum();
    n += adv.size();
    buffer.advantages.push_back(std::move(adv));
  }
  if (!normalize || n == 0) return;
  const double mean = sum / static_cast<double>(n);
  double var = 0.0;
  for (const Eigen::RowVectorXd& a : buffer.advantages) var += (a.array() - mean).square().sum();
  var /= static_cast<double>(n);
  const double scale = 1.0 / std::max(std::sqrt(var), 1e-8);
  for (Eigen::RowVectorXd& a : buffer.advantages) a = (a.array() - mean) * scale;
}

}  // namespace mloc::rppo
