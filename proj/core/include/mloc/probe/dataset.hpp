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
#include <string>
#include <vector>

#include "mloc/dynrand/randomization.hpp"
#include "mloc/env/environment.hpp"
#include "mloc/nn/network.hpp"
#include "mloc/rppo/normalizer.hpp"

namespace mloc::probe {

/// Column-per-record storage for one split.
struct HiddenStateSplit {
  Eigen::MatrixXd latents;  // latent_dim x n
  Eigen::MatrixXd targets;  // parameter count x n, native units
  std::vector<std::int64_t> episodes;
  std::vector<std::int32_t> steps;

  Eigen::Index size() const { return latents.cols(); }
};

struct HiddenStateDataset {
  dynrand::RandomizationSpec spec;
  HiddenStateSplit train;
  HiddenStateSplit test;

  int latent_dim() const { return static_cast<int>(train.latents.rows()); }
  int parameter_count() const { return static_cast<int>(spec.size()); }
};

/// What a record holds: the policy's latent vector, or the raw observation
/// the policy saw at that step (a memoryless control).
enum class Features { kLatent, kObservation };

struct HarvestOptions {
  Features features = Features::kLatent;
  int train_samples = 40000;
  int test_samples = 10000;
  int burn_in = 30;
  int max_steps = 300;
  int workers = 1;
  std::uint64_t seed = 0;
  /// Give up after this many episodes; 0 derives a limit from the sample
  /// counts.
  int max_episodes = 0;
};

/// Rolls deterministic episodes, each under freshly sampled dynamics from the
/// environments' randomization spec, and records the selected features after
/// every step from `burn_in` on. The training split is filled first;
/// the test split only uses later episodes, so no episode contributes to both.
HiddenStateDataset harvest_hidden_states(const nn::Network& policy, const env::EnvFactory& factory,
                                         const rppo::Normalizer& normalizer, const HarvestOptions& options);

/// Versioned binary file: "MLHS", u32 version, u32 latent size, u32 parameter
/// count, u64 train and test counts, the randomization entries, then fixed-width
/// records of latent values, parameter values, episode id and step.
void save_dataset(const HiddenStateDataset& dataset, const std::string& path);
HiddenStateDataset load_dataset(const std::string& path);
std::string serialize_dataset(const HiddenStateDataset& dataset);
HiddenStateDataset deserialize_dataset(const std::string& bytes);

}  // namespace mloc::probe
