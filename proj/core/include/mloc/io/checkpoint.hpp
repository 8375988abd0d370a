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

#include <cstdint>
#include <string>
#include <vector>

#include "mloc/nn/adam.hpp"
#include "mloc/nn/network.hpp"
#include "mloc/rppo/normalizer.hpp"
#include "mloc/rppo/trainer.hpp"

namespace mloc::io {

inline constexpr std::uint32_t kCheckpointVersion = 1;

/// Everything needed to resume training or evaluate a policy.
///
/// Layout (all integers and reals little-endian): "MLOC", u32 version, u8
/// family tag, u64 config digest, i64 timesteps, i64 iteration, the network
/// spec, the resolved config text, policy tensors, critic tensors, the
/// normalizer, both Adam states, and the two parameter counts as a trailer.
struct Checkpoint {
  nn::NetworkSpec policy_spec;
  std::uint64_t config_digest = 0;
  std::string config_text;
  std::int64_t timesteps = 0;
  std::int64_t iteration = 0;
  std::vector<nn::ParamTensor> policy;
  std::vector<nn::ParamTensor> critic;
  rppo::Normalizer normalizer;
  nn::AdamState policy_adam;
  nn::AdamState critic_adam;

  static Checkpoint capture(const rppo::Trainer& trainer, std::uint64_t digest, std::string config_text);
  /// Loads weights, optimizer state, normalizer and progress into `trainer`.
  void restore(rppo::Trainer& trainer) const;
  /// A policy network carrying the stored weights.
  nn::Network make_policy() const;
};

std::string serialize_checkpoint(const Checkpoint& checkpoint);
/// Throws FormatError for a bad magic, a version mismatch or truncated data.
Checkpoint deserialize_checkpoint(const std::string& bytes);

/// Writes through a temporary file and a rename, so a crash never leaves a
/// partial checkpoint behind.
void save_checkpoint(const Checkpoint& checkpoint, const std::string& path);
Checkpoint load_checkpoint(const std::string& path);

}  // namespace mloc::io
