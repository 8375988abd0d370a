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

#include "mloc/common/rng.hpp"
#include "mloc/env/model.hpp"

namespace mloc::dynrand {

enum class Kind { kMultiplier, kOffset };

enum class Domain { kBiped, kDiagnostic };

std::string to_string(Kind kind);
Kind kind_from_string(const std::string& text);

/// One randomized quantity. `target` names the model field, e.g.
/// "mass.left_thigh", "damping.right_knee", "torso_com.x", "cart.damping".
struct Entry {
  std::string target;
  Kind kind = Kind::kMultiplier;
  double lo = 1.0;
  double hi = 1.0;

  double midpoint() const { return 0.5 * (lo + hi); }
  double half_width() const { return 0.5 * (hi - lo); }
  bool operator==(const Entry&) const = default;
};

struct RandomizationSpec {
  Domain domain = Domain::kBiped;
  std::vector<Entry> entries;

  /// Per-joint damping x[0.5, 1.5], per-link mass x[0.7, 1.3], torso
  /// centre of mass x + [-0.15, 0.05] m, z + [-0.04, 0.04] m.
  static RandomizationSpec biped_default();
  /// Cart mass x[0.7, 1.3], damping x[0.5, 1.5].
  static RandomizationSpec diagnostic_default();
  static RandomizationSpec none(Domain domain);

  std::size_t size() const { return entries.size(); }
  /// Index of the entry with `target`, or -1.
  int find(const std::string& target) const;
  /// Throws ValidationError for inverted or non-positive multiplier ranges
  /// and unknown targets.
  void validate() const;
  bool operator==(const RandomizationSpec&) const = default;
};

/// Targets a spec may reference in `domain`.
std::vector<std::string> known_targets(Domain domain);

/// One sampled parameter set, aligned with the RandomizationSpec entries.
struct DynamicsParameters {
  std::vector<double> values;
  std::uint64_t seed = 0;
};

DynamicsParameters sample_parameters(const RandomizationSpec& spec, Rng& rng);

/// Multipliers of 1 and offsets of 0, clamped into the ranges.
DynamicsParameters nominal_parameters(const RandomizationSpec& spec);

void validate_parameters(const RandomizationSpec& spec, const DynamicsParameters& params);

/// Copies `defaults` and applies every entry; `defaults` is never touched.
env::BipedModel apply_parameters(const DynamicsParameters& params, const RandomizationSpec& spec,
                                 const env::BipedModel& defaults);
env::DiagnosticParams apply_parameters(const DynamicsParameters& params, const RandomizationSpec& spec,
                                       const env::DiagnosticParams& defaults);

}  // namespace mloc::dynrand
