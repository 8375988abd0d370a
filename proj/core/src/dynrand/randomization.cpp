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

#include "mloc/dynrand/randomization.hpp"

#include <algorithm>
#include <cmath>

#include "mloc/common/error.hpp"

namespace mloc::dynrand {
namespace {

double* biped_field(env::BipedModel& m, const std::string& target) {
  for (int b = 0; b < env::kNumLinks; ++b) {
    if (target == "mass." + env::link_names()[static_cast<std::size_t>(b)]) return &m.links[static_cast<std::size_t>(b)].mass;
  }
  for (int j = 0; j < env::kNumJoints; ++j) {
    if (target == "damping." + env::joint_names()[static_cast<std::size_t>(j)]) {
      return &m.joint_damping[static_cast<std::size_t>(j)];
    }
  }
  if (target == "torso_com.x") return &m.torso_com_x;
  if (target == "torso_com.z") return &m.torso_com_z;
  return nullptr;
}

double* diagnostic_field(env::DiagnosticParams& p, const std::string& target) {
  if (target == "cart.mass") return &p.mass;
  if (target == "cart.damping") return &p.damping;
  return nullptr;
}

double apply(const Entry& e, double base, double value) {
  return e.kind == Kind::kMultiplier ? base * value : base + value;
}

}  // namespace

std::string to_string(Kind kind) { return kind == Kind::kMultiplier ? "multiplier" : "offset"; }

Kind kind_from_string(const std::string& text) {
  if (text == "multiplier") return Kind::kMultiplier;
  if (text == "offset") return Kind::kOffset;
  throw ConfigError("unknown randomization kind '" + text + "' (expected multiplier or offset)");
}

RandomizationSpec RandomizationSpec::biped_default() {
  RandomizationSpec spec{Domain::kBiped, {}};
  for (const std::string& joint : env::joint_names()) {
    spec.entries.push_back({"damping." + joint, Kind::kMultiplier, 0.5, 1.5});
  }
  for (const std::string& link : env::link_names()) {
    spec.entries.push_back({"mass." + link, Kind::kMultiplier, 0.7, 1.3});
  }
  spec.entries.push_back({"torso_com.x", Kind::kOffset, -0.15, 0.05});
  spec.entries.push_back({"torso_com.z", Kind::kOffset, -0.04, 0.04});
  return spec;
}

RandomizationSpec RandomizationSpec::diagnostic_default() {
  return {Domain::kDiagnostic,
          {{"cart.mass", Kind::kMultiplier, 0.7, 1.3}, {"cart.damping", Kind::kMultiplier, 0.5, 1.5}}};
}

RandomizationSpec RandomizationSpec::none(Domain domain) { return {domain, {}}; }

int RandomizationSpec::find(const std::string& target) const {
  for (std::size_t i = 0; i < entries.size(); ++i) {
    if (entries[i].target == target) return static_cast<int>(i);
  }
  return -1;
}

std::vector<std::string> known_targets(Domain domain) {
  if (domain == Domain::kDiagnostic) return {"cart.mass", "cart.damping"};
  std::vector<std::string> out;
  for (const std::string& joint : env::joint_names()) out.push_back("damping." + joint);
  for (const std::string& link : env::link_names()) out.push_back("mass." + link);
  out.push_back("torso_com.x");
  out.push_back("torso_com.z");
  return out;
}

void RandomizationSpec::validate() const {
  const std::vector<std::string> targets = known_targets(domain);
  for (std::size_t i = 0; i < entries.size(); ++i) {
    const Entry& e = entries[i];
    if (std::find(targets.begin(), targets.end(), e.target) == targets.end()) {
      throw ValidationError("randomization: unknown target '" + e.target + "'");
    }
    if (!std::isfinite(e.lo) || !std::isfinite(e.hi) || e.lo > e.hi) {
      throw ValidationError("randomization: '" + e.target + "' needs lo <= hi");
    }
    if (e.kind == Kind::kMultiplier && e.lo <= 0.0) {
      throw ValidationError("randomization: multiplier range of '" + e.target + "' must be positive");
    }
    for (std::size_t k = 0; k < i; ++k) {
      if (entries[k].target == e.target) throw ValidationError("randomization: duplicate target '" + e.target + "'");
    }
  }
}

DynamicsParameters sample_parameters(const RandomizationSpec& spec, Rng& rng) {
  spec.validate();
  DynamicsParameters params;
  params.seed = rng.seed();
  params.values.reserve(spec.size());
  for (const Entry& e : spec.entries) {
    params.values.push_back(e.lo == e.hi ? e.lo : rng.uniform(e.lo, e.hi));
  }
  return params;
}

DynamicsParameters nominal_parameters(const RandomizationSpec& spec) {
  DynamicsParameters params;
  for (const Entry& e : spec.entries) {
    params.values.push_back(std::clamp(e.kind == Kind::kMultiplier ? 1.0 : 0.0, e.lo, e.hi));
  }
  return params;
}

void validate_parameters(const RandomizationSpec& spec, const DynamicsParameters& params) {
  if (params.values.size() != spec.size()) {
    throw ValidationError("dynamics parameters: expected " + std::to_string(spec.size()) + " values, got " +
                          std::to_string(params.values.size()));
  }
  for (std::size_t i = 0; i < spec.size(); ++i) {
    const Entry& e = spec.entries[i];
    const double v = params.values[i];
    if (!(v >= e.lo && v <= e.hi)) {
      throw ValidationError("dynamics parameters: '" + e.target + "' = " + std::to_string(v) + " outside [" +
                            std::to_string(e.lo) + ", " + std::to_string(e.hi) + "]");
    }
  }
}

env::BipedModel apply_parameters(const DynamicsParameters& params, const RandomizationSpec& spec,
                                 const env::BipedModel& defaults) {
  if (spec.domain != Domain::kBiped) throw ValidationError("randomization spec is not for the biped");
  validate_parameters(spec, params);
  env::BipedModel model = defaults;
  env::BipedModel base_model = defaults;
  for (std::size_t i = 0; i < spec.size(); ++i) {
    const Entry& e = spec.entries[i];
    double* field = biped_field(model, e.target);
    if (!field) throw ValidationError("randomization: unknown biped target '" + e.target + "'");
    const double base = *biped_field(base_model, e.target);
    *field = apply(e, base, params.values[i]);
    // Rescaling a link's mass keeps its geometry, so the inertia follows.
    for (int b = 0; b < env::kNumLinks; ++b) {
      const auto u = static_cast<std::size_t>(b);
      if (field == &model.links[u].mass) {
        model.links[u].inertia = defaults.links[u].inertia * model.links[u].mass / defaults.links[u].mass;
      }
    }
  }
  model.validate();
  return model;
}

env::DiagnosticParams apply_parameters(const DynamicsParameters& params, const RandomizationSpec& spec,
                                       const env::DiagnosticParams& defaults) {
  if (spec.domain != Domain::kDiagnostic) throw ValidationError("randomization spec is not for the diagnostic cart");
  validate_parameters(spec, params);
  env::DiagnosticParams out = defaults;
  env::DiagnosticParams base = defaults;
  for (std::size_t i = 0; i < spec.size(); ++i) {
    const Entry& e = spec.entries[i];
    double* field = diagnostic_field(out, e.target);
    if (!field) throw ValidationError("randomization: unknown diagnostic target '" + e.target + "'");
    *field = apply(e, *diagnostic_field(base, e.target), params.values[i]);
  }
  out.validate();
  return out;
}

}  // namespace mloc::dynrand
