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

#include "mloc/dynrand/randomization.hpp"
#include "mloc/env/environment.hpp"
#include "mloc/nn/network.hpp"
#include "mloc/rppo/trainer.hpp"

namespace mloc::io {

/// One `key = value` line of an INI document.
struct IniEntry {
  std::string key;
  std::string value;
  int line = 0;
};

struct IniSection {
  std::string name;
  int line = 0;
  std::vector<IniEntry> entries;
};

/// Sections in file order. Lines are `[section]`, `key = value`, blank, or
/// comments starting with `#` or `;`. Errors carry `source:line:`.
struct IniDocument {
  std::string source;
  std::vector<IniSection> sections;

  static IniDocument parse(const std::string& text, const std::string& source = "<config>");
};

struct ProbeSettings {
  int train_samples = 40000;
  int test_samples = 10000;
  int burn_in = 30;
  int max_episode_steps = 300;
  int epochs = 30;
  int batch = 256;
  int hidden = 64;
  double learning_rate = 1e-3;
  std::uint64_t seed = 7;
};

struct EvaluationSettings {
  int param_sets = 10;
  double cap_seconds = 40.0;  // survivors are reported as exactly this
  std::uint64_t seed = 1234;
  int cycles = 3;  // gait cycles rolled for the latent projection
};

struct RunConfig {
  std::string environment = "biped";  // biped | diagnostic
  std::uint64_t seed = 1;
  int workers = 1;
  std::string out = "runs/default";

  // [env]
  double command_speed = 1.0;
  double init_noise = 0.02;
  double observation_noise = 0.0;
  double force_limit = 10.0;
  double command_lo = 0.0;
  double command_hi = 1.5;
  int command_interval = 100;
  int episode_steps = 300;

  bool randomize = true;
  dynrand::RandomizationSpec randomization = dynrand::RandomizationSpec::biped_default();

  nn::Family family = nn::Family::kLstm;
  int units = 0;  // 0 picks the family default (128 LSTM, 300 dense)

  rppo::PpoConfig ppo;
  ProbeSettings probe;
  EvaluationSettings evaluation;

  void validate() const;
  dynrand::Domain domain() const;
  /// The randomization training samples from: empty when randomization is off.
  dynrand::RandomizationSpec active_randomization() const;
};

RunConfig parse_run_config(const std::string& text, const std::string& source = "<config>");
RunConfig load_run_config(const std::string& path);

/// Every field, including defaults, in a form parse_run_config reads back.
std::string write_run_config(const RunConfig& config);

/// FNV-1a digest of the settings that determine a training run. Worker count,
/// output directory and the total timestep budget are excluded so a run can
/// be resumed elsewhere or extended.
std::uint64_t config_digest(const RunConfig& config);

env::EnvFactory make_env_factory(const RunConfig& config);
/// Factory whose environments sample from `spec` instead of the configured one.
env::EnvFactory make_env_factory(const RunConfig& config, const dynrand::RandomizationSpec& spec);
nn::NetworkSpec make_policy_spec(const RunConfig& config);

}  // namespace mloc::io
