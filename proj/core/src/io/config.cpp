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

#include "mloc/io/config.hpp"

#include <charconv>
#include <fstream>
#include <functional>
#include <sstream>

#include "mloc/common/error.hpp"
#include "mloc/env/biped_env.hpp"
#include "mloc/env/diagnostic_env.hpp"

namespace mloc::io {
namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::string strip_comment(const std::string& line) {
  for (std::size_t i = 0; i < line.size(); ++i) {
    if ((line[i] == '#' || line[i] == ';') && (i == 0 || line[i - 1] == ' ' || line[i - 1] == '\t')) {
      return line.substr(0, i);
    }
  }
  return line;
}

[[noreturn]] void fail(const std::string& source, int line, const std::string& message) {
  throw ConfigError(source + ":" + std::to_string(line) + ": " + message);
}

template <typename T>
T parse_integer(const std::string& text) {
  T value{};
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size()) throw ConfigError("expected an integer, got '" + text + "'");
  return value;
}

double parse_double(const std::string& text) {
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size()) throw ConfigError("expected a number, got '" + text + "'");
  return value;
}

bool parse_bool(const std::string& text) {
  if (text == "true" || text == "yes" || text == "on" || text == "1") return true;
  if (text == "false" || text == "no" || text == "off" || text == "0") return false;
  throw ConfigError("expected true or false, got '" + text + "'");
}

std::string format_double(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

struct Field {
  const char* section;
  const char* key;
  std::function<std::string()> get;
  std::function<void(const std::string&)> set;
};

template <typename T>
Field integer_field(const char* section, const char* key, T& ref) {
  return {section, key, [&ref] { return std::to_string(ref); }, [&ref](const std::string& v) { ref = parse_integer<T>(v); }};
}

Field double_field(const char* section, const char* key, double& ref) {
  return {section, key, [&ref] { return format_double(ref); }, [&ref](const std::string& v) { ref = parse_double(v); }};
}

Field bool_field(const char* section, const char* key, bool& ref) {
  return {section, key, [&ref] { return std::string(ref ? "true" : "false"); },
          [&ref](const std::string& v) { ref = parse_bool(v); }};
}

Field string_field(const char* section, const char* key, std::string& ref) {
  return {section, key, [&ref] { return ref; }, [&ref](const std::string& v) { ref = v; }};
}

std::vector<Field> fields(RunConfig& c) {
  rppo::PpoConfig& p = c.ppo;
  return {
      string_field("run", "environment", c.environment),
      integer_field("run", "seed", c.seed),
      integer_field("run", "workers", c.workers),
      string_field("run", "out", c.out),
      double_field("env", "command_speed", c.command_speed),
      double_field("env", "init_noise", c.init_noise),
      double_field("env", "observation_noise", c.observation_noise),
      double_field("env", "force_limit", c.force_limit),
      double_field("env", "command_lo", c.command_lo),
      double_field("env", "command_hi", c.command_hi),
      integer_field("env", "command_interval", c.command_interval),
      integer_field("env", "episode_steps", c.episode_steps),
      {"policy", "family", [&c] { return nn::to_string(c.family); },
       [&c](const std::string& v) { c.family = nn::family_from_string(v); }},
      integer_field("policy", "units", c.units),
      double_field("ppo", "clip", p.clip),
      double_field("ppo", "kl_threshold", p.kl_threshold),
      integer_field("ppo", "epochs", p.epochs),
      integer_field("ppo", "rollouts", p.rollouts),
      integer_field("ppo", "timesteps_per_iteration", p.timesteps_per_iteration),
      integer_field("ppo", "total_timesteps", p.total_timesteps),
      integer_field("ppo", "trajectory_batch", p.trajectory_batch),
      integer_field("ppo", "timestep_batch", p.timestep_batch),
      double_field("ppo", "gamma", p.gamma),
      double_field("ppo", "lambda", p.lambda),
      double_field("ppo", "learning_rate", p.learning_rate),
      double_field("ppo", "critic_learning_rate", p.critic_learning_rate),
      integer_field("ppo", "max_episode_steps", p.max_episode_steps),
      integer_field("ppo", "prenormalization_steps", p.prenormalization_steps),
      bool_field("ppo", "normalize_advantages", p.normalize_advantages),
      double_field("ppo", "head_scale", p.head_scale),
      double_field("ppo", "value_scale", p.value_scale),
      integer_field("probe", "train_samples", c.probe.train_samples),
      integer_field("probe", "test_samples", c.probe.test_samples),
      integer_field("probe", "burn_in", c.probe.burn_in),
      integer_field("probe", "max_episode_steps", c.probe.max_episode_steps),
      integer_field("probe", "epochs", c.probe.epochs),
      integer_field("probe", "batch", c.probe.batch),
      integer_field("probe", "hidden", c.probe.hidden),
      double_field("probe", "learning_rate", c.probe.learning_rate),
      integer_field("probe", "seed", c.probe.seed),
      integer_field("evaluation", "param_sets", c.evaluation.param_sets),
      double_field("evaluation", "cap_seconds", c.evaluation.cap_seconds),
      integer_field("evaluation", "seed", c.evaluation.seed),
      integer_field("evaluation", "cycles", c.evaluation.cycles),
  };
}

constexpr const char* kSectionOrder[] = {"run", "env", "randomization", "policy", "ppo", "probe", "evaluation"};

dynrand::RandomizationSpec default_spec(dynrand::Domain domain) {
  return domain == dynrand::Domain::kBiped ? dynrand::RandomizationSpec::biped_default()
                                           : dynrand::RandomizationSpec::diagnostic_default();
}

}  // namespace

IniDocument IniDocument::parse(const std::string& text, const std::string& source) {
  IniDocument doc;
  doc.source = source;
  std::istringstream in(text);
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    const std::string s = trim(strip_comment(raw));
    if (s.empty()) continue;
    if (s.front() == '[') {
      if (s.back() != ']') fail(source, line, "unterminated section header");
      const std::string name = trim(s.substr(1, s.size() - 2));
      if (name.empty()) fail(source, line, "empty section name");
      for (const IniSection& sec : doc.sections) {
        if (sec.name == name) fail(source, line, "duplicate section [" + name + "]");
      }
      doc.sections.push_back({name, line, {}});
      continue;
    }
    const auto eq = s.find('=');
    if (eq == std::string::npos) fail(source, line, "expected 'key = value'");
    if (doc.sections.empty()) fail(source, line, "entry before any section header");
    IniEntry entry{trim(s.substr(0, eq)), trim(s.substr(eq + 1)), line};
    if (entry.key.empty()) fail(source, line, "empty key");
    for (const IniEntry& e : doc.sections.back().entries) {
      if (e.key == entry.key) fail(source, line, "duplicate key '" + entry.key + "'");
    }
    doc.sections.back().entries.push_back(std::move(entry));
  }
  return doc;
}

dynrand::Domain RunConfig::domain() const {
  if (environment == "biped") return dynrand::Domain::kBiped;
  if (environment == "diagnostic") return dynrand::Domain::kDiagnostic;
  throw ConfigError("unknown environment '" + environment + "' (expected biped or diagnostic)");
}

dynrand::RandomizationSpec RunConfig::active_randomization() const {
  return randomize ? randomization : dynrand::RandomizationSpec::none(domain());
}

void RunConfig::validate() const {
  const dynrand::Domain d = domain();
  if (workers < 1) throw ConfigError("run.workers must be at least 1");
  if (out.empty()) throw ConfigError("run.out must not be empty");
  if (randomization.domain != d) throw ConfigError("randomization entries belong to another environment");
  randomization.validate();
  if (units < 0) throw ConfigError("policy.units must be non-negative");
  ppo.validate();
  if (probe.train_samples < 1 || probe.test_samples < 1) throw ConfigError("probe sample counts must be positive");
  if (probe.burn_in < 0 || probe.burn_in >= probe.max_episode_steps) {
    throw ConfigError("probe.burn_in must lie in [0, probe.max_episode_steps)");
  }
  if (probe.epochs < 1 || probe.batch < 1 || probe.hidden < 1 || !(probe.learning_rate > 0.0)) {
    throw ConfigError("probe epochs, batch, hidden and learning_rate must be positive");
  }
  if (evaluation.param_sets < 1 || !(evaluation.cap_seconds > 0.0) || evaluation.cycles < 1) {
    throw ConfigError("evaluation param_sets, cap_seconds and cycles must be positive");
  }
  if (d == dynrand::Domain::kBiped) {
    env::BipedEnvConfig cfg = env::BipedEnvConfig::defaults();
    cfg.command_speed = command_speed;
    cfg.init_noise = init_noise;
    cfg.observation_noise = observation_noise;
    cfg.validate();
  } else {
    env::DiagnosticConfig cfg;
    cfg.force_limit = force_limit;
    cfg.command_lo = command_lo;
    cfg.command_hi = command_hi;
    cfg.command_interval = command_interval;
    cfg.episode_steps = episode_steps;
    cfg.validate();
  }
}

RunConfig parse_run_config(const std::string& text, const std::string& source) {
  const IniDocument doc = IniDocument::parse(text, source);
  RunConfig config;
  std::vector<Field> table = fields(config);
  const IniSection* randomization = nullptr;
  for (const IniSection& section : doc.sections) {
    bool known = false;
    for (const char* name : kSectionOrder) known = known || section.name == name;
    if (!known) fail(source, section.line, "unknown section [" + section.name + "]");
    if (section.name == "randomization") {
      randomization = &section;
      continue;
    }
    for (const IniEntry& entry : section.entries) {
      const Field* field = nullptr;
      for (const Field& f : table) {
        if (section.name == f.section && entry.key == f.key) field = &f;
      }
      if (!field) fail(source, entry.line, "unknown key '" + entry.key + "' in [" + section.name + "]");
      try {
        field->set(entry.value);
      } catch (const Error& e) {
        fail(source, entry.line, section.name + "." + entry.key + ": " + e.what());
      }
    }
  }

  dynrand::Domain domain;
  try {
    domain = config.domain();
  } catch (const Error& e) {
    int line = 0;
    for (const IniSection& s : doc.sections) {
      for (const IniEntry& e2 : s.entries) {
        if (s.name == "run" && e2.key == "environment") line = e2.line;
      }
    }
    fail(source, line, e.what());
  }
  config.randomization = default_spec(domain);
  if (randomization) {
    // Listed entries replace the environment's default spec.
    dynrand::RandomizationSpec spec{domain, {}};
    for (const IniEntry& entry : randomization->entries) {
      try {
        if (entry.key == "enabled") {
          config.randomize = parse_bool(entry.value);
          continue;
        }
        std::istringstream fields_in(entry.value);
        std::string kind, lo, hi, extra;
        if (!(fields_in >> kind >> lo >> hi) || (fields_in >> extra)) {
          throw ConfigError("expected '<multiplier|offset> <lo> <hi>'");
        }
        spec.entries.push_back({entry.key, dynrand::kind_from_string(kind), parse_double(lo), parse_double(hi)});
        spec.validate();
      } catch (const Error& e) {
        fail(source, entry.line, "randomization." + entry.key + ": " + e.what());
      }
    }
    if (!spec.entries.empty()) config.randomization = std::move(spec);
  }
  try {
    config.validate();
  } catch (const Error& e) {
    throw ConfigError(source + ": " + e.what());
  }
  return config;
}

RunConfig load_run_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_run_config(buffer.str(), path);
}

std::string write_run_config(const RunConfig& config) {
  RunConfig copy = config;
  const std::vector<Field> table = fields(copy);
  std::ostringstream out;
  out << "# resolved configuration\n";
  for (const char* section : kSectionOrder) {
    out << "\n[" << section << "]\n";
    if (std::string(section) == "randomization") {
      out << "enabled = " << (config.randomize ? "true" : "false") << "\n";
      for (const dynrand::Entry& e : config.randomization.entries) {
        out << e.target << " = " << dynrand::to_string(e.kind) << " " << format_double(e.lo) << " "
            << format_double(e.hi) << "\n";
      }
      continue;
    }
    for (const Field& f : table) {
      if (std::string(f.section) == section) out << f.key << " = " << f.get() << "\n";
    }
  }
  return out.str();
}

std::uint64_t config_digest(const RunConfig& config) {
  RunConfig canonical = config;
  canonical.workers = 1;
  canonical.out = "-";
  canonical.ppo.total_timesteps = 0;
  canonical.probe = ProbeSettings{};
  canonical.evaluation = EvaluationSettings{};
  std::uint64_t h = 1469598103934665603ULL;
  for (const unsigned char ch : write_run_config(canonical)) {
    h ^= ch;
    h *= 1099511628211ULL;
  }
  return h;
}

env::EnvFactory make_env_factory(const RunConfig& config, const dynrand::RandomizationSpec& spec) {
  if (config.domain() == dynrand::Domain::kBiped) {
    env::BipedEnvConfig cfg = env::BipedEnvConfig::defaults();
    cfg.command_speed = config.command_speed;
    cfg.init_noise = config.init_noise;
    cfg.observation_noise = config.observation_noise;
    cfg.randomization = spec;
    cfg.validate();
    return [cfg] { return std::make_unique<env::BipedEnv>(cfg); };
  }
  env::DiagnosticConfig cfg;
  cfg.force_limit = config.force_limit;
  cfg.command_lo = config.command_lo;
  cfg.command_hi = config.command_hi;
  cfg.command_interval = config.command_interval;
  cfg.episode_steps = config.episode_steps;
  cfg.randomization = spec;
  cfg.validate();
  return [cfg] { return std::make_unique<env::DiagnosticEnv>(cfg); };
}

env::EnvFactory make_env_factory(const RunConfig& config) {
  return make_env_factory(config, config.active_randomization());
}

nn::NetworkSpec make_policy_spec(const RunConfig& config) {
  const int obs = config.domain() == dynrand::Domain::kBiped ? env::kBipedObservationDim : 2;
  const int act = config.domain() == dynrand::Domain::kBiped ? env::kNumJoints : 1;
  if (config.family == nn::Family::kLstm) return nn::NetworkSpec::lstm(obs, act, config.units > 0 ? config.units : 128);
  return nn::NetworkSpec::feedforward(obs, act, config.units > 0 ? config.units : 300);
}

}  // namespace mloc::io
