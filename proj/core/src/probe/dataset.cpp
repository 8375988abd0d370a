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

#include "mloc/probe/dataset.hpp"

#include <algorithm>
#include <exception>
#include <fstream>
#include <sstream>
#include <thread>

#include "../io/binary.hpp"
#include "mloc/common/error.hpp"
#include "mloc/rppo/rollout.hpp"

namespace mloc::probe {
namespace {

constexpr char kMagic[] = "MLHS";
constexpr std::uint32_t kVersion = 1;

struct EpisodeRecords {
  std::vector<Eigen::VectorXd> latents;
  std::vector<std::int32_t> steps;
  std::vector<double> params;
};

EpisodeRecords harvest_episode(const nn::Network& policy, env::Environment& env, const rppo::Normalizer& normalizer,
                               const HarvestOptions& options, std::int64_t index) {
  EpisodeRecords out;
  rppo::EpisodeOptions eo;
  eo.max_steps = options.max_steps;
  eo.deterministic = true;
  const rppo::Trajectory t = rppo::run_episode(
      policy, nullptr, env, normalizer, rppo::episode_seed(options.seed, static_cast<std::uint64_t>(index)), eo,
      [&](const env::Environment&, const rppo::StepRecord& record) {
        if (record.step < options.burn_in) return;
        out.latents.push_back(options.features == Features::kLatent ? policy.latent(record.policy_cache)
                                                                    : record.observation);
        out.steps.push_back(static_cast<std::int32_t>(record.step));
      });
  out.params = t.params.values;
  return out;
}

void resize(HiddenStateSplit& split, int latent_dim, int params, int n) {
  split.latents.resize(latent_dim, n);
  split.targets.resize(params, n);
  split.episodes.clear();
  split.steps.clear();
}

}  // namespace

HiddenStateDataset harvest_hidden_states(const nn::Network& policy, const env::EnvFactory& factory,
                                         const rppo::Normalizer& normalizer, const HarvestOptions& options) {
  if (options.train_samples < 1 || options.test_samples < 1) throw ConfigError("sample counts must be positive");
  if (options.burn_in < 0 || options.burn_in >= options.max_steps) throw ConfigError("burn-in must be below the step cap");
  const int workers = std::max(1, options.workers);
  const int per_episode = options.max_steps - options.burn_in;
  const int max_episodes = options.max_episodes > 0
                               ? options.max_episodes
                               : 4 * (options.train_samples + options.test_samples) / per_episode + 200;

  std::vector<std::unique_ptr<env::Environment>> envs;
  for (int w = 0; w < workers; ++w) envs.push_back(factory());

  HiddenStateDataset data;
  data.spec = envs.front()->randomization();
  const int latent_dim = options.features == Features::kLatent ? policy.latent_dim() : policy.input_dim();
  const int params = static_cast<int>(data.spec.size());
  resize(data.train, latent_dim, params, options.train_samples);
  resize(data.test, latent_dim, params, options.test_samples);

  int filled_train = 0, filled_test = 0;
  std::int64_t next = 0;
  while (filled_test < options.test_samples) {
    if (next >= max_episodes) {
      throw Error("harvest reached " + std::to_string(max_episodes) + " episodes with only " +
                  std::to_string(filled_train) + "/" + std::to_string(options.train_samples) + " train and " +
                  std::to_string(filled_test) + "/" + std::to_string(options.test_samples) +
                  " test records; episodes end before the burn-in too often");
    }
    // One block of episodes in parallel, merged in episode order.
    const int block = static_cast<int>(std::min<std::int64_t>(workers, max_episodes - next));
    std::vector<EpisodeRecords> results(static_cast<std::size_t>(block));
    std::vector<std::exception_ptr> errors(static_cast<std::size_t>(block));
    std::vector<std::thread> threads;
    for (int w = 0; w < block; ++w) {
      threads.emplace_back([&, w] {
        try {
          results[static_cast<std::size_t>(w)] = harvest_episode(policy, *envs[static_cast<std::size_t>(w)],
                                                                  normalizer, options, next + w);
        } catch (...) {
          errors[static_cast<std::size_t>(w)] = std::current_exception();
        }
      });
    }
    for (std::thread& t : threads) t.join();
    for (const auto& e : errors) {
      if (e) std::rethrow_exception(e);
    }
    for (int w = 0; w < block && filled_test < options.test_samples; ++w) {
      const EpisodeRecords& r = results[static_cast<std::size_t>(w)];
      const std::int64_t episode = next + w;
      const bool to_train = filled_train < options.train_samples;
      HiddenStateSplit& split = to_train ? data.train : data.test;
      int& filled = to_train ? filled_train : filled_test;
      const int capacity = to_train ? options.train_samples : options.test_samples;
      const Eigen::Map<const Eigen::VectorXd> mu(r.params.data(), params);
      for (std::size_t k = 0; k < r.latents.size() && filled < capacity; ++k, ++filled) {
        split.latents.col(filled) = r.latents[k];
        split.targets.col(filled) = mu;
        split.episodes.push_back(episode);
        split.steps.push_back(r.steps[k]);
      }
      // A partly used episode still belongs to the training pool only.
    }
    next += block;
  }
  return data;
}

std::string serialize_dataset(const HiddenStateDataset& d) {
  io::detail::Writer w;
  w.raw(std::string(kMagic, 4));
  w.u32(kVersion);
  w.u32(static_cast<std::uint32_t>(d.latent_dim()));
  w.u32(static_cast<std::uint32_t>(d.parameter_count()));
  w.u64(static_cast<std::uint64_t>(d.train.size()));
  w.u64(static_cast<std::uint64_t>(d.test.size()));
  w.u8(d.spec.domain == dynrand::Domain::kBiped ? 0 : 1);
  for (const dynrand::Entry& e : d.spec.entries) {
    w.str(e.target);
    w.u8(e.kind == dynrand::Kind::kMultiplier ? 0 : 1);
    w.f64(e.lo);
    w.f64(e.hi);
  }
  for (const HiddenStateSplit* split : {&d.train, &d.test}) {
    for (Eigen::Index i = 0; i < split->size(); ++i) {
      for (const double v : split->latents.col(i)) w.f64(v);
      for (const double v : split->targets.col(i)) w.f64(v);
      w.i64(split->episodes[static_cast<std::size_t>(i)]);
      w.u32(static_cast<std::uint32_t>(split->steps[static_cast<std::size_t>(i)]));
    }
  }
  return w.bytes();
}

HiddenStateDataset deserialize_dataset(const std::string& bytes) {
  io::detail::Reader r(bytes);
  if (bytes.size() < 4 || r.raw(4) != std::string(kMagic, 4)) throw FormatError("not a hidden-state dataset");
  const std::uint32_t version = r.u32();
  if (version != kVersion) throw FormatError("dataset version " + std::to_string(version) + " is not supported");
  const int latent_dim = static_cast<int>(r.u32());
  const int params = static_cast<int>(r.u32());
  const std::uint64_t n_train = r.u64(), n_test = r.u64();
  HiddenStateDataset d;
  d.spec.domain = r.u8() == 0 ? dynrand::Domain::kBiped : dynrand::Domain::kDiagnostic;
  d.spec.entries.resize(static_cast<std::size_t>(params));
  for (dynrand::Entry& e : d.spec.entries) {
    e.target = r.str();
    e.kind = r.u8() == 0 ? dynrand::Kind::kMultiplier : dynrand::Kind::kOffset;
    e.lo = r.f64();
    e.hi = r.f64();
  }
  const std::uint64_t record = 8ULL * static_cast<std::uint64_t>(latent_dim + params) + 12;
  if ((n_train + n_test) * record != r.remaining()) throw FormatError("dataset record count does not match its size");
  for (auto [split, n] : {std::pair{&d.train, n_train}, std::pair{&d.test, n_test}}) {
    resize(*split, latent_dim, params, static_cast<int>(n));
    for (Eigen::Index i = 0; i < static_cast<Eigen::Index>(n); ++i) {
      for (double& v : split->latents.col(i)) v = r.f64();
      for (double& v : split->targets.col(i)) v = r.f64();
      split->episodes.push_back(r.i64());
      split->steps.push_back(static_cast<std::int32_t>(r.u32()));
    }
  }
  return d;
}

void save_dataset(const HiddenStateDataset& dataset, const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw FormatError("cannot write " + path);
  const std::string bytes = serialize_dataset(dataset);
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
}

HiddenStateDataset load_dataset(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return deserialize_dataset(buffer.str());
}

}  // namespace mloc::probe
