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

#include <benchmark/benchmark.h>

#include "mloc/env/biped_env.hpp"
#include "mloc/env/diagnostic_env.hpp"
#include "mloc/nn/adam.hpp"
#include "mloc/nn/network.hpp"
#include "mloc/probe/pca.hpp"
#include "mloc/rppo/objective.hpp"

namespace {

using namespace mloc;

nn::Network make_net(nn::Family family, int units) {
  nn::Network net(family == nn::Family::kLstm ? nn::NetworkSpec::lstm(env::kBipedObservationDim, 4, units)
                                              : nn::NetworkSpec::feedforward(env::kBipedObservationDim, 4, units));
  Rng rng(1);
  net.initialize(rng);
  return net;
}

Eigen::MatrixXd random_matrix(Eigen::Index rows, Eigen::Index cols, std::uint64_t seed) {
  Rng rng(seed);
  Eigen::MatrixXd m(rows, cols);
  for (double& v : m.reshaped()) v = rng.normal();
  return m;
}

static void BM_LstmStep(benchmark::State& state) {
  const nn::Network net = make_net(nn::Family::kLstm, 128);
  const auto batch = state.range(0);
  const Eigen::MatrixXd x = random_matrix(net.input_dim(), batch, 2);
  nn::RecurrentState s = net.initial_state(batch);
  for (auto _ : state) benchmark::DoNotOptimize(net.step(x, s));
  state.SetItemsProcessed(state.iterations() * batch);
}
BENCHMARK(BM_LstmStep)->Arg(1)->Arg(64);

static void BM_FeedforwardStep(benchmark::State& state) {
  const nn::Network net = make_net(nn::Family::kFeedforward, 300);
  const auto batch = state.range(0);
  const Eigen::MatrixXd x = random_matrix(net.input_dim(), batch, 3);
  nn::RecurrentState s = net.initial_state(batch);
  for (auto _ : state) benchmark::DoNotOptimize(net.step(x, s));
  state.SetItemsProcessed(state.iterations() * batch);
}
BENCHMARK(BM_FeedforwardStep)->Arg(1)->Arg(1024);

// Forward with caches plus the full backward pass over a padded batch.
static void BM_LstmBptt(benchmark::State& state) {
  const nn::Network net = make_net(nn::Family::kLstm, 128);
  const auto steps = static_cast<std::size_t>(state.range(0));
  const Eigen::Index batch = 8;
  const Eigen::MatrixXd x = random_matrix(net.input_dim(), batch, 4);
  const std::vector<Eigen::MatrixXd> upstream(steps, random_matrix(net.output_dim(), batch, 5));
  const std::vector<Eigen::RowVectorXd> mask(steps, Eigen::RowVectorXd::Ones(batch));
  std::vector<nn::StepCache> caches(steps);
  for (auto _ : state) {
    nn::RecurrentState s = net.initial_state(batch);
    for (std::size_t t = 0; t < steps; ++t) net.step(x, s, &caches[t]);
    benchmark::DoNotOptimize(net.bptt_gradients(caches, upstream, mask));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(steps) * batch);
}
BENCHMARK(BM_LstmBptt)->Arg(30)->Arg(300)->Unit(benchmark::kMillisecond);

static void BM_AdamUpdate(benchmark::State& state) {
  nn::Network net = make_net(nn::Family::kLstm, 128);
  nn::AdamState adam = nn::AdamState::fresh(net.parameter_count(), {.learning_rate = 1e-4});
  const Eigen::VectorXd grad = random_matrix(static_cast<Eigen::Index>(net.parameter_count()), 1, 6);
  for (auto _ : state) nn::adam_update(net.parameters(), grad, adam);
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(net.parameter_count()));
}
BENCHMARK(BM_AdamUpdate);

static void BM_PhysicsSubstep(benchmark::State& state) {
  const env::BipedModel model = env::BipedEnvConfig::defaults().model;
  env::BipedState s = env::standing_state(model, model.stand_posture);
  for (auto _ : state) {
    env::physics_substep(s, {0, 0, 0, 0}, model);
    benchmark::DoNotOptimize(s.q);
  }
}
BENCHMARK(BM_PhysicsSubstep);

// One 33 Hz policy step: 60 physics substeps with the PD loop and the reward.
static void BM_BipedEnvStep(benchmark::State& state) {
  env::BipedEnv e(env::BipedEnvConfig::defaults());
  Rng rng(7);
  e.reset(rng);
  const Eigen::VectorXd action = Eigen::VectorXd::Zero(4);
  for (auto _ : state) {
    if (e.step(action).done) e.reset(rng);
  }
}
BENCHMARK(BM_BipedEnvStep);

static void BM_DiagnosticEnvStep(benchmark::State& state) {
  env::DiagnosticEnv e;
  Rng rng(8);
  e.reset(rng);
  const Eigen::VectorXd action = Eigen::VectorXd::Constant(1, 0.3);
  for (auto _ : state) {
    if (e.step(action).done) e.reset(rng);
  }
}
BENCHMARK(BM_DiagnosticEnvStep);

static void BM_Gae(benchmark::State& state) {
  const Eigen::Index n = state.range(0);
  const Eigen::RowVectorXd r = random_matrix(1, n, 9), v = random_matrix(1, n, 10);
  for (auto _ : state) benchmark::DoNotOptimize(rppo::generalized_advantages(r, v, 0.5, 0.99, 0.95));
  state.SetItemsProcessed(state.iterations() * n);
}
BENCHMARK(BM_Gae)->Arg(300);

static void BM_PcaTop2(benchmark::State& state) {
  const Eigen::MatrixXd latents = random_matrix(state.range(0), 256, 11);
  for (auto _ : state) benchmark::DoNotOptimize(probe::pca_top2(latents));
}
BENCHMARK(BM_PcaTop2)->Arg(84)->Arg(1000)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
