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

#include "mloc/io/checkpoint.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "binary.hpp"
#include "mloc/common/error.hpp"

namespace mloc::io {
namespace {

constexpr char kMagic[] = "MLOC";

void write_tensors(detail::Writer& w, const std::vector<nn::ParamTensor>& tensors) {
  w.u32(static_cast<std::uint32_t>(tensors.size()));
  for (const nn::ParamTensor& t : tensors) {
    w.str(t.name);
    w.u32(static_cast<std::uint32_t>(t.shape.size()));
    for (const std::size_t d : t.shape) w.u64(d);
    w.u64(t.values.size());
    for (const double v : t.values) w.f64(v);
  }
}

std::vector<nn::ParamTensor> read_tensors(detail::Reader& r) {
  std::vector<nn::ParamTensor> tensors(r.u32());
  for (nn::ParamTensor& t : tensors) {
    t.name = r.str();
    t.shape.resize(r.u32());
    for (std::size_t& d : t.shape) d = r.u64();
    t.values.resize(r.count(8));
    for (double& v : t.values) v = r.f64();
    if (t.values.size() != t.element_count()) throw FormatError("tensor " + t.name + " has a wrong value count");
  }
  return tensors;
}

void write_vector(detail::Writer& w, const Eigen::VectorXd& v) {
  w.u64(static_cast<std::uint64_t>(v.size()));
  for (const double x : v) w.f64(x);
}

Eigen::VectorXd read_vector(detail::Reader& r) {
  Eigen::VectorXd v(static_cast<Eigen::Index>(r.count(8)));
  for (double& x : v) x = r.f64();
  return v;
}

void write_adam(detail::Writer& w, const nn::AdamState& s) {
  w.f64(s.config.learning_rate);
  w.f64(s.config.beta1);
  w.f64(s.config.beta2);
  w.f64(s.config.epsilon);
  w.i64(s.step);
  write_vector(w, s.first_moment);
  write_vector(w, s.second_moment);
}

nn::AdamState read_adam(detail::Reader& r) {
  nn::AdamState s;
  s.config.learning_rate = r.f64();
  s.config.beta1 = r.f64();
  s.config.beta2 = r.f64();
  s.config.epsilon = r.f64();
  s.step = r.i64();
  s.first_moment = read_vector(r);
  s.second_moment = read_vector(r);
  return s;
}

std::uint64_t element_total(const std::vector<nn::ParamTensor>& tensors) {
  std::uint64_t n = 0;
  for (const nn::ParamTensor& t : tensors) n += t.values.size();
  return n;
}

}  // namespace

Checkpoint Checkpoint::capture(const rppo::Trainer& trainer, std::uint64_t digest, std::string config_text) {
  Checkpoint c;
  c.policy_spec = trainer.policy().spec();
  c.config_digest = digest;
  c.config_text = std::move(config_text);
  c.timesteps = trainer.timesteps();
  c.iteration = trainer.iteration();
  c.policy = trainer.policy().parameters().export_tensors();
  c.critic = trainer.critic().parameters().export_tensors();
  c.normalizer = trainer.normalizer();
  c.policy_adam = trainer.policy_adam();
  c.critic_adam = trainer.critic_adam();
  return c;
}

void Checkpoint::restore(rppo::Trainer& trainer) const {
  if (!(trainer.policy().spec() == policy_spec)) throw FormatError("checkpoint network does not match the configuration");
  trainer.policy().parameters().import_tensors(policy);
  trainer.critic().parameters().import_tensors(critic);
  if (policy_adam.first_moment.size() != static_cast<Eigen::Index>(trainer.policy().parameter_count()) ||
      critic_adam.first_moment.size() != static_cast<Eigen::Index>(trainer.critic().parameter_count())) {
    throw FormatError("checkpoint optimizer state does not match the networks");
  }
  trainer.policy_adam() = policy_adam;
  trainer.critic_adam() = critic_adam;
  trainer.set_normalizer(normalizer);
  trainer.set_progress(iteration, timesteps);
}

nn::Network Checkpoint::make_policy() const {
  nn::Network net(policy_spec);
  net.parameters().import_tensors(policy);
  return net;
}

std::string serialize_checkpoint(const Checkpoint& c) {
  detail::Writer w;
  w.raw(std::string(kMagic, 4));
  w.u32(kCheckpointVersion);
  w.u8(c.policy_spec.family == nn::Family::kLstm ? 0 : 1);
  w.u64(c.config_digest);
  w.i64(c.timesteps);
  w.i64(c.iteration);
  w.u32(static_cast<std::uint32_t>(c.policy_spec.input_dim));
  w.u32(static_cast<std::uint32_t>(c.policy_spec.output_dim));
  w.u32(static_cast<std::uint32_t>(c.policy_spec.hidden.size()));
  for (const int h : c.policy_spec.hidden) w.u32(static_cast<std::uint32_t>(h));
  w.f64(c.policy_spec.output_scale);
  w.str(c.config_text);
  write_tensors(w, c.policy);
  write_tensors(w, c.critic);
  write_vector(w, c.normalizer.mean);
  write_vector(w, c.normalizer.std);
  w.i64(c.normalizer.count);
  write_adam(w, c.policy_adam);
  write_adam(w, c.critic_adam);
  w.u64(element_total(c.policy));
  w.u64(element_total(c.critic));
  return w.bytes();
}

Checkpoint deserialize_checkpoint(const std::string& bytes) {
  detail::Reader r(bytes);
  if (bytes.size() < 4 || r.raw(4) != std::string(kMagic, 4)) throw FormatError("not a checkpoint (bad magic)");
  const std::uint32_t version = r.u32();
  if (version != kCheckpointVersion) {
    throw FormatError("checkpoint version " + std::to_string(version) + " is not supported (expected " +
                      std::to_string(kCheckpointVersion) + ")");
  }
  Checkpoint c;
  const std::uint8_t tag = r.u8();
  if (tag > 1) throw FormatError("unknown policy family tag");
  c.policy_spec.family = tag == 0 ? nn::Family::kLstm : nn::Family::kFeedforward;
  c.config_digest = r.u64();
  c.timesteps = r.i64();
  c.iteration = r.i64();
  c.policy_spec.input_dim = static_cast<int>(r.u32());
  c.policy_spec.output_dim = static_cast<int>(r.u32());
  c.policy_spec.hidden.resize(r.u32());
  for (int& h : c.policy_spec.hidden) h = static_cast<int>(r.u32());
  c.policy_spec.output_scale = r.f64();
  c.config_text = r.str();
  c.policy = read_tensors(r);
  c.critic = read_tensors(r);
  c.normalizer.mean = read_vector(r);
  c.normalizer.std = read_vector(r);
  c.normalizer.count = r.i64();
  c.policy_adam = read_adam(r);
  c.critic_adam = read_adam(r);
  if (r.u64() != element_total(c.policy) || r.u64() != element_total(c.critic)) {
    throw FormatError("checkpoint parameter counts do not match its tensors");
  }
  if (r.remaining() != 0) throw FormatError("trailing bytes after checkpoint");
  return c;
}

void save_checkpoint(const Checkpoint& checkpoint, const std::string& path) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw FormatError("cannot write " + tmp);
    const std::string bytes = serialize_checkpoint(checkpoint);
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw FormatError("short write to " + tmp);
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0) throw FormatError("cannot rename " + tmp + " to " + path);
}

Checkpoint load_checkpoint(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open checkpoint " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  try {
    return deserialize_checkpoint(buffer.str());
  } catch (const FormatError& e) {
    throw FormatError(path + ": " + e.what());
  }
}

}  // namespace mloc::io
