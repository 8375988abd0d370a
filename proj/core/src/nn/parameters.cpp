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

#include "mloc/nn/parameters.hpp"

#include <cmath>
#include <functional>
#include <numeric>

#include "mloc/common/error.hpp"

namespace mloc::nn {

std::size_t ParamTensor::element_count() const {
  return std::accumulate(shape.begin(), shape.end(), std::size_t{1}, std::multiplies<>());
}

std::size_t ParameterStore::add(std::string name, std::vector<std::size_t> shape) {
  Slot slot;
  slot.name = std::move(name);
  slot.shape = std::move(shape);
  slot.offset = size();
  slot.count = std::accumulate(slot.shape.begin(), slot.shape.end(), std::size_t{1}, std::multiplies<>());
  const Eigen::Index old = values_.size();
  values_.conservativeResize(old + static_cast<Eigen::Index>(slot.count));
  values_.tail(static_cast<Eigen::Index>(slot.count)).setZero();
  slots_.push_back(std::move(slot));
  return slots_.back().offset;
}

const std::string& ParameterStore::name_at(std::size_t index) const {
  for (const Slot& s : slots_) {
    if (index >= s.offset && index < s.offset + s.count) return s.name;
  }
  throw UsageError("parameter index " + std::to_string(index) + " out of range");
}

std::vector<ParamTensor> ParameterStore::export_tensors() const {
  std::vector<ParamTensor> out;
  out.reserve(slots_.size());
  for (const Slot& s : slots_) {
    ParamTensor t{s.name, s.shape, {}};
    t.values.assign(values_.data() + s.offset, values_.data() + s.offset + s.count);
    out.push_back(std::move(t));
  }
  return out;
}

void ParameterStore::import_tensors(const std::vector<ParamTensor>& tensors) {
  if (tensors.size() != slots_.size()) {
    throw ConfigError("expected " + std::to_string(slots_.size()) + " tensors, got " +
                      std::to_string(tensors.size()));
  }
  for (std::size_t i = 0; i < slots_.size(); ++i) {
    const Slot& s = slots_[i];
    const ParamTensor& t = tensors[i];
    if (t.name != s.name || t.shape != s.shape || t.values.size() != s.count) {
      throw ConfigError("tensor '" + t.name + "' does not match slot '" + s.name + "'");
    }
    for (double v : t.values) {
      if (!std::isfinite(v)) throw NumericalError("tensor '" + t.name + "' holds a non-finite value");
    }
  }
  for (std::size_t i = 0; i < slots_.size(); ++i) {
    std::copy(tensors[i].values.begin(), tensors[i].values.end(), values_.data() + slots_[i].offset);
  }
}

}  // namespace mloc::nn
