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

#include <cstddef>
#include <string>
#include <vector>

namespace mloc::nn {

using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// Named tensor with row-major values; the unit of serialization.
struct ParamTensor {
  std::string name;
  std::vector<std::size_t> shape;
  std::vector<double> values;

  std::size_t element_count() const;
  bool operator==(const ParamTensor&) const = default;
};

/// Flat storage for every trainable tensor of one network. Gradients and
/// optimizer moments share the same flat layout.
class ParameterStore {
 public:
  struct Slot {
    std::string name;
    std::vector<std::size_t> shape;
    std::size_t offset = 0;
    std::size_t count = 0;
  };

  /// Appends a zero-initialized tensor and returns its flat offset.
  std::size_t add(std::string name, std::vector<std::size_t> shape);

  std::size_t size() const { return static_cast<std::size_t>(values_.size()); }
  Eigen::VectorXd& flat() { return values_; }
  const Eigen::VectorXd& flat() const { return values_; }
  const std::vector<Slot>& slots() const { return slots_; }

  /// Name of the tensor that owns flat element `index`.
  const std::string& name_at(std::size_t index) const;

  std::vector<ParamTensor> export_tensors() const;
  /// Replaces values; names, order and shapes must match exactly.
  void import_tensors(const std::vector<ParamTensor>& tensors);

  Eigen::Map<const RowMatrix> matrix(std::size_t offset, Eigen::Index rows, Eigen::Index cols) const {
    return {values_.data() + offset, rows, cols};
  }
  Eigen::Map<const Eigen::VectorXd> vector(std::size_t offset, Eigen::Index n) const {
    return {values_.data() + offset, n};
  }

 private:
  std::vector<Slot> slots_;
  Eigen::VectorXd values_;
};

}  // namespace mloc::nn
