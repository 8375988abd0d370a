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

#include "mloc/env/reward.hpp"

#include <algorithm>
#include <cmath>

namespace mloc::env {
namespace {

// exp(-700) is still a normal double, which keeps every term strictly positive.
double term(double error) { return std::exp(-std::min(error, 700.0)); }

}  // namespace

double compute_reward(const TrackingErrors& e, const RewardWeights& w) {
  return w.joints * term(e.joints) + w.velocity * term(e.velocity) + w.position * term(e.position) +
         w.orientation * term(e.orientation);
}

}  // namespace mloc::env
