// Copyright 2026 The snncl Authors
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

#ifndef SNNCL_OPTIMIZER_HPP
#define SNNCL_OPTIMIZER_HPP

#include <Eigen/Dense>
#include <vector>

#include "snncl/bptt.hpp"
#include "snncl/network.hpp"

namespace snncl {

enum class OptimizerKind : uint8_t { kSgd = 0, kAdam = 1 };

struct OptimizerConfig {
  double eta = 1e-3;
  OptimizerKind kind = OptimizerKind::kAdam;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;

  void validate() const {
    SNNCL_CHECK(eta > 0.0, "OptimizerConfig: eta must be positive");
  }
};

// Adaptive-moment accumulators, one pair per weight matrix. Empty until the
// first update.
struct OptimizerState {
  std::vector<Eigen::MatrixXd> mw, vw, mv, vv;
  long step = 0;

  void ensure_shapes(const NetworkTopology& net);
};

// Applies one optimizer step to the learning layers. Frozen layers are
// skipped outright, so their weights stay bit-identical. Non-finite
// gradients abort the update before any weight is touched.
void apply_update(NetworkTopology& net, const GradientSet& grads,
                  const OptimizerConfig& opt, OptimizerState& state);

}  // namespace snncl

#endif  // SNNCL_OPTIMIZER_HPP
