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

#ifndef SNNCL_BPTT_HPP
#define SNNCL_BPTT_HPP

#include <Eigen/Dense>
#include <vector>

#include "snncl/network.hpp"

namespace snncl {

// Per-layer weight gradients over the full network. Entries for frozen
// layers and layers below the first learning layer are zero.
struct GradientSet {
  std::vector<Eigen::MatrixXd> dw;
  std::vector<Eigen::MatrixXd> dv;

  static GradientSet zeros(const NetworkTopology& net);
  bool all_finite() const;
  void accumulate(const GradientSet& other);
  void scale(double factor);
};

// Reverse-time unrolled gradients for layers >= first_learning_layer,
// substituting the fast-sigmoid surrogate for the spike derivative. The
// traces must come from a forward pass starting at `start_layer` on `input`;
// `readout_grad` is dloss/dreadout where readout is the per-neuron sum of
// top-layer spike outputs over time. The reset path is differentiated
// through its smooth interpolation, so on smooth_forward traces this is the
// exact adjoint of the proxy network.
GradientSet bptt_backward(const NetworkTopology& net, const SpikeTrain& input,
                          const std::vector<LayerTrace>& traces,
                          const Eigen::VectorXd& readout_grad,
                          int first_learning_layer, int start_layer = 1);

}  // namespace snncl

#endif  // SNNCL_BPTT_HPP
