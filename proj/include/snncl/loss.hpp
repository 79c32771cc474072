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

#ifndef SNNCL_LOSS_HPP
#define SNNCL_LOSS_HPP

#include <Eigen/Dense>
#include <vector>

#include "snncl/spike_train.hpp"

namespace snncl {

struct LossReport {
  double loss = 0.0;
  std::vector<long> spike_counts;  // per output neuron over all timesteps
  int predicted = 0;               // argmax of counts, ties to lowest index
};

// Cross-entropy of softmax(readout * scale) against the label. Works on
// real-valued readouts so the smoothed proxy network shares the same loss.
// If `grad` is non-null it receives dloss/dreadout.
double cross_entropy_readout(const Eigen::VectorXd& readout, int label,
                             double scale, Eigen::VectorXd* grad = nullptr);

// Argmax with ties broken by lowest index.
int argmax_readout(const Eigen::VectorXd& readout);

// Spike-count readout loss over a binary output train.
LossReport readout_loss(const SpikeTrain& output, int label,
                        double scale = 1.0);

}  // namespace snncl

#endif  // SNNCL_LOSS_HPP
