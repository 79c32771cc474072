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

#ifndef SNNCL_PRETRAIN_HPP
#define SNNCL_PRETRAIN_HPP

#include <cstdint>
#include <vector>

#include "snncl/accounting.hpp"
#include "snncl/loss.hpp"
#include "snncl/network.hpp"
#include "snncl/optimizer.hpp"

namespace snncl {

struct LabeledTrain {
  SpikeTrain train;
  int label = 0;
};

struct PretrainMetrics {
  std::vector<double> epoch_accuracy;  // training accuracy per epoch
  std::vector<double> epoch_loss;      // mean loss per epoch
};

// Minibatch surrogate-gradient training of all learnable layers. Sample
// order is shuffled per epoch with the given seed; gradients are summed in
// sample order before the update so identical seeds give identical weights.
PretrainMetrics pretrain(NetworkTopology& net,
                         const std::vector<LabeledTrain>& data, int epochs,
                         const OptimizerConfig& opt, int batch_size,
                         uint64_t seed, double readout_scale = 1.0,
                         OptimizerState* opt_state = nullptr,
                         RunStats* stats = nullptr);

}  // namespace snncl

#endif  // SNNCL_PRETRAIN_HPP
