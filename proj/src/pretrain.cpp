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

#include "snncl/pretrain.hpp"

#include <algorithm>
#include <numeric>
#include <random>

#include "snncl/bptt.hpp"

namespace snncl {

PretrainMetrics pretrain(NetworkTopology& net,
                         const std::vector<LabeledTrain>& data, int epochs,
                         const OptimizerConfig& opt, int batch_size,
                         uint64_t seed, double readout_scale,
                         OptimizerState* opt_state, RunStats* stats) {
  SNNCL_CHECK(!data.empty(), "pretrain: dataset must be nonempty");
  SNNCL_CHECK(batch_size >= 1, "pretrain: batch_size must be >= 1");
  for (const LabeledTrain& s : data) {
    SNNCL_CHECK(s.label >= 0 && s.label < net.out_width(),
                "pretrain: label outside the readout range");
  }

  std::mt19937_64 rng(seed);
  OptimizerState local_state;
  OptimizerState& state = opt_state != nullptr ? *opt_state : local_state;

  PretrainMetrics metrics;
  std::vector<int> order(data.size());
  std::iota(order.begin(), order.end(), 0);

  for (int ep = 0; ep < epochs; ++ep) {
    std::shuffle(order.begin(), order.end(), rng);
    long correct = 0;
    double loss_sum = 0.0;

    for (size_t b = 0; b < order.size(); b += batch_size) {
      const size_t b_end = std::min(order.size(), b + batch_size);
      GradientSet batch_grads = GradientSet::zeros(net);
      for (size_t i = b; i < b_end; ++i) {
        const LabeledTrain& sample = data[order[i]];
        ForwardResult fwd = network_forward(net, sample.train);
        if (stats != nullptr)
          stats->add(count_forward(net, 1, sample.train, fwd.traces));
        const LossReport rep =
            readout_loss(fwd.output, sample.label, readout_scale);
        loss_sum += rep.loss;
        if (rep.predicted == sample.label) ++correct;

        Eigen::VectorXd readout(net.out_width());
        for (int n = 0; n < net.out_width(); ++n)
          readout[n] = static_cast<double>(rep.spike_counts[n]);
        Eigen::VectorXd loss_grad;
        cross_entropy_readout(readout, sample.label, readout_scale,
                              &loss_grad);
        batch_grads.accumulate(bptt_backward(net, sample.train, fwd.traces,
                                             loss_grad,
                                             /*first_learning_layer=*/1));
      }
      batch_grads.scale(1.0 / static_cast<double>(b_end - b));
      apply_update(net, batch_grads, opt, state);
    }

    metrics.epoch_accuracy.push_back(static_cast<double>(correct) /
                                     static_cast<double>(data.size()));
    metrics.epoch_loss.push_back(loss_sum / static_cast<double>(data.size()));
  }
  return metrics;
}

}  // namespace snncl
