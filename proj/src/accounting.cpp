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

#include "snncl/accounting.hpp"

namespace snncl {

namespace {

long long count_spikes(const Eigen::MatrixXd& spikes) {
  long long n = 0;
  for (Eigen::Index i = 0; i < spikes.size(); ++i)
    if (spikes.data()[i] > 0.5) ++n;
  return n;
}

}  // namespace

ForwardCounts count_forward(const NetworkTopology& net, int start_layer,
                            const SpikeTrain& input,
                            const std::vector<LayerTrace>& traces) {
  ForwardCounts c;
  const long long t_total = input.timesteps();
  for (size_t li = 0; li < traces.size(); ++li) {
    const LifLayer& ly = net.layer(start_layer + static_cast<int>(li));
    const long long in_spikes =
        li == 0 ? input.total_spikes() : count_spikes(traces[li - 1].spikes);
    const long long out_spikes = count_spikes(traces[li].spikes);
    c.synops += (in_spikes + out_spikes) * ly.out_width();
    c.neuron_updates += static_cast<long long>(ly.out_width()) * t_total;
  }
  return c;
}

}  // namespace snncl
