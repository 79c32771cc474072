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

#ifndef SNNCL_ACCOUNTING_HPP
#define SNNCL_ACCOUNTING_HPP

#include "snncl/network.hpp"

namespace snncl {

// Exact operation counts for one forward pass. A spike entering a layer
// costs one synaptic operation per outgoing connection (the layer's output
// width); an emitted spike additionally drives the recurrent matrix with the
// same fan-out. Every neuron is updated once per timestep regardless of
// activity.
struct ForwardCounts {
  long long synops = 0;
  long long neuron_updates = 0;
};

ForwardCounts count_forward(const NetworkTopology& net, int start_layer,
                            const SpikeTrain& input,
                            const std::vector<LayerTrace>& traces);

// Accumulator threaded through training and evaluation so a whole run's
// operation totals are exact, not sampled.
struct RunStats {
  long long synops = 0;
  long long neuron_updates = 0;

  void add(const ForwardCounts& c) {
    synops += c.synops;
    neuron_updates += c.neuron_updates;
  }
};

}  // namespace snncl

#endif  // SNNCL_ACCOUNTING_HPP
