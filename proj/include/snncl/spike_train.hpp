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

#ifndef SNNCL_SPIKE_TRAIN_HPP
#define SNNCL_SPIKE_TRAIN_HPP

#include <cstdint>
#include <vector>

#include "snncl/error.hpp"

namespace snncl {

// Binary spike tensor over (timestep, neuron). Row-major in t: entry (t, n)
// lives at data[t * width + n]. This is the unit of all inter-layer traffic.
class SpikeTrain {
 public:
  SpikeTrain() = default;
  SpikeTrain(int timesteps, int width)
      : timesteps_(timesteps),
        width_(width),
        data_(static_cast<size_t>(timesteps) * width, 0) {
    SNNCL_CHECK(timesteps >= 0 && width >= 0, "SpikeTrain: negative shape");
  }

  int timesteps() const { return timesteps_; }
  int width() const { return width_; }

  uint8_t at(int t, int n) const { return data_[idx(t, n)]; }
  void set(int t, int n, uint8_t v) {
    SNNCL_CHECK(v == 0 || v == 1, "SpikeTrain: entries must be 0 or 1");
    data_[idx(t, n)] = v;
  }

  const std::vector<uint8_t>& data() const { return data_; }

  // Total number of spikes in the train.
  long total_spikes() const {
    long s = 0;
    for (uint8_t v : data_) s += v;
    return s;
  }

  // Spike count per neuron, summed over timesteps.
  std::vector<long> per_neuron_counts() const {
    std::vector<long> counts(width_, 0);
    for (int t = 0; t < timesteps_; ++t)
      for (int n = 0; n < width_; ++n) counts[n] += at(t, n);
    return counts;
  }

  bool operator==(const SpikeTrain& o) const {
    return timesteps_ == o.timesteps_ && width_ == o.width_ &&
           data_ == o.data_;
  }

 private:
  size_t idx(int t, int n) const {
    SNNCL_CHECK(t >= 0 && t < timesteps_ && n >= 0 && n < width_,
                "SpikeTrain: index out of range");
    return static_cast<size_t>(t) * width_ + n;
  }

  int timesteps_ = 0;
  int width_ = 0;
  std::vector<uint8_t> data_;
};

}  // namespace snncl

#endif  // SNNCL_SPIKE_TRAIN_HPP
