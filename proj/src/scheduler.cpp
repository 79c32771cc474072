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

#include "snncl/scheduler.hpp"

#include <cmath>

#include "snncl/error.hpp"

namespace snncl {

namespace {

double mean_of(const std::vector<int>& values) {
  double sum = 0.0;
  for (int v : values) sum += v;
  return sum / static_cast<double>(values.size());
}

double sigmoid_decay(int t) { return 1.0 / (1.0 + std::exp(-0.001 * t)); }

}  // namespace

void threshold_step(ThresholdSchedulerState& s, bool spikes_this_step,
                    ScheduleMode mode) {
  SNNCL_CHECK(s.t < s.t_step, "threshold_step: step beyond t_step");

  if (mode == ScheduleMode::kPrepare) {
    if (s.t % s.adjust_interval == 0) {
      // Spike-driven branch only; with no spikes yet the threshold holds.
      if (!s.spike_timing.empty()) {
        const double avg_spike_time = mean_of(s.spike_timing);
        s.current_v_thr = 1.0 + 0.01 * (s.t_step - avg_spike_time);
      }
    } else {
      s.current_v_thr = sigmoid_decay(s.t);
    }
  } else {
    // NCL mode: the spike-driven branch fires whenever the recent window
    // (the last adjust_interval steps) saw any spike.
    std::vector<int> window;
    for (int ts : s.spike_timing)
      if (ts >= s.t - s.adjust_interval) window.push_back(ts);
    if (!window.empty()) {
      const double avg_spike_time = mean_of(window);
      s.current_v_thr = 1.0 + 0.01 * (s.t_step - avg_spike_time);
    } else {
      s.current_v_thr = sigmoid_decay(s.t);
    }
  }

  if (spikes_this_step) s.spike_timing.push_back(s.t);
  ++s.t;
}

double lr_policy(double eta_pre) {
  SNNCL_CHECK(eta_pre > 0.0, "lr_policy: eta_pre must be positive");
  return eta_pre / 100.0;
}

}  // namespace snncl
