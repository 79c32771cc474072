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

#ifndef SNNCL_SCHEDULER_HPP
#define SNNCL_SCHEDULER_HPP

#include <memory>
#include <vector>

#include "snncl/network.hpp"

namespace snncl {

enum class ScheduleMode : uint8_t { kPrepare = 0, kNcl = 1 };

// Adaptive-threshold state. The threshold rises when spikes arrive early in
// the window (1 + 0.01 * (T_step - mean spike time)) and otherwise relaxes
// along a slow sigmoid in t. In prepare mode the spike-driven branch only
// runs every adjust_interval steps; in ncl mode it runs whenever the recent
// window saw a spike.
struct ThresholdSchedulerState {
  int adjust_interval = 5;
  std::vector<int> spike_timing;
  double current_v_thr = 1.0;
  int t = 0;
  int t_step = 0;

  ThresholdSchedulerState() = default;
  ThresholdSchedulerState(int t_step_, int adjust_interval_ = 5,
                          double initial_v_thr = 1.0)
      : adjust_interval(adjust_interval_),
        current_v_thr(initial_v_thr),
        t_step(t_step_) {}
};

// Advances the scheduler by one timestep. current_v_thr is recomputed from
// the history seen so far (spikes at step t take effect from the next
// update), then t is appended to the timing history if spikes occurred, and
// the step counter advances.
void threshold_step(ThresholdSchedulerState& s, bool spikes_this_step,
                    ScheduleMode mode);

// Continual-phase learning rate: eta_pre / 100.
double lr_policy(double eta_pre);

// Closed-loop ThresholdPolicy wrapping the scheduler: every in-scope layer
// uses current_v_thr; the observed aggregate spike flag drives the update.
// Layers below `scope_from` (1-based) keep their own static thresholds.
class AdaptiveThresholdPolicy : public ThresholdPolicy {
 public:
  AdaptiveThresholdPolicy(int t_step, ScheduleMode mode, int scope_from = 1,
                          int adjust_interval = 5, double initial_v_thr = 1.0)
      : state_(t_step, adjust_interval, initial_v_thr),
        mode_(mode),
        scope_from_(scope_from) {}

  std::optional<double> threshold(int layer, int t) override {
    (void)t;
    if (layer < scope_from_) return std::nullopt;
    return state_.current_v_thr;
  }

  void observe_step(int t, bool any_spikes_in_scope) override {
    (void)t;
    applied_.push_back(state_.current_v_thr);
    threshold_step(state_, any_spikes_in_scope, mode_);
  }

  bool in_scope(int layer) const override { return layer >= scope_from_; }

  const ThresholdSchedulerState& state() const { return state_; }

  // Thresholds applied so far, one per completed step.
  const std::vector<double>& applied_schedule() const { return applied_; }

 private:
  ThresholdSchedulerState state_;
  ScheduleMode mode_;
  int scope_from_;
  std::vector<double> applied_;
};

}  // namespace snncl

#endif  // SNNCL_SCHEDULER_HPP
