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

#ifndef SNNCL_EVALUATE_HPP
#define SNNCL_EVALUATE_HPP

#include <optional>
#include <set>
#include <vector>

#include "snncl/accounting.hpp"
#include "snncl/data.hpp"
#include "snncl/network.hpp"
#include "snncl/pretrain.hpp"

namespace snncl {

// Threshold handling during evaluation: static per-layer thresholds, or the
// closed-loop adaptive policy over the learning layers (the operating point
// the continual phase trains for).
struct EvalOptions {
  bool adaptive_threshold = false;
  int l_ins = 1;            // first adaptive layer when adaptive
  int adjust_interval = 5;
  double initial_v_thr = 1.0;
};

struct EvalResult {
  double top1 = 0.0;
  long correct = 0;
  long total = 0;
  // confusion[true_label][predicted] over the readout classes.
  std::vector<std::vector<long>> confusion;
};

EvalResult evaluate(const NetworkTopology& net,
                    const std::vector<LabeledTrain>& data,
                    const EvalOptions& opts = {}, RunStats* stats = nullptr);

// Dataset-level variant: rasterizes at t_step, optionally keeping only the
// classes in `class_filter`.
EvalResult evaluate(const NetworkTopology& net, const Dataset& dataset,
                    int t_step,
                    const std::optional<std::set<int>>& class_filter = {},
                    const EvalOptions& opts = {}, RunStats* stats = nullptr);

}  // namespace snncl

#endif  // SNNCL_EVALUATE_HPP
