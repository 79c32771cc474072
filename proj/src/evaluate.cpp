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

#include "snncl/evaluate.hpp"

#include "snncl/loss.hpp"
#include "snncl/scheduler.hpp"

namespace snncl {

EvalResult evaluate(const NetworkTopology& net,
                    const std::vector<LabeledTrain>& data,
                    const EvalOptions& opts, RunStats* stats) {
  SNNCL_CHECK(!data.empty(), "evaluate: empty dataset");
  EvalResult res;
  const int classes = net.out_width();
  res.confusion.assign(classes, std::vector<long>(classes, 0));

  for (const LabeledTrain& sample : data) {
    std::unique_ptr<ThresholdPolicy> policy;
    if (opts.adaptive_threshold) {
      policy = std::make_unique<AdaptiveThresholdPolicy>(
          sample.train.timesteps(), ScheduleMode::kNcl, opts.l_ins,
          opts.adjust_interval, opts.initial_v_thr);
    }
    ForwardResult fwd = network_forward(net, sample.train, 1, policy.get());
    if (stats != nullptr)
      stats->add(count_forward(net, 1, sample.train, fwd.traces));
    const std::vector<long> counts = fwd.output.per_neuron_counts();
    Eigen::VectorXd readout(classes);
    for (int n = 0; n < classes; ++n)
      readout[n] = static_cast<double>(counts[n]);
    const int pred = argmax_readout(readout);
    SNNCL_CHECK(sample.label >= 0 && sample.label < classes,
                "evaluate: label outside the readout range");
    ++res.confusion[sample.label][pred];
    if (pred == sample.label) ++res.correct;
    ++res.total;
  }
  res.top1 = static_cast<double>(res.correct) / static_cast<double>(res.total);
  return res;
}

EvalResult evaluate(const NetworkTopology& net, const Dataset& dataset,
                    int t_step,
                    const std::optional<std::set<int>>& class_filter,
                    const EvalOptions& opts, RunStats* stats) {
  std::vector<LabeledTrain> data;
  for (const EventSample& s : dataset.samples) {
    if (class_filter.has_value() && class_filter->count(s.label) == 0)
      continue;
    data.push_back(
        {rasterize(s, t_step, dataset.manifest.channels), s.label});
  }
  SNNCL_CHECK(!data.empty(), "evaluate: no samples left after class filter");
  return evaluate(net, data, opts, stats);
}

}  // namespace snncl
