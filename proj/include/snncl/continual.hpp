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

#ifndef SNNCL_CONTINUAL_HPP
#define SNNCL_CONTINUAL_HPP

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "snncl/data.hpp"
#include "snncl/optimizer.hpp"
#include "snncl/replay.hpp"
#include "snncl/report.hpp"
#include "snncl/scheduler.hpp"

namespace snncl {

// Experiment configuration shared by the CLI, the harness, and the run
// manifest. layer_widths lists the input width followed by each layer's
// output width.
struct RunConfig {
  std::vector<int> layer_widths = {24, 48, 48, 32, 8};
  int t_step = 20;       // reduced timesteps for the continual phase
  int t_pretrain = 100;  // timesteps during pre-training
  int l_ins = 3;         // 1-based latent insertion layer
  int e_pre = 30;
  int e_cl = 50;
  double eta_pre = 1e-3;
  bool paper_lr_policy = true;   // eta_cl = eta_pre / 100
  double eta_cl_override = 0.0;  // used when the policy is disabled
  CodecId codec = CodecId::kRateChunk;
  int chunk = 0;  // 0 selects t_step / 4
  double replay_fraction = 0.1;
  int batch_size = 32;     // pre-training minibatch
  int cl_batch_size = 1;   // continual-phase minibatch
  uint64_t seed = 1;
  LifParams lif;
  int adjust_interval = 5;
  double readout_scale = 1.0;
  bool recurrent = true;
  OptimizerKind optimizer = OptimizerKind::kAdam;
  EnergyModel energy;

  int effective_chunk(int t) const {
    return chunk > 0 ? chunk : std::max(1, t / 4);
  }
  double eta_cl() const {
    return paper_lr_policy ? lr_policy(eta_pre) : eta_cl_override;
  }
  void validate() const;
};

std::string run_config_to_json(const RunConfig& cfg);
RunConfig run_config_from_json(const std::string& text);

// Class-incremental split: the held-out class forms the continual set, the
// rest pre-train, and a per-class uniform fraction of the pre-training set
// is kept for replay. Entries are indices into dataset.samples.
struct TaskSplit {
  std::vector<int> ts_pre;
  std::vector<int> ts_cl;
  std::vector<int> ts_replay;
};

TaskSplit make_task_split(const Dataset& dataset, int held_out_class,
                          double replay_fraction, uint64_t seed);

// Rasterizes the selected samples at t_step with the dataset channel count.
std::vector<LabeledTrain> rasterize_all(const Dataset& dataset,
                                        const std::vector<int>& indices,
                                        int t_step);

// Network preparation: e_pre epochs of latent generation through the frozen
// part at t_step, each sample under its own closed-loop prepare-mode
// threshold schedule (static thresholds when adaptive is false, matching the
// unreduced baseline). The final epoch's store is retained.
LatentStore prepare_replay(const NetworkTopology& net, const ReplaySplit& split,
                           const Dataset& dataset, const TaskSplit& tasks,
                           const RunConfig& cfg, int t_step, bool adaptive,
                           RunStats* stats = nullptr);

// One continual-phase training stream: every replay entry and every new-task
// activation exactly once, uniformly shuffled.
std::vector<LabeledTrain> build_training_stream(
    const std::vector<LabeledTrain>& a_lr,
    const std::vector<LabeledTrain>& a_new, std::mt19937_64& rng);

struct NclResult {
  std::vector<EpochRow> rows;
  std::vector<uint64_t> frozen_hashes_before;
  std::vector<uint64_t> frozen_hashes_after;
};

// NCL training phase: per epoch, regenerates the new-task activations
// through the frozen part, merges them with the decompressed replay store,
// and trains only the learning layers at eta_cl (adaptive per-timestep
// thresholds when enabled). Old/new-task Top-1 accuracy is recorded per
// epoch along with exact operation counts and the energy proxy.
NclResult ncl_train(NetworkTopology& net, const ReplaySplit& split,
                    const LatentStore* store, const Dataset& dataset,
                    const TaskSplit& tasks, const RunConfig& cfg, int t_step,
                    bool adaptive, double eta_cl,
                    RunStats* total_stats = nullptr);

}  // namespace snncl

#endif  // SNNCL_CONTINUAL_HPP
