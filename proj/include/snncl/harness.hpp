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

#ifndef SNNCL_HARNESS_HPP
#define SNNCL_HARNESS_HPP

#include <string>
#include <vector>

#include "snncl/continual.hpp"
#include "snncl/evaluate.hpp"

namespace snncl {

inline constexpr const char* kCodeVersion = "snncl 0.1.0";

// Experiment operating modes. kReplay4Ncl runs the reduced-timestep latent
// replay with adaptive thresholds and the scaled-down continual learning
// rate. kSpikingLr is the same engine configured as the unreduced baseline:
// T = t_pretrain, static thresholds, eta_cl = eta_pre, same codec.
// kNoReplay drops the latent store entirely (static thresholds,
// eta_cl = eta_pre) so forgetting on the old task is observable.
enum class RunMode { kReplay4Ncl, kSpikingLr, kNoReplay };

std::string mode_name(RunMode mode);
RunMode mode_from_name(const std::string& name);

// Per-mode operating point derived from a RunConfig.
struct ResolvedMode {
  int t_step = 0;
  bool adaptive = false;
  double eta_cl = 0.0;
  bool use_store = true;
};

ResolvedMode resolve_mode(const RunConfig& cfg, RunMode mode);

double energy_estimate(const ForwardCounts& counts, const EnergyModel& m);

// Reproducibility manifest emitted alongside every report: the full config,
// the dataset identity, the mode, and the code version.
std::string build_manifest(const RunConfig& cfg, const Dataset& dataset,
                           RunMode mode, int held_out_class);

struct RunArtifacts {
  RunConfig cfg;
  RunMode mode = RunMode::kReplay4Ncl;
  int held_out_class = 0;
  TaskSplit split;
  NetworkTopology net;
  LatentStore store;  // empty in no-replay mode
  double pre_cl_old_top1 = 0.0;
  NclResult ncl;
  ExperimentReport report;
  RunStats stats;
  std::string manifest;
};

// End-to-end experiment: pretrain on all classes but the held-out one,
// split the network at l_ins, prepare the replay store, then run the
// continual phase on the held-out class. held_out_class -1 selects the last
// class.
RunArtifacts run_experiment(const RunConfig& cfg, const Dataset& dataset,
                            RunMode mode, int held_out_class = -1);

enum class SweepAxis { kTStep, kLIns };

struct SweepEntry {
  int axis_value = 0;
  ExperimentReport report;
};

// Runs run_experiment once per axis value with the shared seed and returns
// the reports keyed by axis value, in the given order.
std::vector<SweepEntry> sweep(const RunConfig& base, SweepAxis axis,
                              const std::vector<int>& values,
                              const Dataset& dataset, RunMode mode,
                              int held_out_class = -1);

// Combined CSV: the per-epoch report schema with a leading axis column.
std::string sweep_to_csv(const std::vector<SweepEntry>& entries,
                         SweepAxis axis);

}  // namespace snncl

#endif  // SNNCL_HARNESS_HPP
