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

#include "snncl/harness.hpp"

#include <nlohmann/json.hpp>
#include <sstream>

#include "snncl/pretrain.hpp"
#include "snncl/util.hpp"

namespace snncl {

using json = nlohmann::json;

std::string mode_name(RunMode mode) {
  switch (mode) {
    case RunMode::kReplay4Ncl:
      return "replay4ncl";
    case RunMode::kSpikingLr:
      return "spikinglr";
    case RunMode::kNoReplay:
      return "no-replay";
  }
  throw ContractError("mode_name: unknown mode");
}

RunMode mode_from_name(const std::string& name) {
  if (name == "replay4ncl") return RunMode::kReplay4Ncl;
  if (name == "spikinglr") return RunMode::kSpikingLr;
  if (name == "no-replay") return RunMode::kNoReplay;
  throw ContractError("mode: expected replay4ncl, spikinglr, or no-replay, "
                      "got '" + name + "'");
}

ResolvedMode resolve_mode(const RunConfig& cfg, RunMode mode) {
  ResolvedMode r;
  switch (mode) {
    case RunMode::kReplay4Ncl:
      r.t_step = cfg.t_step;
      r.adaptive = true;
      r.eta_cl = cfg.eta_cl();
      r.use_store = true;
      break;
    case RunMode::kSpikingLr:
      r.t_step = cfg.t_pretrain;
      r.adaptive = false;
      r.eta_cl = cfg.eta_pre;
      r.use_store = true;
      break;
    case RunMode::kNoReplay:
      r.t_step = cfg.t_step;
      r.adaptive = false;
      r.eta_cl = cfg.eta_pre;
      r.use_store = false;
      break;
  }
  return r;
}

double energy_estimate(const ForwardCounts& counts, const EnergyModel& m) {
  SNNCL_CHECK(m.e_synop >= 0.0 && m.e_neuron >= 0.0,
              "energy_estimate: negative energy coefficients");
  return m.e_synop * static_cast<double>(counts.synops) +
         m.e_neuron * static_cast<double>(counts.neuron_updates);
}

std::string build_manifest(const RunConfig& cfg, const Dataset& dataset,
                           RunMode mode, int held_out_class) {
  json j;
  j["code_version"] = kCodeVersion;
  j["mode"] = mode_name(mode);
  j["held_out_class"] = held_out_class;
  j["config"] = json::parse(run_config_to_json(cfg));
  j["dataset"]["hash"] = to_hex(dataset_hash(dataset));
  j["dataset"]["channels"] = dataset.manifest.channels;
  j["dataset"]["classes"] = dataset.manifest.classes;
  j["dataset"]["samples"] = dataset.manifest.samples;
  j["dataset"]["source"] = dataset.manifest.source;
  j["dataset"]["seed"] = dataset.manifest.seed;
  return j.dump(2) + "\n";
}

RunArtifacts run_experiment(const RunConfig& cfg, const Dataset& dataset,
                            RunMode mode, int held_out_class) {
  cfg.validate();
  SNNCL_CHECK(!cfg.layer_widths.empty() &&
                  cfg.layer_widths.front() == dataset.manifest.channels,
              "run_experiment: input width does not match dataset channels");
  SNNCL_CHECK(cfg.layer_widths.back() >= dataset.manifest.classes,
              "run_experiment: readout narrower than the class count");
  if (held_out_class < 0) held_out_class = dataset.manifest.classes - 1;
  SNNCL_CHECK(held_out_class < dataset.manifest.classes,
              "run_experiment: held-out class out of range");

  const ResolvedMode rm = resolve_mode(cfg, mode);

  RunArtifacts art;
  art.cfg = cfg;
  art.mode = mode;
  art.held_out_class = held_out_class;
  art.split =
      make_task_split(dataset, held_out_class, cfg.replay_fraction, cfg.seed);
  art.manifest = build_manifest(cfg, dataset, mode, held_out_class);

  art.net = NetworkTopology::random(cfg.layer_widths, cfg.lif,
                                    mix64(cfg.seed, 0x6e6574ull),
                                    cfg.recurrent);

  const std::vector<LabeledTrain> pre_data =
      rasterize_all(dataset, art.split.ts_pre, cfg.t_pretrain);
  OptimizerConfig pre_opt;
  pre_opt.kind = cfg.optimizer;
  pre_opt.eta = cfg.eta_pre;
  pretrain(art.net, pre_data, cfg.e_pre, pre_opt, cfg.batch_size,
           mix64(cfg.seed, 0x707265ull), cfg.readout_scale, nullptr,
           &art.stats);

  const ReplaySplit rsplit = split_network(art.net, cfg.l_ins);

  // Old-task accuracy at the continual operating point, before any
  // continual-phase updates.
  const std::vector<LabeledTrain> old_eval =
      rasterize_all(dataset, art.split.ts_pre, rm.t_step);
  art.pre_cl_old_top1 = evaluate(art.net, old_eval).top1;

  const LatentStore* store = nullptr;
  if (rm.use_store) {
    art.store = prepare_replay(art.net, rsplit, dataset, art.split, cfg,
                               rm.t_step, rm.adaptive, &art.stats);
    store = &art.store;
  }

  art.ncl = ncl_train(art.net, rsplit, store, dataset, art.split, cfg,
                      rm.t_step, rm.adaptive, rm.eta_cl, &art.stats);
  art.report.rows = art.ncl.rows;
  return art;
}

std::vector<SweepEntry> sweep(const RunConfig& base, SweepAxis axis,
                              const std::vector<int>& values,
                              const Dataset& dataset, RunMode mode,
                              int held_out_class) {
  SNNCL_CHECK(!values.empty(), "sweep: empty axis");
  std::vector<SweepEntry> entries;
  for (int v : values) {
    RunConfig cfg = base;
    if (axis == SweepAxis::kTStep)
      cfg.t_step = v;
    else
      cfg.l_ins = v;
    SweepEntry e;
    e.axis_value = v;
    e.report = run_experiment(cfg, dataset, mode, held_out_class).report;
    entries.push_back(std::move(e));
  }
  return entries;
}

std::string sweep_to_csv(const std::vector<SweepEntry>& entries,
                         SweepAxis axis) {
  const char* key = axis == SweepAxis::kTStep ? "t_step" : "l_ins";
  std::ostringstream out;
  bool first = true;
  for (const SweepEntry& e : entries) {
    std::istringstream rows(report_to_csv(e.report));
    std::string line;
    bool header = true;
    while (std::getline(rows, line)) {
      if (header) {
        if (first) out << key << ',' << line << "\n";
        header = false;
        first = false;
        continue;
      }
      out << e.axis_value << ',' << line << "\n";
    }
  }
  return out.str();
}

}  // namespace snncl
