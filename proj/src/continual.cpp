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

#include "snncl/continual.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <nlohmann/json.hpp>

#include "snncl/bptt.hpp"
#include "snncl/checkpoint.hpp"
#include "snncl/evaluate.hpp"
#include "snncl/loss.hpp"
#include "snncl/util.hpp"

namespace snncl {

using json = nlohmann::json;

void RunConfig::validate() const {
  SNNCL_CHECK(layer_widths.size() >= 2, "RunConfig: need >= 2 layer widths");
  SNNCL_CHECK(t_step >= 1 && t_pretrain >= 1,
              "RunConfig: timestep counts must be >= 1");
  const int depth = static_cast<int>(layer_widths.size()) - 1;
  SNNCL_CHECK(l_ins >= 1 && l_ins <= depth, "RunConfig: l_ins out of range");
  SNNCL_CHECK(e_pre >= 0 && e_cl >= 0, "RunConfig: negative epoch count");
  SNNCL_CHECK(eta_pre > 0.0, "RunConfig: eta_pre must be positive");
  SNNCL_CHECK(replay_fraction > 0.0 && replay_fraction <= 1.0,
              "RunConfig: replay_fraction must be in (0,1]");
  SNNCL_CHECK(batch_size >= 1 && cl_batch_size >= 1,
              "RunConfig: batch sizes must be >= 1");
  SNNCL_CHECK(adjust_interval >= 1, "RunConfig: adjust_interval must be >= 1");
  lif.validate();
}

std::string run_config_to_json(const RunConfig& cfg) {
  json j;
  j["layer_widths"] = cfg.layer_widths;
  j["t_step"] = cfg.t_step;
  j["t_pretrain"] = cfg.t_pretrain;
  j["l_ins"] = cfg.l_ins;
  j["e_pre"] = cfg.e_pre;
  j["e_cl"] = cfg.e_cl;
  j["eta_pre"] = cfg.eta_pre;
  j["paper_lr_policy"] = cfg.paper_lr_policy;
  j["eta_cl_override"] = cfg.eta_cl_override;
  j["codec"] = cfg.codec == CodecId::kBitpack ? "bitpack" : "ratechunk";
  j["chunk"] = cfg.chunk;
  j["replay_fraction"] = cfg.replay_fraction;
  j["batch_size"] = cfg.batch_size;
  j["cl_batch_size"] = cfg.cl_batch_size;
  j["seed"] = cfg.seed;
  j["v_thr"] = cfg.lif.v_thr;
  j["v_rst"] = cfg.lif.v_rst;
  j["beta"] = cfg.lif.beta;
  j["surrogate_slope"] = cfg.lif.surrogate_slope;
  j["adjust_interval"] = cfg.adjust_interval;
  j["readout_scale"] = cfg.readout_scale;
  j["recurrent"] = cfg.recurrent;
  j["optimizer"] = cfg.optimizer == OptimizerKind::kAdam ? "adam" : "sgd";
  j["e_synop"] = cfg.energy.e_synop;
  j["e_neuron"] = cfg.energy.e_neuron;
  return j.dump(2);
}

RunConfig run_config_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ContractError(std::string("config: JSON parse error: ") + e.what());
  }
  RunConfig cfg;
  try {
    if (j.contains("layer_widths"))
      cfg.layer_widths = j["layer_widths"].get<std::vector<int>>();
    cfg.t_step = j.value("t_step", cfg.t_step);
    cfg.t_pretrain = j.value("t_pretrain", cfg.t_pretrain);
    cfg.l_ins = j.value("l_ins", cfg.l_ins);
    cfg.e_pre = j.value("e_pre", cfg.e_pre);
    cfg.e_cl = j.value("e_cl", cfg.e_cl);
    cfg.eta_pre = j.value("eta_pre", cfg.eta_pre);
    cfg.paper_lr_policy = j.value("paper_lr_policy", cfg.paper_lr_policy);
    cfg.eta_cl_override = j.value("eta_cl_override", cfg.eta_cl_override);
    if (j.contains("codec")) {
      const std::string c = j["codec"].get<std::string>();
      if (c == "bitpack")
        cfg.codec = CodecId::kBitpack;
      else if (c == "ratechunk")
        cfg.codec = CodecId::kRateChunk;
      else
        throw ContractError("config: unknown codec '" + c + "'");
    }
    cfg.chunk = j.value("chunk", cfg.chunk);
    cfg.replay_fraction = j.value("replay_fraction", cfg.replay_fraction);
    cfg.batch_size = j.value("batch_size", cfg.batch_size);
    cfg.cl_batch_size = j.value("cl_batch_size", cfg.cl_batch_size);
    cfg.seed = j.value("seed", cfg.seed);
    cfg.lif.v_thr = j.value("v_thr", cfg.lif.v_thr);
    cfg.lif.v_rst = j.value("v_rst", cfg.lif.v_rst);
    cfg.lif.beta = j.value("beta", cfg.lif.beta);
    cfg.lif.surrogate_slope =
        j.value("surrogate_slope", cfg.lif.surrogate_slope);
    cfg.adjust_interval = j.value("adjust_interval", cfg.adjust_interval);
    cfg.readout_scale = j.value("readout_scale", cfg.readout_scale);
    cfg.recurrent = j.value("recurrent", cfg.recurrent);
    if (j.contains("optimizer")) {
      const std::string o = j["optimizer"].get<std::string>();
      if (o == "adam")
        cfg.optimizer = OptimizerKind::kAdam;
      else if (o == "sgd")
        cfg.optimizer = OptimizerKind::kSgd;
      else
        throw ContractError("config: unknown optimizer '" + o + "'");
    }
    cfg.energy.e_synop = j.value("e_synop", cfg.energy.e_synop);
    cfg.energy.e_neuron = j.value("e_neuron", cfg.energy.e_neuron);
  } catch (const json::exception& e) {
    throw ContractError(std::string("config: bad field type: ") + e.what());
  }
  cfg.validate();
  return cfg;
}

TaskSplit make_task_split(const Dataset& dataset, int held_out_class,
                          double replay_fraction, uint64_t seed) {
  SNNCL_CHECK(replay_fraction > 0.0 && replay_fraction <= 1.0,
              "make_task_split: replay_fraction must be in (0,1]");
  bool class_seen = false;
  TaskSplit split;
  std::vector<std::vector<int>> by_class(dataset.manifest.classes);
  for (int i = 0; i < static_cast<int>(dataset.samples.size()); ++i) {
    const int label = dataset.samples[i].label;
    if (label == held_out_class) {
      split.ts_cl.push_back(i);
      class_seen = true;
    } else {
      split.ts_pre.push_back(i);
      by_class[label].push_back(i);
    }
  }
  SNNCL_CHECK(class_seen, "make_task_split: held-out class not in dataset");

  for (int c = 0; c < dataset.manifest.classes; ++c) {
    if (by_class[c].empty()) continue;
    std::mt19937_64 rng(mix64(seed, 0x73706c69ull + c));
    std::vector<int> pool = by_class[c];
    std::shuffle(pool.begin(), pool.end(), rng);
    const int n = static_cast<int>(pool.size());
    const int k = std::min(
        n, static_cast<int>(std::ceil(replay_fraction * n - 1e-12)));
    split.ts_replay.insert(split.ts_replay.end(), pool.begin(),
                           pool.begin() + k);
  }
  std::sort(split.ts_replay.begin(), split.ts_replay.end());
  return split;
}

std::vector<LabeledTrain> rasterize_all(const Dataset& dataset,
                                        const std::vector<int>& indices,
                                        int t_step) {
  std::vector<LabeledTrain> out;
  out.reserve(indices.size());
  for (int i : indices) {
    const EventSample& s = dataset.samples[i];
    out.push_back({rasterize(s, t_step, dataset.manifest.channels), s.label});
  }
  return out;
}

LatentStore prepare_replay(const NetworkTopology& net,
                           const ReplaySplit& split, const Dataset& dataset,
                           const TaskSplit& tasks, const RunConfig& cfg,
                           int t_step, bool adaptive, RunStats* stats) {
  SNNCL_CHECK(!tasks.ts_replay.empty(), "prepare_replay: empty replay set");
  const std::vector<LabeledTrain> replay =
      rasterize_all(dataset, tasks.ts_replay, t_step);

  PolicyFactory factory;
  if (adaptive) {
    const int interval = cfg.adjust_interval;
    const double init_thr = cfg.lif.v_thr;
    factory = [t_step, interval, init_thr]() {
      return std::make_unique<AdaptiveThresholdPolicy>(
          t_step, ScheduleMode::kPrepare, /*scope_from=*/1, interval,
          init_thr);
    };
  }

  // Latent generation is deterministic per sample, so every epoch of the
  // preparation loop produces the same store; the last one is retained.
  LatentStore store;
  const int epochs = std::max(1, cfg.e_pre);
  for (int ep = 0; ep < epochs; ++ep) {
    store = generate_latent(net, split.l_ins, replay, cfg.codec,
                            cfg.effective_chunk(t_step), factory, stats);
  }
  return store;
}

std::vector<LabeledTrain> build_training_stream(
    const std::vector<LabeledTrain>& a_lr,
    const std::vector<LabeledTrain>& a_new, std::mt19937_64& rng) {
  std::vector<LabeledTrain> stream;
  stream.reserve(a_lr.size() + a_new.size());
  stream.insert(stream.end(), a_lr.begin(), a_lr.end());
  stream.insert(stream.end(), a_new.begin(), a_new.end());
  std::shuffle(stream.begin(), stream.end(), rng);
  return stream;
}

NclResult ncl_train(NetworkTopology& net, const ReplaySplit& split,
                    const LatentStore* store, const Dataset& dataset,
                    const TaskSplit& tasks, const RunConfig& cfg, int t_step,
                    bool adaptive, double eta_cl, RunStats* total_stats) {
  const int l_ins = split.l_ins;
  const int depth = net.depth();
  SNNCL_CHECK(l_ins >= 1 && l_ins <= depth, "ncl_train: bad insertion layer");
  const int injection_width =
      l_ins == 1 ? net.in_width() : net.layer(l_ins).in_width();

  NclResult result;
  for (int l = 1; l < l_ins; ++l)
    result.frozen_hashes_before.push_back(layer_weights_hash(net.layer(l)));

  // Decompress the replay store once per run.
  std::vector<LabeledTrain> a_lr;
  long latent_bytes = 0;
  if (store != nullptr) {
    SNNCL_CHECK(store->t == t_step,
                "ncl_train: store timesteps do not match the configuration");
    SNNCL_CHECK(store->width == injection_width,
                "ncl_train: store width does not match the insertion layer");
    for (const LatentActivations& e : store->entries)
      a_lr.push_back(
          {decompress_latent(e), static_cast<int>(e.label)});
    latent_bytes = store->total_bytes();
  }

  const std::vector<LabeledTrain> ts_cl =
      rasterize_all(dataset, tasks.ts_cl, t_step);
  const std::vector<LabeledTrain> old_eval =
      rasterize_all(dataset, tasks.ts_pre, t_step);

  std::mt19937_64 rng(mix64(cfg.seed, 0x6e636c7472ull));
  OptimizerConfig opt;
  opt.kind = cfg.optimizer;
  opt.eta = eta_cl > 0.0 ? eta_cl : 1.0;  // eta 0 skips updates below
  OptimizerState opt_state;

  EvalOptions eval_opts;
  eval_opts.adaptive_threshold = adaptive;
  eval_opts.l_ins = l_ins;
  eval_opts.adjust_interval = cfg.adjust_interval;
  eval_opts.initial_v_thr = cfg.lif.v_thr;

  for (int ep = 0; ep < cfg.e_cl; ++ep) {
    const auto t_start = std::chrono::steady_clock::now();
    RunStats epoch_stats;

    // A_new is regenerated through the frozen part every epoch.
    std::vector<LabeledTrain> a_new;
    a_new.reserve(ts_cl.size());
    for (const LabeledTrain& s : ts_cl) {
      if (l_ins == 1) {
        a_new.push_back(s);
      } else {
        ForwardResult fwd =
            network_forward(net, s.train, 1, nullptr, l_ins - 1);
        epoch_stats.add(count_forward(net, 1, s.train, fwd.traces));
        a_new.push_back({std::move(fwd.output), s.label});
      }
    }

    const std::vector<LabeledTrain> stream =
        build_training_stream(a_lr, a_new, rng);

    for (size_t b = 0; b < stream.size(); b += cfg.cl_batch_size) {
      const size_t b_end =
          std::min(stream.size(), b + static_cast<size_t>(cfg.cl_batch_size));
      GradientSet batch_grads = GradientSet::zeros(net);
      for (size_t i = b; i < b_end; ++i) {
        const LabeledTrain& sample = stream[i];
        std::unique_ptr<ThresholdPolicy> policy;
        if (adaptive) {
          policy = std::make_unique<AdaptiveThresholdPolicy>(
              t_step, ScheduleMode::kNcl, l_ins, cfg.adjust_interval,
              cfg.lif.v_thr);
        }
        ForwardResult fwd =
            network_forward(net, sample.train, l_ins, policy.get());
        epoch_stats.add(count_forward(net, l_ins, sample.train, fwd.traces));

        Eigen::VectorXd readout(net.out_width());
        const std::vector<long> counts = fwd.output.per_neuron_counts();
        for (int n = 0; n < net.out_width(); ++n)
          readout[n] = static_cast<double>(counts[n]);
        Eigen::VectorXd loss_grad;
        cross_entropy_readout(readout, sample.label, cfg.readout_scale,
                              &loss_grad);
        batch_grads.accumulate(bptt_backward(net, sample.train, fwd.traces,
                                             loss_grad, l_ins, l_ins));
      }
      if (eta_cl > 0.0) {
        batch_grads.scale(1.0 / static_cast<double>(b_end - b));
        apply_update(net, batch_grads, opt, opt_state);
      }
    }

    const EvalResult old_res = evaluate(net, old_eval, eval_opts, &epoch_stats);
    const EvalResult new_res = evaluate(net, ts_cl, eval_opts, &epoch_stats);

    EpochRow row;
    row.epoch = ep;
    row.old_top1 = old_res.top1;
    row.new_top1 = new_res.top1;
    row.combined_top1 =
        static_cast<double>(old_res.correct + new_res.correct) /
        static_cast<double>(old_res.total + new_res.total);
    row.wall_latency =
        std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                      t_start)
            .count();
    row.synop_count = epoch_stats.synops;
    row.energy_proxy = cfg.energy.e_synop * epoch_stats.synops +
                       cfg.energy.e_neuron * epoch_stats.neuron_updates;
    row.latent_bytes = latent_bytes;
    result.rows.push_back(row);

    if (total_stats != nullptr) total_stats->add(ForwardCounts{
        epoch_stats.synops, epoch_stats.neuron_updates});
  }

  for (int l = 1; l < l_ins; ++l)
    result.frozen_hashes_after.push_back(layer_weights_hash(net.layer(l)));
  return result;
}

}  // namespace snncl
