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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>

#include "snncl/checkpoint.hpp"
#include "snncl/continual.hpp"
#include "snncl/scheduler.hpp"

using namespace snncl;

namespace {

Dataset small_dataset() {
  return synth_generate(3, 6, 8, 41);
}

RunConfig small_config() {
  RunConfig cfg;
  cfg.layer_widths = {8, 10, 8, 3};
  cfg.t_step = 8;
  cfg.t_pretrain = 16;
  cfg.l_ins = 2;
  cfg.e_pre = 2;
  cfg.e_cl = 2;
  cfg.replay_fraction = 0.5;
  cfg.seed = 5;
  return cfg;
}

}  // namespace

TEST_CASE("threshold_step table-driven values") {
  // ncl mode, t=0, nothing has spiked: sigmoid at 0 is 0.5.
  ThresholdSchedulerState s(20);
  threshold_step(s, false, ScheduleMode::kNcl);
  CHECK(s.current_v_thr == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(s.t == 1);

  // Window mean 10 at t_step 20: v_thr = 1 + 0.01 * (20 - 10) = 1.1.
  ThresholdSchedulerState s2(20);
  s2.t = 11;
  s2.spike_timing = {8, 12};
  threshold_step(s2, false, ScheduleMode::kNcl);
  CHECK(s2.current_v_thr == doctest::Approx(1.1).epsilon(1e-15));

  // Earlier spikes (mean 5) raise the threshold more: 1.15 > 1.1.
  ThresholdSchedulerState s3(20);
  s3.t = 6;
  s3.spike_timing = {4, 6};
  threshold_step(s3, false, ScheduleMode::kNcl);
  CHECK(s3.current_v_thr == doctest::Approx(1.15).epsilon(1e-15));
}

TEST_CASE("threshold_step prepare-mode branch structure") {
  // At a multiple of adjust_interval with spike history: the formula.
  ThresholdSchedulerState s(20);
  s.t = 10;
  s.spike_timing = {2, 4};
  threshold_step(s, false, ScheduleMode::kPrepare);
  CHECK(s.current_v_thr == doctest::Approx(1.17).epsilon(1e-15));

  // At a multiple with no spikes ever: unchanged.
  ThresholdSchedulerState s2(20, 5, 0.8);
  s2.t = 5;
  threshold_step(s2, false, ScheduleMode::kPrepare);
  CHECK(s2.current_v_thr == 0.8);

  // Off the interval: the sigmoid in t, regardless of history.
  ThresholdSchedulerState s3(20);
  s3.t = 7;
  s3.spike_timing = {1};
  threshold_step(s3, true, ScheduleMode::kPrepare);
  CHECK(s3.current_v_thr ==
        doctest::Approx(1.0 / (1.0 + std::exp(-0.007))).epsilon(1e-15));
  CHECK(s3.spike_timing == std::vector<int>{1, 7});
}

TEST_CASE("sigmoid branch is monotone in t and bounded") {
  double prev = 0.0;
  for (int t = 0; t < 100; ++t) {
    ThresholdSchedulerState s(100);
    s.t = t;
    threshold_step(s, false, ScheduleMode::kNcl);
    CHECK(s.current_v_thr >= 0.5);
    CHECK(s.current_v_thr < 1.0);
    CHECK(s.current_v_thr >= prev);
    prev = s.current_v_thr;
  }
}

TEST_CASE("spike branch stays within [1, 1 + 0.01 * t_step]") {
  const int t_step = 20;
  for (int mean_t = 0; mean_t < t_step; ++mean_t) {
    ThresholdSchedulerState s(t_step);
    s.t = std::min(t_step - 1, mean_t + 1);
    s.spike_timing = {mean_t};
    threshold_step(s, false, ScheduleMode::kNcl);
    if (!s.spike_timing.empty() && mean_t >= s.t - s.adjust_interval) {
      CHECK(s.current_v_thr >= 1.0);
      CHECK(s.current_v_thr <= 1.0 + 0.01 * t_step);
    }
  }
}

TEST_CASE("lr_policy divides by 100") {
  CHECK(lr_policy(1e-3) == doctest::Approx(1e-5).epsilon(1e-15));
  CHECK(lr_policy(0.2) == doctest::Approx(0.002).epsilon(1e-15));
  for (double eta : {1e-4, 0.05, 3.0}) CHECK(lr_policy(eta) < eta);
  CHECK_THROWS_AS(lr_policy(0.0), ContractError);
}

TEST_CASE("AdaptiveThresholdPolicy follows the sigmoid when nothing spikes") {
  NetworkTopology net =
      NetworkTopology::random({4, 5, 3}, LifParams{}, 3, false);
  net.layers[0].w.setZero();
  net.layers[1].w.setZero();
  AdaptiveThresholdPolicy policy(10, ScheduleMode::kPrepare);
  SpikeTrain input(10, 4);
  for (int t = 0; t < 10; ++t) input.set(t, 0, 1);
  network_forward(net, input, 1, &policy);
  const std::vector<double>& applied = policy.applied_schedule();
  REQUIRE(applied.size() == 10);
  CHECK(applied[0] == 1.0);  // initial threshold before any update
  double expected = 1.0;
  for (int t = 0; t < 9; ++t) {
    // Prepare mode, no spikes: multiples of 5 hold, others follow the sigmoid.
    if (t % 5 != 0) expected = 1.0 / (1.0 + std::exp(-0.001 * t));
    CHECK(applied[t + 1] == doctest::Approx(expected).epsilon(1e-15));
  }
}

TEST_CASE("RunConfig JSON roundtrip") {
  RunConfig cfg = small_config();
  cfg.codec = CodecId::kBitpack;
  cfg.optimizer = OptimizerKind::kSgd;
  cfg.paper_lr_policy = false;
  cfg.eta_cl_override = 0.25;
  const RunConfig back = run_config_from_json(run_config_to_json(cfg));
  CHECK(back.layer_widths == cfg.layer_widths);
  CHECK(back.t_step == cfg.t_step);
  CHECK(back.l_ins == cfg.l_ins);
  CHECK(back.codec == CodecId::kBitpack);
  CHECK(back.optimizer == OptimizerKind::kSgd);
  CHECK(back.eta_cl() == doctest::Approx(0.25).epsilon(1e-15));
  CHECK(back.seed == cfg.seed);

  CHECK_THROWS_AS(run_config_from_json("{not json"), ContractError);
  CHECK_THROWS_AS(run_config_from_json("{\"codec\": \"zip\"}"), ContractError);
  CHECK_THROWS_AS(run_config_from_json("{\"t_step\": 0}"), ContractError);
}

TEST_CASE("eta_cl follows the policy unless overridden") {
  RunConfig cfg;
  cfg.eta_pre = 1e-3;
  CHECK(cfg.eta_cl() == doctest::Approx(1e-5).epsilon(1e-15));
  cfg.paper_lr_policy = false;
  cfg.eta_cl_override = 0.5;
  CHECK(cfg.eta_cl() == 0.5);
}

TEST_CASE("make_task_split partitions by class") {
  const Dataset ds = small_dataset();
  const TaskSplit split = make_task_split(ds, 2, 0.5, 7);
  CHECK(split.ts_cl.size() == 6);
  CHECK(split.ts_pre.size() == 12);
  for (int i : split.ts_cl) CHECK(ds.samples[i].label == 2);
  for (int i : split.ts_pre) CHECK(ds.samples[i].label != 2);
  // ceil(0.5 * 6) = 3 replay samples per pre-training class.
  CHECK(split.ts_replay.size() == 6);
  const std::set<int> pre(split.ts_pre.begin(), split.ts_pre.end());
  for (int i : split.ts_replay) CHECK(pre.count(i) == 1);
}

TEST_CASE("make_task_split with replay_fraction=1 keeps all of ts_pre") {
  const Dataset ds = small_dataset();
  const TaskSplit split = make_task_split(ds, 0, 1.0, 7);
  std::vector<int> replay = split.ts_replay;
  std::sort(replay.begin(), replay.end());
  std::vector<int> pre = split.ts_pre;
  std::sort(pre.begin(), pre.end());
  CHECK(replay == pre);
}

TEST_CASE("make_task_split is deterministic and validates the class") {
  const Dataset ds = small_dataset();
  const TaskSplit a = make_task_split(ds, 1, 0.4, 11);
  const TaskSplit b = make_task_split(ds, 1, 0.4, 11);
  CHECK(a.ts_replay == b.ts_replay);
  CHECK_THROWS_AS(make_task_split(ds, 9, 0.4, 11), ContractError);
}

TEST_CASE("build_training_stream is an exact union") {
  std::vector<LabeledTrain> a_lr, a_new;
  for (int i = 0; i < 4; ++i) {
    SpikeTrain t(2, 3);
    t.set(0, i % 3, 1);
    a_lr.push_back({t, i});
  }
  for (int i = 0; i < 3; ++i) {
    SpikeTrain t(2, 3);
    t.set(1, i, 1);
    a_new.push_back({t, 10 + i});
  }
  std::mt19937_64 rng(3);
  const std::vector<LabeledTrain> stream =
      build_training_stream(a_lr, a_new, rng);
  REQUIRE(stream.size() == 7);
  std::multiset<int> labels;
  for (const LabeledTrain& s : stream) labels.insert(s.label);
  CHECK(labels == std::multiset<int>{0, 1, 2, 3, 10, 11, 12});
}

TEST_CASE("prepare_replay yields one entry per replay sample at store width") {
  const Dataset ds = small_dataset();
  RunConfig cfg = small_config();
  const TaskSplit split = make_task_split(ds, 2, cfg.replay_fraction, cfg.seed);
  NetworkTopology net = NetworkTopology::random(cfg.layer_widths, cfg.lif,
                                                cfg.seed, cfg.recurrent);
  const ReplaySplit rsplit = split_network(net, cfg.l_ins);
  const LatentStore store =
      prepare_replay(net, rsplit, ds, split, cfg, cfg.t_step, true);
  CHECK(store.entries.size() == split.ts_replay.size());
  CHECK(store.t == cfg.t_step);
  CHECK(store.width == net.layer(2).in_width());
  for (const LatentActivations& e : store.entries) {
    const SpikeTrain train = decompress_latent(e);
    CHECK(train.width() == net.layer(2).in_width());
    CHECK(train.timesteps() == cfg.t_step);
  }
}

TEST_CASE("ncl_train with eta_cl=0 leaves all weights unchanged") {
  const Dataset ds = small_dataset();
  RunConfig cfg = small_config();
  const TaskSplit split = make_task_split(ds, 2, cfg.replay_fraction, cfg.seed);
  NetworkTopology net = NetworkTopology::random(cfg.layer_widths, cfg.lif,
                                                cfg.seed, cfg.recurrent);
  const ReplaySplit rsplit = split_network(net, cfg.l_ins);
  const LatentStore store =
      prepare_replay(net, rsplit, ds, split, cfg, cfg.t_step, true);
  const uint64_t before = net_weights_hash(net);
  const NclResult res = ncl_train(net, rsplit, &store, ds, split, cfg,
                                  cfg.t_step, true, 0.0);
  CHECK(net_weights_hash(net) == before);
  CHECK(res.rows.size() == 2);
}

TEST_CASE("ncl_train never mutates frozen layers") {
  const Dataset ds = small_dataset();
  RunConfig cfg = small_config();
  cfg.l_ins = 3;
  const TaskSplit split = make_task_split(ds, 2, cfg.replay_fraction, cfg.seed);
  NetworkTopology net = NetworkTopology::random(cfg.layer_widths, cfg.lif,
                                                cfg.seed, cfg.recurrent);
  const ReplaySplit rsplit = split_network(net, cfg.l_ins);
  const LatentStore store =
      prepare_replay(net, rsplit, ds, split, cfg, cfg.t_step, true);
  const uint64_t all_before = net_weights_hash(net);
  const NclResult res = ncl_train(net, rsplit, &store, ds, split, cfg,
                                  cfg.t_step, true, cfg.eta_cl());
  CHECK(res.frozen_hashes_before == res.frozen_hashes_after);
  CHECK(res.frozen_hashes_before.size() == 2);
  CHECK(net_weights_hash(net) != all_before);  // learning layers moved
}

TEST_CASE("ncl_train with zero epochs returns an empty report") {
  const Dataset ds = small_dataset();
  RunConfig cfg = small_config();
  cfg.e_cl = 0;
  const TaskSplit split = make_task_split(ds, 2, cfg.replay_fraction, cfg.seed);
  NetworkTopology net = NetworkTopology::random(cfg.layer_widths, cfg.lif,
                                                cfg.seed, cfg.recurrent);
  const ReplaySplit rsplit = split_network(net, cfg.l_ins);
  const uint64_t before = net_weights_hash(net);
  const NclResult res =
      ncl_train(net, rsplit, nullptr, ds, split, cfg, cfg.t_step, false, 1e-3);
  CHECK(res.rows.empty());
  CHECK(net_weights_hash(net) == before);
}

TEST_CASE("ncl_train rejects a mismatched store") {
  const Dataset ds = small_dataset();
  RunConfig cfg = small_config();
  const TaskSplit split = make_task_split(ds, 2, cfg.replay_fraction, cfg.seed);
  NetworkTopology net = NetworkTopology::random(cfg.layer_widths, cfg.lif,
                                                cfg.seed, cfg.recurrent);
  const ReplaySplit rsplit = split_network(net, cfg.l_ins);
  LatentStore store = prepare_replay(net, rsplit, ds, split, cfg,
                                     cfg.t_step, true);
  store.t = cfg.t_step + 1;
  CHECK_THROWS_AS(ncl_train(net, rsplit, &store, ds, split, cfg, cfg.t_step,
                            true, 1e-4),
                  ContractError);
}

TEST_CASE("RunConfig validation rejects bad fields") {
  RunConfig cfg = small_config();
  cfg.l_ins = 4;  // only 3 layers
  CHECK_THROWS_AS(cfg.validate(), ContractError);
  cfg = small_config();
  cfg.replay_fraction = 0.0;
  CHECK_THROWS_AS(cfg.validate(), ContractError);
  cfg = small_config();
  cfg.eta_pre = -1.0;
  CHECK_THROWS_AS(cfg.validate(), ContractError);
}
