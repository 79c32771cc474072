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

#include <cmath>
#include <random>
#include <set>

#include "snncl/harness.hpp"
#include "snncl/util.hpp"

using namespace snncl;

namespace {

SpikeTrain random_train(int t, int n, uint64_t seed, double p = 0.4) {
  std::mt19937_64 rng(seed);
  std::bernoulli_distribution coin(p);
  SpikeTrain train(t, n);
  for (int i = 0; i < t; ++i)
    for (int j = 0; j < n; ++j) train.set(i, j, coin(rng) ? 1 : 0);
  return train;
}

RunConfig tiny_config() {
  RunConfig cfg;
  cfg.layer_widths = {12, 14, 10, 4};
  cfg.t_step = 6;
  cfg.t_pretrain = 12;
  cfg.l_ins = 2;
  cfg.e_pre = 2;
  cfg.e_cl = 2;
  cfg.replay_fraction = 0.5;
  cfg.seed = 11;
  return cfg;
}

}  // namespace

TEST_CASE("evaluate scores a perfect oracle at 1.0") {
  NetworkTopology net;
  LifLayer ly;
  ly.w = Eigen::MatrixXd::Identity(3, 3);
  ly.v = Eigen::MatrixXd::Zero(3, 3);
  ly.params.v_thr = 0.5;
  net.layers.push_back(ly);

  std::vector<LabeledTrain> data;
  for (int c = 0; c < 3; ++c) {
    SpikeTrain t(4, 3);
    for (int tt = 0; tt < 4; ++tt) t.set(tt, c, 1);
    data.push_back({t, c});
  }
  const EvalResult res = evaluate(net, data);
  CHECK(res.top1 == 1.0);
  CHECK(res.correct == 3);
  for (int c = 0; c < 3; ++c) CHECK(res.confusion[c][c] == 1);
}

TEST_CASE("evaluate on labels independent of the net is near 1/C") {
  const int classes = 4, samples = 400;
  const NetworkTopology net =
      NetworkTopology::random({10, 12, classes}, LifParams{}, 55, true);
  std::mt19937_64 rng(99);
  std::uniform_int_distribution<int> pick(0, classes - 1);
  std::vector<LabeledTrain> data;
  for (int i = 0; i < samples; ++i)
    data.push_back({random_train(8, 10, i * 13 + 1, 0.4), pick(rng)});
  const EvalResult res = evaluate(net, data);
  const double sigma = std::sqrt(0.25 * 0.75 / samples);
  CHECK(std::abs(res.top1 - 0.25) <= 3.0 * sigma);
}

TEST_CASE("evaluate rejects an empty set and partitions exactly") {
  const Dataset ds = synth_generate(3, 5, 8, 17);
  const NetworkTopology net =
      NetworkTopology::random({8, 10, 3}, LifParams{}, 3, true);
  CHECK_THROWS_AS(evaluate(net, ds, 10, std::set<int>{}), ContractError);

  const EvalResult all = evaluate(net, ds, 10);
  const EvalResult old_part = evaluate(net, ds, 10, std::set<int>{0, 1});
  const EvalResult new_part = evaluate(net, ds, 10, std::set<int>{2});
  CHECK(all.total == old_part.total + new_part.total);
  CHECK(all.correct == old_part.correct + new_part.correct);
  const double weighted =
      (old_part.top1 * old_part.total + new_part.top1 * new_part.total) /
      all.total;
  CHECK(all.top1 == doctest::Approx(weighted).epsilon(1e-12));
}

TEST_CASE("energy_estimate: zero spikes cost only neuron updates") {
  NetworkTopology net = NetworkTopology::random({4, 6, 3}, LifParams{}, 1);
  net.layers[0].w.setZero();
  net.layers[1].w.setZero();
  const SpikeTrain input(10, 4);
  const ForwardResult fwd = network_forward(net, input);
  const ForwardCounts c = count_forward(net, 1, input, fwd.traces);
  CHECK(c.synops == 0);
  CHECK(c.neuron_updates == (6 + 3) * 10);
  EnergyModel m;
  CHECK(energy_estimate(c, m) == doctest::Approx(0.1 * 90).epsilon(1e-12));
}

TEST_CASE("energy_estimate: one spike adds its fan-out in synops") {
  NetworkTopology net;
  LifLayer ly;
  ly.w = Eigen::MatrixXd::Zero(1, 10);
  ly.v = Eigen::MatrixXd::Zero(10, 10);
  net.layers.push_back(ly);
  SpikeTrain input(3, 1);
  input.set(1, 0, 1);
  const ForwardResult fwd = network_forward(net, input);
  const ForwardCounts c = count_forward(net, 1, input, fwd.traces);
  CHECK(c.synops == 10);
  EnergyModel m;
  m.e_synop = 2.0;
  m.e_neuron = 0.0;
  CHECK(energy_estimate(c, m) == doctest::Approx(20.0).epsilon(1e-12));
}

TEST_CASE("operation counts scale linearly in T at a fixed rate") {
  NetworkTopology net = NetworkTopology::random({5, 7, 4}, LifParams{}, 2);
  net.layers[0].w.setZero();
  net.layers[1].w.setZero();
  auto counts_at = [&](int t_total) {
    SpikeTrain input(t_total, 5);
    for (int t = 0; t < t_total; ++t) {
      input.set(t, 0, 1);
      input.set(t, 3, 1);
    }
    const ForwardResult fwd = network_forward(net, input);
    return count_forward(net, 1, input, fwd.traces);
  };
  const ForwardCounts c20 = counts_at(20);
  const ForwardCounts c40 = counts_at(40);
  CHECK(c40.synops == 2 * c20.synops);
  CHECK(c40.neuron_updates == 2 * c20.neuron_updates);
}

TEST_CASE("report CSV round-trips losslessly") {
  ExperimentReport rep;
  for (int e = 0; e < 3; ++e) {
    EpochRow r;
    r.epoch = e;
    r.old_top1 = 0.1 + 0.31 * e;
    r.new_top1 = 1.0 / 3.0 + e * 1e-17;
    r.combined_top1 = 0.123456789012345678;
    r.wall_latency = 1e-4 * (e + 1);
    r.synop_count = 1234567890123LL + e;
    r.energy_proxy = 9.87654321e8 + e;
    r.latent_bytes = 4096 + e;
    rep.rows.push_back(r);
  }
  const ExperimentReport back = report_from_csv(report_to_csv(rep));
  REQUIRE(back.rows.size() == 3);
  for (int e = 0; e < 3; ++e) {
    CHECK(back.rows[e].epoch == rep.rows[e].epoch);
    CHECK(back.rows[e].old_top1 == rep.rows[e].old_top1);
    CHECK(back.rows[e].new_top1 == rep.rows[e].new_top1);
    CHECK(back.rows[e].combined_top1 == rep.rows[e].combined_top1);
    CHECK(back.rows[e].wall_latency == rep.rows[e].wall_latency);
    CHECK(back.rows[e].synop_count == rep.rows[e].synop_count);
    CHECK(back.rows[e].energy_proxy == rep.rows[e].energy_proxy);
    CHECK(back.rows[e].latent_bytes == rep.rows[e].latent_bytes);
  }
  CHECK_THROWS_AS(report_from_csv("nonsense\n1,2\n"), DataError);
}

TEST_CASE("mode names round-trip and resolve to the right operating points") {
  for (RunMode m : {RunMode::kReplay4Ncl, RunMode::kSpikingLr,
                    RunMode::kNoReplay})
    CHECK(mode_from_name(mode_name(m)) == m);
  CHECK_THROWS_AS(mode_from_name("bogus"), ContractError);

  RunConfig cfg = tiny_config();
  const ResolvedMode r4n = resolve_mode(cfg, RunMode::kReplay4Ncl);
  CHECK(r4n.t_step == cfg.t_step);
  CHECK(r4n.adaptive);
  CHECK(r4n.eta_cl == doctest::Approx(cfg.eta_pre / 100.0).epsilon(1e-15));
  CHECK(r4n.use_store);

  const ResolvedMode slr = resolve_mode(cfg, RunMode::kSpikingLr);
  CHECK(slr.t_step == cfg.t_pretrain);
  CHECK_FALSE(slr.adaptive);
  CHECK(slr.eta_cl == cfg.eta_pre);
  CHECK(slr.use_store);

  const ResolvedMode nor = resolve_mode(cfg, RunMode::kNoReplay);
  CHECK_FALSE(nor.use_store);
  CHECK(nor.t_step == cfg.t_step);
}

TEST_CASE("manifest names the mode, config, and dataset hash") {
  const Dataset ds = synth_generate(4, 3, 12, 23);
  const std::string manifest =
      build_manifest(tiny_config(), ds, RunMode::kSpikingLr, 3);
  CHECK(manifest.find("spikinglr") != std::string::npos);
  CHECK(manifest.find(to_hex(dataset_hash(ds))) != std::string::npos);
  CHECK(manifest.find("\"t_step\": 6") != std::string::npos);
  CHECK(manifest.find(kCodeVersion) != std::string::npos);
}

TEST_CASE("run_experiment is deterministic up to wall latency") {
  const Dataset ds = synth_generate(4, 6, 12, 31);
  const RunConfig cfg = tiny_config();
  const RunArtifacts a = run_experiment(cfg, ds, RunMode::kReplay4Ncl);
  const RunArtifacts b = run_experiment(cfg, ds, RunMode::kReplay4Ncl);
  REQUIRE(a.report.rows.size() == b.report.rows.size());
  for (size_t i = 0; i < a.report.rows.size(); ++i) {
    CHECK(a.report.rows[i].old_top1 == b.report.rows[i].old_top1);
    CHECK(a.report.rows[i].new_top1 == b.report.rows[i].new_top1);
    CHECK(a.report.rows[i].synop_count == b.report.rows[i].synop_count);
    CHECK(a.report.rows[i].energy_proxy == b.report.rows[i].energy_proxy);
    CHECK(a.report.rows[i].latent_bytes == b.report.rows[i].latent_bytes);
  }
  CHECK(serialize_latent_store(a.store) == serialize_latent_store(b.store));
  CHECK(a.manifest == b.manifest);
}

TEST_CASE("run_experiment combined accuracy is the weighted mean") {
  const Dataset ds = synth_generate(4, 6, 12, 31);
  const RunArtifacts art =
      run_experiment(tiny_config(), ds, RunMode::kReplay4Ncl);
  const long old_total = 18, new_total = 6;  // 3 classes x 6 vs held-out 6
  for (const EpochRow& r : art.report.rows) {
    const double weighted =
        (r.old_top1 * old_total + r.new_top1 * new_total) /
        (old_total + new_total);
    CHECK(r.combined_top1 == doctest::Approx(weighted).epsilon(1e-12));
  }
}

TEST_CASE("no-replay mode emits no latent bytes") {
  const Dataset ds = synth_generate(4, 6, 12, 31);
  const RunArtifacts art =
      run_experiment(tiny_config(), ds, RunMode::kNoReplay);
  CHECK(art.store.entries.empty());
  for (const EpochRow& r : art.report.rows) CHECK(r.latent_bytes == 0);
}

TEST_CASE("sweep: singleton axis equals a direct run") {
  const Dataset ds = synth_generate(4, 6, 12, 31);
  const RunConfig cfg = tiny_config();
  const std::vector<SweepEntry> entries =
      sweep(cfg, SweepAxis::kTStep, {6}, ds, RunMode::kReplay4Ncl);
  REQUIRE(entries.size() == 1);
  const RunArtifacts direct = run_experiment(cfg, ds, RunMode::kReplay4Ncl);
  REQUIRE(entries[0].report.rows.size() == direct.report.rows.size());
  for (size_t i = 0; i < direct.report.rows.size(); ++i) {
    CHECK(entries[0].report.rows[i].old_top1 ==
          direct.report.rows[i].old_top1);
    CHECK(entries[0].report.rows[i].synop_count ==
          direct.report.rows[i].synop_count);
  }
  CHECK_THROWS_AS(sweep(cfg, SweepAxis::kTStep, {}, ds, RunMode::kReplay4Ncl),
                  ContractError);
}

TEST_CASE("sweep over l_ins: latent bytes non-increasing as layers narrow") {
  const Dataset ds = synth_generate(4, 6, 12, 31);
  RunConfig cfg = tiny_config();
  cfg.codec = CodecId::kBitpack;
  cfg.layer_widths = {12, 10, 8, 4};  // strictly narrowing
  const std::vector<SweepEntry> entries =
      sweep(cfg, SweepAxis::kLIns, {1, 2, 3}, ds, RunMode::kReplay4Ncl);
  REQUIRE(entries.size() == 3);
  long prev = -1;
  for (const SweepEntry& e : entries) {
    REQUIRE(!e.report.rows.empty());
    const long bytes = e.report.rows.back().latent_bytes;
    if (prev >= 0) CHECK(bytes <= prev);
    prev = bytes;
  }
  const std::string csv = sweep_to_csv(entries, SweepAxis::kLIns);
  CHECK(csv.rfind("l_ins,epoch,", 0) == 0);
}

TEST_CASE("sweep over t_step reduces per-epoch operation counts") {
  const Dataset ds = synth_generate(4, 6, 12, 31);
  const std::vector<SweepEntry> entries = sweep(
      tiny_config(), SweepAxis::kTStep, {12, 6}, ds, RunMode::kReplay4Ncl);
  REQUIRE(entries.size() == 2);
  CHECK(entries[1].report.rows.back().synop_count <
        entries[0].report.rows.back().synop_count);
  CHECK(entries[1].report.rows.back().energy_proxy <
        entries[0].report.rows.back().energy_proxy);
}
