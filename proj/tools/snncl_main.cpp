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

#include <cstdio>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "snncl/checkpoint.hpp"
#include "snncl/harness.hpp"
#include "snncl/util.hpp"

namespace {

using namespace snncl;

// RunConfig flag overrides. The config file (if any) is loaded first; flags
// the user actually passed then take precedence.
struct CfgCli {
  std::string config_path;
  std::vector<int> widths;
  std::optional<int> t_step, t_pretrain, l_ins, e_pre, e_cl, chunk;
  std::optional<int> batch_size, cl_batch_size, adjust_interval;
  std::optional<double> eta_pre, eta_cl, replay_fraction, v_thr, beta;
  std::optional<double> readout_scale, e_synop, e_neuron, surrogate_slope;
  std::optional<uint64_t> seed;
  std::optional<std::string> codec, optimizer;
  std::optional<bool> recurrent;

  void attach(CLI::App* app) {
    app->add_option("--config", config_path, "JSON config file");
    app->add_option("--widths", widths,
                    "layer widths, input first (e.g. 24 48 48 32 8)");
    app->add_option("--t-step", t_step, "continual-phase timesteps");
    app->add_option("--t-pretrain", t_pretrain, "pre-training timesteps");
    app->add_option("--l-ins", l_ins, "latent insertion layer (1-based)");
    app->add_option("--e-pre", e_pre, "pre-training epochs");
    app->add_option("--e-cl", e_cl, "continual-phase epochs");
    app->add_option("--eta-pre", eta_pre, "pre-training learning rate");
    app->add_option("--eta-cl", eta_cl,
                    "continual learning rate (default: eta_pre / 100)");
    app->add_option("--codec", codec, "latent codec: bitpack | ratechunk");
    app->add_option("--chunk", chunk, "ratechunk chunk length (0 = t/4)");
    app->add_option("--replay-fraction", replay_fraction,
                    "per-class replay fraction");
    app->add_option("--batch-size", batch_size, "pre-training batch size");
    app->add_option("--cl-batch-size", cl_batch_size,
                    "continual-phase batch size");
    app->add_option("--seed", seed, "run seed");
    app->add_option("--v-thr", v_thr, "initial firing threshold");
    app->add_option("--beta", beta, "membrane decay");
    app->add_option("--surrogate-slope", surrogate_slope,
                    "surrogate gradient slope");
    app->add_option("--adjust-interval", adjust_interval,
                    "threshold adjustment interval");
    app->add_option("--readout-scale", readout_scale, "loss readout scale");
    app->add_option("--recurrent", recurrent, "recurrent connections on/off");
    app->add_option("--optimizer", optimizer, "sgd | adam");
    app->add_option("--e-synop", e_synop, "energy per synaptic operation");
    app->add_option("--e-neuron", e_neuron,
                    "energy per neuron-timestep update");
  }

  RunConfig resolve() const {
    RunConfig cfg;
    if (!config_path.empty()) {
      const std::vector<uint8_t> bytes = read_file_bytes(config_path);
      cfg = run_config_from_json(std::string(bytes.begin(), bytes.end()));
    }
    if (!widths.empty()) cfg.layer_widths = widths;
    if (t_step) cfg.t_step = *t_step;
    if (t_pretrain) cfg.t_pretrain = *t_pretrain;
    if (l_ins) cfg.l_ins = *l_ins;
    if (e_pre) cfg.e_pre = *e_pre;
    if (e_cl) cfg.e_cl = *e_cl;
    if (eta_pre) cfg.eta_pre = *eta_pre;
    if (eta_cl) {
      cfg.paper_lr_policy = false;
      cfg.eta_cl_override = *eta_cl;
    }
    if (codec) {
      if (*codec == "bitpack")
        cfg.codec = CodecId::kBitpack;
      else if (*codec == "ratechunk")
        cfg.codec = CodecId::kRateChunk;
      else
        throw ContractError("unknown codec '" + *codec + "'");
    }
    if (chunk) cfg.chunk = *chunk;
    if (replay_fraction) cfg.replay_fraction = *replay_fraction;
    if (batch_size) cfg.batch_size = *batch_size;
    if (cl_batch_size) cfg.cl_batch_size = *cl_batch_size;
    if (seed) cfg.seed = *seed;
    if (v_thr) cfg.lif.v_thr = *v_thr;
    if (beta) cfg.lif.beta = *beta;
    if (surrogate_slope) cfg.lif.surrogate_slope = *surrogate_slope;
    if (adjust_interval) cfg.adjust_interval = *adjust_interval;
    if (readout_scale) cfg.readout_scale = *readout_scale;
    if (recurrent) cfg.recurrent = *recurrent;
    if (optimizer) {
      if (*optimizer == "adam")
        cfg.optimizer = OptimizerKind::kAdam;
      else if (*optimizer == "sgd")
        cfg.optimizer = OptimizerKind::kSgd;
      else
        throw ContractError("unknown optimizer '" + *optimizer + "'");
    }
    if (e_synop) cfg.energy.e_synop = *e_synop;
    if (e_neuron) cfg.energy.e_neuron = *e_neuron;
    cfg.validate();
    return cfg;
  }
};

void write_text(const std::string& path, const std::string& text) {
  write_file_bytes(path, std::vector<uint8_t>(text.begin(), text.end()));
}

Checkpoint make_ckpt(const NetworkTopology& net, const RunConfig& cfg) {
  Checkpoint c;
  c.net = net;
  c.opt_config.kind = cfg.optimizer;
  c.opt_config.eta = cfg.eta_pre;
  return c;
}

int run_cli(int argc, char** argv) {
  CLI::App app{"snncl: spiking-network continual-learning engine"};
  app.require_subcommand(1);

  // gen-data
  auto* gen = app.add_subcommand("gen-data", "generate a synthetic dataset");
  int g_classes = 8, g_per_class = 30, g_channels = 24;
  uint64_t g_seed = 1;
  double g_rate = 12.0;
  std::string g_out = "dataset.evt1";
  gen->add_option("--classes", g_classes);
  gen->add_option("--samples-per-class", g_per_class);
  gen->add_option("--channels", g_channels);
  gen->add_option("--seed", g_seed);
  gen->add_option("--max-rate", g_rate);
  gen->add_option("--out", g_out, "output EVT1 file");

  // shared inputs
  struct IoOpts {
    std::string data, checkpoint, store, out, report, manifest;
    std::string mode = "replay4ncl";
    int held_out = -1;
  };

  CfgCli pre_cfg;
  IoOpts pre_io;
  auto* pre = app.add_subcommand("pretrain", "pre-train on the old tasks");
  pre_cfg.attach(pre);
  pre->add_option("--data", pre_io.data)->required();
  pre->add_option("--held-out", pre_io.held_out,
                  "held-out class (-1 = last)");
  pre->add_option("--out", pre_io.out, "checkpoint output")->required();

  CfgCli prep_cfg;
  IoOpts prep_io;
  auto* prep =
      app.add_subcommand("prepare-replay", "build the latent replay store");
  prep_cfg.attach(prep);
  prep->add_option("--data", prep_io.data)->required();
  prep->add_option("--checkpoint", prep_io.checkpoint)->required();
  prep->add_option("--held-out", prep_io.held_out);
  prep->add_option("--mode", prep_io.mode);
  prep->add_option("--out", prep_io.out, "latent store output")->required();

  CfgCli cl_cfg;
  IoOpts cl_io;
  auto* cl = app.add_subcommand("cl-train", "run the continual phase");
  cl_cfg.attach(cl);
  cl->add_option("--data", cl_io.data)->required();
  cl->add_option("--checkpoint", cl_io.checkpoint)->required();
  cl->add_option("--store", cl_io.store, "latent store (LRS1)");
  cl->add_option("--held-out", cl_io.held_out);
  cl->add_option("--mode", cl_io.mode);
  cl->add_option("--report", cl_io.report, "report CSV output");
  cl->add_option("--out", cl_io.out, "checkpoint output");

  CfgCli ev_cfg;
  IoOpts ev_io;
  int ev_t_step = 0;
  bool ev_adaptive = false;
  auto* ev = app.add_subcommand("eval", "evaluate a checkpoint");
  ev_cfg.attach(ev);
  ev->add_option("--data", ev_io.data)->required();
  ev->add_option("--checkpoint", ev_io.checkpoint)->required();
  ev->add_option("--eval-t-step", ev_t_step,
                 "timesteps for evaluation (0 = config t_step)");
  ev->add_flag("--adaptive", ev_adaptive, "adaptive thresholds");

  CfgCli run_cfg;
  IoOpts run_io;
  std::string run_dir = ".";
  auto* run = app.add_subcommand("run", "end-to-end experiment");
  run_cfg.attach(run);
  run->add_option("--data", run_io.data)->required();
  run->add_option("--mode", run_io.mode);
  run->add_option("--held-out", run_io.held_out);
  run->add_option("--out-dir", run_dir, "output directory");

  CfgCli sw_cfg;
  IoOpts sw_io;
  std::string sw_axis = "t_step", sw_out = "sweep.csv";
  std::vector<int> sw_values;
  auto* sw = app.add_subcommand("sweep", "sweep t_step or l_ins");
  sw_cfg.attach(sw);
  sw->add_option("--data", sw_io.data)->required();
  sw->add_option("--mode", sw_io.mode);
  sw->add_option("--held-out", sw_io.held_out);
  sw->add_option("--axis", sw_axis, "t_step | l_ins");
  sw->add_option("--values", sw_values)->required();
  sw->add_option("--out", sw_out, "combined CSV output");

  CLI11_PARSE(app, argc, argv);

  if (gen->parsed()) {
    const Dataset ds =
        synth_generate(g_classes, g_per_class, g_channels, g_seed, 1.0f,
                       g_rate);
    write_events(ds, g_out);
    std::printf("wrote %d samples (%d classes, %d channels) to %s\n",
                ds.manifest.samples, ds.manifest.classes,
                ds.manifest.channels, g_out.c_str());
    std::printf("dataset hash: %s\n", to_hex(dataset_hash(ds)).c_str());
    return 0;
  }

  if (pre->parsed()) {
    const RunConfig cfg = pre_cfg.resolve();
    const Dataset ds = load_events(pre_io.data);
    const int held = pre_io.held_out < 0 ? ds.manifest.classes - 1
                                         : pre_io.held_out;
    const TaskSplit split =
        make_task_split(ds, held, cfg.replay_fraction, cfg.seed);
    NetworkTopology net = NetworkTopology::random(
        cfg.layer_widths, cfg.lif, mix64(cfg.seed, 0x6e6574ull),
        cfg.recurrent);
    const std::vector<LabeledTrain> data =
        rasterize_all(ds, split.ts_pre, cfg.t_pretrain);
    OptimizerConfig opt;
    opt.kind = cfg.optimizer;
    opt.eta = cfg.eta_pre;
    const PretrainMetrics m =
        pretrain(net, data, cfg.e_pre, opt, cfg.batch_size,
                 mix64(cfg.seed, 0x707265ull), cfg.readout_scale);
    save_checkpoint(make_ckpt(net, cfg), pre_io.out);
    if (!m.epoch_accuracy.empty())
      std::printf("final pre-training accuracy: %.4f\n",
                  m.epoch_accuracy.back());
    std::printf("checkpoint written to %s\n", pre_io.out.c_str());
    return 0;
  }

  if (prep->parsed()) {
    const RunConfig cfg = prep_cfg.resolve();
    const RunMode mode = mode_from_name(prep_io.mode);
    const ResolvedMode rm = resolve_mode(cfg, mode);
    SNNCL_CHECK(rm.use_store, "prepare-replay: mode has no latent store");
    const Dataset ds = load_events(prep_io.data);
    const int held = prep_io.held_out < 0 ? ds.manifest.classes - 1
                                          : prep_io.held_out;
    const TaskSplit split =
        make_task_split(ds, held, cfg.replay_fraction, cfg.seed);
    Checkpoint ckpt = load_checkpoint(prep_io.checkpoint);
    const ReplaySplit rsplit = split_network(ckpt.net, cfg.l_ins);
    const LatentStore store = prepare_replay(ckpt.net, rsplit, ds, split, cfg,
                                             rm.t_step, rm.adaptive);
    save_latent_store(store, prep_io.out);
    std::printf("latent store: %zu entries, %ld bytes -> %s\n",
                store.entries.size(), store.total_bytes(),
                prep_io.out.c_str());
    return 0;
  }

  if (cl->parsed()) {
    const RunConfig cfg = cl_cfg.resolve();
    const RunMode mode = mode_from_name(cl_io.mode);
    const ResolvedMode rm = resolve_mode(cfg, mode);
    const Dataset ds = load_events(cl_io.data);
    const int held = cl_io.held_out < 0 ? ds.manifest.classes - 1
                                        : cl_io.held_out;
    const TaskSplit split =
        make_task_split(ds, held, cfg.replay_fraction, cfg.seed);
    Checkpoint ckpt = load_checkpoint(cl_io.checkpoint);
    const ReplaySplit rsplit = split_network(ckpt.net, cfg.l_ins);
    LatentStore store;
    const LatentStore* store_ptr = nullptr;
    if (rm.use_store) {
      SNNCL_CHECK(!cl_io.store.empty(),
                  "cl-train: --store is required in this mode");
      store = load_latent_store(cl_io.store);
      store_ptr = &store;
    }
    const NclResult res = ncl_train(ckpt.net, rsplit, store_ptr, ds, split,
                                    cfg, rm.t_step, rm.adaptive, rm.eta_cl);
    if (!res.rows.empty()) {
      const EpochRow& last = res.rows.back();
      std::printf("final epoch: old %.4f new %.4f combined %.4f\n",
                  last.old_top1, last.new_top1, last.combined_top1);
    }
    if (!cl_io.report.empty()) {
      ExperimentReport rep;
      rep.rows = res.rows;
      save_report(rep, cl_io.report);
      std::printf("report written to %s\n", cl_io.report.c_str());
    }
    if (!cl_io.out.empty()) {
      save_checkpoint(make_ckpt(ckpt.net, cfg), cl_io.out);
      std::printf("checkpoint written to %s\n", cl_io.out.c_str());
    }
    return 0;
  }

  if (ev->parsed()) {
    const RunConfig cfg = ev_cfg.resolve();
    const Dataset ds = load_events(ev_io.data);
    const Checkpoint ckpt = load_checkpoint(ev_io.checkpoint);
    EvalOptions opts;
    opts.adaptive_threshold = ev_adaptive;
    opts.l_ins = cfg.l_ins;
    opts.adjust_interval = cfg.adjust_interval;
    opts.initial_v_thr = cfg.lif.v_thr;
    const int t = ev_t_step > 0 ? ev_t_step : cfg.t_step;
    const EvalResult res = evaluate(ckpt.net, ds, t, {}, opts);
    std::printf("top-1 accuracy: %.4f (%ld / %ld)\n", res.top1, res.correct,
                res.total);
    return 0;
  }

  if (run->parsed()) {
    const RunConfig cfg = run_cfg.resolve();
    const RunMode mode = mode_from_name(run_io.mode);
    const Dataset ds = load_events(run_io.data);
    const RunArtifacts art = run_experiment(cfg, ds, mode, run_io.held_out);
    std::error_code ec;
    std::filesystem::create_directories(run_dir, ec);
    save_report(art.report, run_dir + "/report.csv");
    write_text(run_dir + "/manifest.json", art.manifest);
    save_checkpoint(make_ckpt(art.net, cfg), run_dir + "/checkpoint.snc1");
    if (!art.store.entries.empty())
      save_latent_store(art.store, run_dir + "/latent.lrs1");
    std::printf("pre-CL old-task accuracy: %.4f\n", art.pre_cl_old_top1);
    if (!art.report.rows.empty()) {
      const EpochRow& last = art.report.rows.back();
      std::printf("final epoch: old %.4f new %.4f combined %.4f\n",
                  last.old_top1, last.new_top1, last.combined_top1);
    }
    std::printf("outputs written to %s\n", run_dir.c_str());
    return 0;
  }

  if (sw->parsed()) {
    const RunConfig cfg = sw_cfg.resolve();
    const RunMode mode = mode_from_name(sw_io.mode);
    SweepAxis axis;
    if (sw_axis == "t_step")
      axis = SweepAxis::kTStep;
    else if (sw_axis == "l_ins")
      axis = SweepAxis::kLIns;
    else
      throw ContractError("sweep: axis must be t_step or l_ins");
    const Dataset ds = load_events(sw_io.data);
    const std::vector<SweepEntry> entries =
        sweep(cfg, axis, sw_values, ds, mode, sw_io.held_out);
    write_text(sw_out, sweep_to_csv(entries, axis));
    std::printf("sweep CSV written to %s\n", sw_out.c_str());
    return 0;
  }

  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run_cli(argc, argv);
  } catch (const snncl::NumericError& e) {
    std::fprintf(stderr, "numeric error: %s\n", e.what());
    return 4;
  } catch (const snncl::DataError& e) {
    std::fprintf(stderr, "data error: %s\n", e.what());
    return 3;
  } catch (const snncl::ContractError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
}
