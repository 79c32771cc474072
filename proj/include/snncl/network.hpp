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

#ifndef SNNCL_NETWORK_HPP
#define SNNCL_NETWORK_HPP

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <vector>

#include "snncl/lif.hpp"
#include "snncl/spike_train.hpp"

namespace snncl {

// One fully-connected LIF layer. `w` is the feedforward weight matrix
// (in_width x out_width), `v` the recurrent weight matrix
// (out_width x out_width), applied with a one-step delay. Frozen layers are
// never mutated by any training operation.
struct LifLayer {
  Eigen::MatrixXd w;
  Eigen::MatrixXd v;
  LifParams params;
  bool frozen = false;

  int in_width() const { return static_cast<int>(w.rows()); }
  int out_width() const { return static_cast<int>(w.cols()); }
};

// Ordered stack of LIF layers. Layer indices in all public interfaces are
// 1-based: layer 1 consumes the network input, layer depth() produces the
// class readout.
struct NetworkTopology {
  std::vector<LifLayer> layers;

  int depth() const { return static_cast<int>(layers.size()); }
  int in_width() const { return layers.front().in_width(); }
  int out_width() const { return layers.back().out_width(); }

  const LifLayer& layer(int l) const { return layers[l - 1]; }
  LifLayer& layer(int l) { return layers[l - 1]; }

  void validate() const;

  // Builds a network with the given widths (input width first, then one
  // output width per layer), Gaussian weights scaled by 1/sqrt(fan_in).
  // When `recurrent` is false all v matrices are zero.
  static NetworkTopology random(const std::vector<int>& widths,
                                const LifParams& params, uint64_t seed,
                                bool recurrent = true);
};

// Per-layer forward record kept for the backward pass: the pre-reset
// membrane, the emitted spikes (real-valued in smoothed mode), and the
// threshold that was in effect at each timestep.
struct LayerTrace {
  Eigen::MatrixXd membrane;  // T x out_width, pre-reset values
  Eigen::MatrixXd spikes;    // T x out_width
  Eigen::VectorXd thr;       // T
};

// Per-timestep threshold control for a forward pass. `threshold` may return
// an override for a given (1-based layer, timestep); `observe_step` is called
// once per timestep with whether any in-scope layer spiked, which lets a
// closed-loop scheduler react to the network's own activity.
class ThresholdPolicy {
 public:
  virtual ~ThresholdPolicy() = default;
  virtual std::optional<double> threshold(int layer, int t) = 0;
  virtual void observe_step(int t, bool any_spikes_in_scope) { (void)t; (void)any_spikes_in_scope; }
  virtual bool in_scope(int layer) const { (void)layer; return true; }
};

// Applies one fixed per-timestep threshold schedule to every layer.
class FixedSchedulePolicy : public ThresholdPolicy {
 public:
  explicit FixedSchedulePolicy(std::vector<double> schedule)
      : schedule_(std::move(schedule)) {}
  std::optional<double> threshold(int layer, int t) override {
    (void)layer;
    return schedule_[t];
  }
  int length() const { return static_cast<int>(schedule_.size()); }

 private:
  std::vector<double> schedule_;
};

struct ForwardResult {
  SpikeTrain output;
  std::vector<LayerTrace> traces;  // one per executed layer, bottom first
};

// Single-layer forward over all timesteps. The optional schedule overrides
// the layer threshold per timestep and must match the input length.
std::pair<SpikeTrain, LayerTrace> layer_forward(
    const LifLayer& layer, const SpikeTrain& input,
    const std::vector<double>* v_thr_schedule = nullptr);

// Chains layers start_layer..end_layer (end_layer <= 0 means the full
// depth) over the input. Timestep-major so that a closed-loop
// ThresholdPolicy sees each step's aggregate spike activity before the next
// step runs. Starting mid-network lets decompressed latent activations be
// injected at the insertion layer; stopping early runs just the frozen part.
ForwardResult network_forward(const NetworkTopology& net,
                              const SpikeTrain& input, int start_layer = 1,
                              ThresholdPolicy* policy = nullptr,
                              int end_layer = 0);

// Smoothed-proxy forward: identical wiring, but the spike nonlinearity is
// replaced by the real-valued smooth_spike function and the hard reset by its
// smooth interpolation m = a + (v_rst - a) * s. This is the differentiable
// network whose exact gradients the backward pass computes.
struct SmoothForwardResult {
  std::vector<LayerTrace> traces;         // spikes are real-valued here
  Eigen::VectorXd readout;                // per-output-neuron activation sum
};

SmoothForwardResult smooth_forward(const NetworkTopology& net,
                                   const SpikeTrain& input,
                                   int start_layer = 1,
                                   ThresholdPolicy* policy = nullptr);

}  // namespace snncl

#endif  // SNNCL_NETWORK_HPP
