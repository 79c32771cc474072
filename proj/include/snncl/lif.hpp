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

#ifndef SNNCL_LIF_HPP
#define SNNCL_LIF_HPP

#include <Eigen/Dense>
#include <cmath>
#include <optional>

#include "snncl/error.hpp"

namespace snncl {

// Leaky integrate-and-fire parameters. `beta` is the per-timestep membrane
// decay factor (exponential discretization of the continuous leak), so the
// membrane update is v' = beta*(v - v_rst) + v_rst + z, and a neuron fires
// whenever v' >= v_thr, after which it is hard-reset to v_rst.
struct LifParams {
  double v_thr = 1.0;
  double v_rst = 0.0;
  double beta = 0.9;
  double surrogate_slope = 25.0;

  void validate() const {
    SNNCL_CHECK(beta > 0.0 && beta <= 1.0, "LifParams: beta must be in (0,1]");
    SNNCL_CHECK(v_thr > v_rst, "LifParams: v_thr must exceed v_rst");
    SNNCL_CHECK(surrogate_slope > 0.0,
                "LifParams: surrogate_slope must be positive");
  }
};

// Per-layer run state: membrane potentials and the spike vector emitted at
// the previous timestep (real-valued in smoothed mode).
struct LayerState {
  Eigen::VectorXd v_mem;
  Eigen::VectorXd spike_out;

  explicit LayerState(int width, double v_rst = 0.0)
      : v_mem(Eigen::VectorXd::Constant(width, v_rst)),
        spike_out(Eigen::VectorXd::Zero(width)) {}
};

// Fast-sigmoid surrogate derivative 1 / (1 + k|x|)^2, used in place of the
// step function's derivative during the backward pass.
inline double surrogate_grad(double x, double k) {
  const double d = 1.0 + k * std::abs(x);
  return 1.0 / (d * d);
}

// Smoothed spike function whose derivative is exactly surrogate_grad. Used
// by the smoothed proxy network that defines gradient correctness.
inline double smooth_spike(double x, double k) {
  return 0.5 + x / (1.0 + k * std::abs(x));
}

// One membrane update step. Mutates `state` in place and returns the spike
// vector. If `pre_reset` is non-null it receives the membrane values before
// the reset was applied (the value the backward pass needs at spiking steps).
Eigen::VectorXd lif_step(LayerState& state, const Eigen::VectorXd& z,
                         const LifParams& p,
                         std::optional<double> v_thr_override = std::nullopt,
                         Eigen::VectorXd* pre_reset = nullptr);

}  // namespace snncl

#endif  // SNNCL_LIF_HPP
