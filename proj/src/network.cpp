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

#include "snncl/network.hpp"

#include <random>

namespace snncl {

void NetworkTopology::validate() const {
  SNNCL_CHECK(!layers.empty(), "NetworkTopology: no layers");
  for (int l = 1; l <= depth(); ++l) {
    const LifLayer& ly = layer(l);
    ly.params.validate();
    SNNCL_CHECK(ly.v.rows() == ly.out_width() && ly.v.cols() == ly.out_width(),
                "NetworkTopology: recurrent matrix shape mismatch");
    SNNCL_CHECK(ly.w.allFinite() && ly.v.allFinite(),
                "NetworkTopology: non-finite weights");
    if (l > 1) {
      SNNCL_CHECK(layer(l - 1).out_width() == ly.in_width(),
                  "NetworkTopology: adjacent layer widths incompatible");
    }
  }
}

NetworkTopology NetworkTopology::random(const std::vector<int>& widths,
                                        const LifParams& params, uint64_t seed,
                                        bool recurrent) {
  SNNCL_CHECK(widths.size() >= 2, "NetworkTopology::random: need >= 2 widths");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);

  NetworkTopology net;
  for (size_t i = 0; i + 1 < widths.size(); ++i) {
    const int in = widths[i];
    const int out = widths[i + 1];
    LifLayer ly;
    ly.params = params;
    ly.w.resize(in, out);
    const double w_std = 1.0 / std::sqrt(static_cast<double>(in));
    for (int r = 0; r < in; ++r)
      for (int c = 0; c < out; ++c) ly.w(r, c) = w_std * gauss(rng);
    ly.v = Eigen::MatrixXd::Zero(out, out);
    if (recurrent) {
      const double v_std = 0.5 / std::sqrt(static_cast<double>(out));
      for (int r = 0; r < out; ++r)
        for (int c = 0; c < out; ++c) ly.v(r, c) = v_std * gauss(rng);
    }
    net.layers.push_back(std::move(ly));
  }
  net.validate();
  return net;
}

std::pair<SpikeTrain, LayerTrace> layer_forward(
    const LifLayer& layer, const SpikeTrain& input,
    const std::vector<double>* v_thr_schedule) {
  SNNCL_CHECK(input.width() == layer.in_width(),
              "layer_forward: input width mismatch");
  const int t_total = input.timesteps();
  if (v_thr_schedule != nullptr) {
    SNNCL_CHECK(static_cast<int>(v_thr_schedule->size()) == t_total,
                "layer_forward: schedule length mismatch");
  }

  const int out = layer.out_width();
  SpikeTrain out_train(t_total, out);
  LayerTrace trace;
  trace.membrane.resize(t_total, out);
  trace.spikes.resize(t_total, out);
  trace.thr.resize(t_total);

  LayerState state(out, layer.params.v_rst);
  Eigen::VectorXd x(layer.in_width());
  Eigen::VectorXd pre;
  for (int t = 0; t < t_total; ++t) {
    for (int n = 0; n < layer.in_width(); ++n) x[n] = input.at(t, n);
    const Eigen::VectorXd z =
        layer.w.transpose() * x + layer.v.transpose() * state.spike_out;
    std::optional<double> override;
    if (v_thr_schedule != nullptr) override = (*v_thr_schedule)[t];
    const Eigen::VectorXd s = lif_step(state, z, layer.params, override, &pre);
    trace.membrane.row(t) = pre.transpose();
    trace.spikes.row(t) = s.transpose();
    trace.thr[t] = override.value_or(layer.params.v_thr);
    for (int n = 0; n < out; ++n)
      out_train.set(t, n, s[n] > 0.5 ? 1 : 0);
  }
  return {std::move(out_train), std::move(trace)};
}

namespace {

// Shared timestep-major multi-layer loop. In smooth mode the spike
// nonlinearity is smooth_spike and the reset is interpolated by the
// real-valued spike output.
std::vector<LayerTrace> run_layers(const NetworkTopology& net,
                                   const SpikeTrain& input, int start_layer,
                                   int end_layer, ThresholdPolicy* policy,
                                   bool smooth) {
  if (end_layer <= 0) end_layer = net.depth();
  SNNCL_CHECK(start_layer >= 1 && start_layer <= net.depth(),
              "network_forward: start_layer out of range");
  SNNCL_CHECK(end_layer >= start_layer && end_layer <= net.depth(),
              "network_forward: end_layer out of range");
  if (input.width() != net.layer(start_layer).in_width()) {
    throw ContractError(
        "network_forward: injected activation width does not match the "
        "insertion layer input width");
  }
  const int t_total = input.timesteps();
  const int n_run = end_layer - start_layer + 1;

  std::vector<LayerTrace> traces(n_run);
  std::vector<LayerState> states;
  states.reserve(n_run);
  for (int li = 0; li < n_run; ++li) {
    const LifLayer& ly = net.layer(start_layer + li);
    traces[li].membrane.resize(t_total, ly.out_width());
    traces[li].spikes.resize(t_total, ly.out_width());
    traces[li].thr.resize(t_total);
    states.emplace_back(ly.out_width(), ly.params.v_rst);
  }

  for (int t = 0; t < t_total; ++t) {
    Eigen::VectorXd x(input.width());
    for (int n = 0; n < input.width(); ++n) x[n] = input.at(t, n);
    bool any_in_scope = false;
    for (int li = 0; li < n_run; ++li) {
      const int l = start_layer + li;
      const LifLayer& ly = net.layer(l);
      LayerState& st = states[li];
      const Eigen::VectorXd z =
          ly.w.transpose() * x + ly.v.transpose() * st.spike_out;
      if (!z.allFinite())
        throw NumericError("network_forward: non-finite input current");

      double thr = ly.params.v_thr;
      if (policy != nullptr) {
        const auto o = policy->threshold(l, t);
        if (o.has_value()) thr = *o;
      }

      const int out = ly.out_width();
      Eigen::VectorXd a =
          (ly.params.beta * (st.v_mem.array() - ly.params.v_rst) +
           ly.params.v_rst + z.array())
              .matrix();
      traces[li].membrane.row(t) = a.transpose();
      traces[li].thr[t] = thr;

      Eigen::VectorXd s(out);
      bool layer_spiked = false;
      if (smooth) {
        for (int n = 0; n < out; ++n) {
          s[n] = smooth_spike(a[n] - thr, ly.params.surrogate_slope);
          a[n] = a[n] + (ly.params.v_rst - a[n]) * s[n];
          if (s[n] > 0.5) layer_spiked = true;
        }
      } else {
        for (int n = 0; n < out; ++n) {
          if (a[n] >= thr) {
            s[n] = 1.0;
            a[n] = ly.params.v_rst;
            layer_spiked = true;
          } else {
            s[n] = 0.0;
          }
        }
      }
      traces[li].spikes.row(t) = s.transpose();
      st.v_mem = a;
      st.spike_out = s;
      x = s;
      if (policy != nullptr && policy->in_scope(l) && layer_spiked)
        any_in_scope = true;
    }
    if (policy != nullptr) policy->observe_step(t, any_in_scope);
  }
  return traces;
}

}  // namespace

ForwardResult network_forward(const NetworkTopology& net,
                              const SpikeTrain& input, int start_layer,
                              ThresholdPolicy* policy, int end_layer) {
  if (end_layer <= 0) end_layer = net.depth();
  std::vector<LayerTrace> traces =
      run_layers(net, input, start_layer, end_layer, policy, /*smooth=*/false);
  const LayerTrace& top = traces.back();
  const int t_total = input.timesteps();
  const int out = net.layer(end_layer).out_width();
  SpikeTrain out_train(t_total, out);
  for (int t = 0; t < t_total; ++t)
    for (int n = 0; n < out; ++n)
      out_train.set(t, n, top.spikes(t, n) > 0.5 ? 1 : 0);
  return {std::move(out_train), std::move(traces)};
}

SmoothForwardResult smooth_forward(const NetworkTopology& net,
                                   const SpikeTrain& input, int start_layer,
                                   ThresholdPolicy* policy) {
  SmoothForwardResult res;
  res.traces =
      run_layers(net, input, start_layer, net.depth(), policy, /*smooth=*/true);
  res.readout = res.traces.back().spikes.colwise().sum().transpose();
  return res;
}

}  // namespace snncl
