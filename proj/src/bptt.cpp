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

#include "snncl/bptt.hpp"

namespace snncl {

GradientSet GradientSet::zeros(const NetworkTopology& net) {
  GradientSet g;
  g.dw.reserve(net.depth());
  g.dv.reserve(net.depth());
  for (int l = 1; l <= net.depth(); ++l) {
    const LifLayer& ly = net.layer(l);
    g.dw.push_back(Eigen::MatrixXd::Zero(ly.w.rows(), ly.w.cols()));
    g.dv.push_back(Eigen::MatrixXd::Zero(ly.v.rows(), ly.v.cols()));
  }
  return g;
}

bool GradientSet::all_finite() const {
  for (const auto& m : dw)
    if (!m.allFinite()) return false;
  for (const auto& m : dv)
    if (!m.allFinite()) return false;
  return true;
}

void GradientSet::accumulate(const GradientSet& other) {
  for (size_t i = 0; i < dw.size(); ++i) {
    dw[i] += other.dw[i];
    dv[i] += other.dv[i];
  }
}

void GradientSet::scale(double factor) {
  for (auto& m : dw) m *= factor;
  for (auto& m : dv) m *= factor;
}

GradientSet bptt_backward(const NetworkTopology& net, const SpikeTrain& input,
                          const std::vector<LayerTrace>& traces,
                          const Eigen::VectorXd& readout_grad,
                          int first_learning_layer, int start_layer) {
  const int depth = net.depth();
  SNNCL_CHECK(start_layer >= 1 && start_layer <= depth,
              "bptt_backward: start_layer out of range");
  SNNCL_CHECK(first_learning_layer >= start_layer &&
                  first_learning_layer <= depth,
              "bptt_backward: first_learning_layer out of range");
  SNNCL_CHECK(static_cast<int>(traces.size()) == depth - start_layer + 1,
              "bptt_backward: trace count does not match the forward pass");
  SNNCL_CHECK(readout_grad.size() == net.out_width(),
              "bptt_backward: readout gradient width mismatch");
  const int t_total = input.timesteps();
  for (const LayerTrace& tr : traces) {
    SNNCL_CHECK(tr.membrane.rows() == t_total && tr.spikes.rows() == t_total,
                "bptt_backward: trace length does not match the input");
  }

  GradientSet grads = GradientSet::zeros(net);

  // dloss/ds for the current layer's output at every timestep, excluding
  // same-layer recurrent and reset contributions (those are added in the
  // reverse-time loop).
  std::vector<Eigen::VectorXd> gs_ext(t_total,
                                      Eigen::VectorXd::Zero(net.out_width()));
  for (int t = 0; t < t_total; ++t) gs_ext[t] = readout_grad;

  for (int l = depth; l >= first_learning_layer; --l) {
    const LifLayer& ly = net.layer(l);
    const LayerTrace& tr = traces[l - start_layer];
    const int out = ly.out_width();
    const double k = ly.params.surrogate_slope;
    const double v_rst = ly.params.v_rst;
    const double beta = ly.params.beta;

    std::vector<Eigen::VectorXd> gs_lower;
    if (l > first_learning_layer)
      gs_lower.assign(t_total, Eigen::VectorXd::Zero(ly.in_width()));

    Eigen::VectorXd da_next = Eigen::VectorXd::Zero(out);
    Eigen::VectorXd x_t(ly.in_width());
    for (int t = t_total - 1; t >= 0; --t) {
      const Eigen::VectorXd a_t = tr.membrane.row(t).transpose();
      const Eigen::VectorXd s_t = tr.spikes.row(t).transpose();
      const double thr = tr.thr[t];

      Eigen::VectorXd gs = gs_ext[t];
      Eigen::VectorXd dm = Eigen::VectorXd::Zero(out);
      if (t < t_total - 1) {
        gs += ly.v * da_next;  // z(t+1) contains v^T s(t)
        dm = beta * da_next;   // a(t+1) contains beta * (m(t) - v_rst)
      }

      // Reset interpolation m = a + (v_rst - a) s: the spike path carries
      // dm * (v_rst - a), the direct path dm * (1 - s).
      const Eigen::VectorXd ds =
          gs + dm.cwiseProduct((v_rst - a_t.array()).matrix());
      Eigen::VectorXd da(out);
      for (int n = 0; n < out; ++n) {
        da[n] = dm[n] * (1.0 - s_t[n]) + ds[n] * surrogate_grad(a_t[n] - thr, k);
      }

      if (l - start_layer == 0) {
        for (int n = 0; n < ly.in_width(); ++n) x_t[n] = input.at(t, n);
      } else {
        x_t = traces[l - start_layer - 1].spikes.row(t).transpose();
      }
      grads.dw[l - 1] += x_t * da.transpose();
      if (t >= 1) {
        const Eigen::VectorXd s_prev = tr.spikes.row(t - 1).transpose();
        grads.dv[l - 1] += s_prev * da.transpose();
      }
      if (l > first_learning_layer) gs_lower[t] = ly.w * da;
      da_next = da;
    }
    if (l > first_learning_layer) gs_ext = std::move(gs_lower);
  }

  // Frozen layers contribute nothing even if they sit above the first
  // learning layer.
  for (int l = 1; l <= depth; ++l) {
    if (net.layer(l).frozen) {
      grads.dw[l - 1].setZero();
      grads.dv[l - 1].setZero();
    }
  }
  return grads;
}

}  // namespace snncl
