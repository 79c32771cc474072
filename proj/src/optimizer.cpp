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

#include "snncl/optimizer.hpp"

#include <cmath>

namespace snncl {

void OptimizerState::ensure_shapes(const NetworkTopology& net) {
  if (!mw.empty()) return;
  for (int l = 1; l <= net.depth(); ++l) {
    const LifLayer& ly = net.layer(l);
    mw.push_back(Eigen::MatrixXd::Zero(ly.w.rows(), ly.w.cols()));
    vw.push_back(Eigen::MatrixXd::Zero(ly.w.rows(), ly.w.cols()));
    mv.push_back(Eigen::MatrixXd::Zero(ly.v.rows(), ly.v.cols()));
    vv.push_back(Eigen::MatrixXd::Zero(ly.v.rows(), ly.v.cols()));
  }
}

namespace {

void adam_step(Eigen::MatrixXd& weights, const Eigen::MatrixXd& grad,
               Eigen::MatrixXd& m, Eigen::MatrixXd& v,
               const OptimizerConfig& opt, double bc1, double bc2) {
  m = opt.beta1 * m + (1.0 - opt.beta1) * grad;
  v = opt.beta2 * v.array().matrix() +
      (1.0 - opt.beta2) * grad.array().square().matrix();
  weights.array() -=
      opt.eta * (m.array() / bc1) / ((v.array() / bc2).sqrt() + opt.eps);
}

}  // namespace

void apply_update(NetworkTopology& net, const GradientSet& grads,
                  const OptimizerConfig& opt, OptimizerState& state) {
  opt.validate();
  SNNCL_CHECK(static_cast<int>(grads.dw.size()) == net.depth(),
              "apply_update: gradient layer count mismatch");
  if (!grads.all_finite())
    throw NumericError("apply_update: non-finite gradient, update aborted");
  state.ensure_shapes(net);

  ++state.step;
  const double bc1 = 1.0 - std::pow(opt.beta1, static_cast<double>(state.step));
  const double bc2 = 1.0 - std::pow(opt.beta2, static_cast<double>(state.step));

  for (int l = 1; l <= net.depth(); ++l) {
    LifLayer& ly = net.layer(l);
    if (ly.frozen) continue;
    SNNCL_CHECK(grads.dw[l - 1].rows() == ly.w.rows() &&
                    grads.dw[l - 1].cols() == ly.w.cols(),
                "apply_update: gradient shape mismatch");
    if (opt.kind == OptimizerKind::kSgd) {
      ly.w -= opt.eta * grads.dw[l - 1];
      ly.v -= opt.eta * grads.dv[l - 1];
    } else {
      adam_step(ly.w, grads.dw[l - 1], state.mw[l - 1], state.vw[l - 1], opt,
                bc1, bc2);
      adam_step(ly.v, grads.dv[l - 1], state.mv[l - 1], state.vv[l - 1], opt,
                bc1, bc2);
    }
  }
}

}  // namespace snncl
