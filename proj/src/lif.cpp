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

#include "snncl/lif.hpp"

namespace snncl {

Eigen::VectorXd lif_step(LayerState& state, const Eigen::VectorXd& z,
                         const LifParams& p,
                         std::optional<double> v_thr_override,
                         Eigen::VectorXd* pre_reset) {
  SNNCL_CHECK(z.size() == state.v_mem.size(),
              "lif_step: input dimension mismatch");
  if (!z.allFinite()) throw NumericError("lif_step: non-finite input current");

  const double thr = v_thr_override.value_or(p.v_thr);
  const int n = static_cast<int>(z.size());

  Eigen::VectorXd v_new =
      (p.beta * (state.v_mem.array() - p.v_rst) + p.v_rst + z.array())
          .matrix();
  if (pre_reset != nullptr) *pre_reset = v_new;

  Eigen::VectorXd spikes(n);
  for (int i = 0; i < n; ++i) {
    if (v_new[i] >= thr) {
      spikes[i] = 1.0;
      v_new[i] = p.v_rst;  // hard reset, recorded after the spike
    } else {
      spikes[i] = 0.0;
    }
  }

  state.v_mem = v_new;
  state.spike_out = spikes;
  return spikes;
}

}  // namespace snncl
