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

#include "snncl/loss.hpp"

#include <cmath>

#include "snncl/error.hpp"

namespace snncl {

double cross_entropy_readout(const Eigen::VectorXd& readout, int label,
                             double scale, Eigen::VectorXd* grad) {
  const int c = static_cast<int>(readout.size());
  SNNCL_CHECK(label >= 0 && label < c,
              "cross_entropy_readout: label out of range");
  const Eigen::VectorXd logits = readout * scale;
  const double m = logits.maxCoeff();
  Eigen::VectorXd ex = (logits.array() - m).exp();
  const double z = ex.sum();
  const double loss = std::log(z) - (logits[label] - m);
  if (grad != nullptr) {
    *grad = (ex / z) * scale;
    (*grad)[label] -= scale;
  }
  if (!std::isfinite(loss))
    throw NumericError("cross_entropy_readout: non-finite loss");
  return loss;
}

int argmax_readout(const Eigen::VectorXd& readout) {
  int best = 0;
  for (int i = 1; i < readout.size(); ++i)
    if (readout[i] > readout[best]) best = i;
  return best;
}

LossReport readout_loss(const SpikeTrain& output, int label, double scale) {
  SNNCL_CHECK(label >= 0 && label < output.width(),
              "readout_loss: label out of range");
  LossReport rep;
  rep.spike_counts = output.per_neuron_counts();
  Eigen::VectorXd readout(output.width());
  for (int n = 0; n < output.width(); ++n)
    readout[n] = static_cast<double>(rep.spike_counts[n]);
  rep.loss = cross_entropy_readout(readout, label, scale);
  rep.predicted = argmax_readout(readout);
  return rep;
}

}  // namespace snncl
