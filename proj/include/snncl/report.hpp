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

#ifndef SNNCL_REPORT_HPP
#define SNNCL_REPORT_HPP

#include <string>
#include <vector>

namespace snncl {

// Spike-driven energy proxy: per-synaptic-operation and per-neuron-update
// unit costs. Counts are exact, so the proxy is exactly reproducible.
struct EnergyModel {
  double e_synop = 1.0;
  double e_neuron = 0.1;
};

struct EpochRow {
  int epoch = 0;
  double old_top1 = 0.0;
  double new_top1 = 0.0;
  double combined_top1 = 0.0;
  double wall_latency = 0.0;  // seconds; the only nondeterministic column
  long long synop_count = 0;
  double energy_proxy = 0.0;
  long latent_bytes = 0;
};

struct ExperimentReport {
  std::vector<EpochRow> rows;
};

// CSV with a fixed header; doubles are printed with enough digits to
// round-trip losslessly through report_from_csv.
std::string report_to_csv(const ExperimentReport& report);
ExperimentReport report_from_csv(const std::string& csv);
void save_report(const ExperimentReport& report, const std::string& path);
ExperimentReport load_report(const std::string& path);

}  // namespace snncl

#endif  // SNNCL_REPORT_HPP
