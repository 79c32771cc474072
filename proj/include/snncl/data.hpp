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

#ifndef SNNCL_DATA_HPP
#define SNNCL_DATA_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "snncl/spike_train.hpp"

namespace snncl {

struct Event {
  float time = 0.0f;      // seconds, in [0, duration)
  uint32_t channel = 0;
};

struct EventSample {
  std::vector<Event> events;  // sorted by time, non-decreasing
  int label = 0;
  float duration = 1.0f;      // seconds
};

struct DatasetManifest {
  int channels = 0;
  int classes = 0;
  int samples = 0;
  std::string source;  // "synthetic" or "file"
  uint64_t seed = 0;   // synthetic only
};

struct Dataset {
  DatasetManifest manifest;
  std::vector<EventSample> samples;
};

// Seeded synthetic event-based dataset: each class gets a distinct
// piecewise-constant channel-rate profile (8 time segments); samples are
// inhomogeneous Poisson event lists drawn by thinning, with per-sample rate
// and timing jitter. Deterministic per (seed, class, sample index).
Dataset synth_generate(int classes, int samples_per_class, int channels,
                       uint64_t seed, float duration = 1.0f,
                       double max_rate = 12.0);

// EVT1 event file: magic "EVT1", little-endian; header (channel count u32,
// class count u32, sample count u32); per sample: label u32, event count
// u32, then (time f32 seconds, channel u32) pairs sorted by time. Times are
// normalized to [0, 1): one second is the fixed sample duration.
std::vector<uint8_t> write_events_bytes(const Dataset& dataset);
void write_events(const Dataset& dataset, const std::string& path);
Dataset load_events(const std::string& path);
Dataset parse_events(const std::vector<uint8_t>& bytes);

// FNV-1a hash over the EVT1 serialization, for run manifests.
uint64_t dataset_hash(const Dataset& dataset);

// Divides the sample duration into t_step equal bins; bin (t, n) is 1 iff at
// least one channel-n event falls in bin t (binary clipping). `channels`
// fixes the train width (0 infers it from the sample's maximum channel).
SpikeTrain rasterize(const EventSample& sample, int t_step, int channels = 0);

}  // namespace snncl

#endif  // SNNCL_DATA_HPP
