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

#include "snncl/data.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "snncl/error.hpp"
#include "snncl/util.hpp"

namespace snncl {

namespace {

constexpr int kRateSegments = 8;

}  // namespace

Dataset synth_generate(int classes, int samples_per_class, int channels,
                       uint64_t seed, float duration, double max_rate) {
  SNNCL_CHECK(classes >= 1 && samples_per_class >= 1 && channels >= 1,
              "synth_generate: all counts must be >= 1");
  SNNCL_CHECK(duration > 0.0f, "synth_generate: duration must be positive");

  Dataset ds;
  ds.manifest.channels = channels;
  ds.manifest.classes = classes;
  ds.manifest.samples = classes * samples_per_class;
  ds.manifest.source = "synthetic";
  ds.manifest.seed = seed;

  // Per-class rate profiles: rate[channel][segment].
  std::vector<std::vector<double>> profiles(
      static_cast<size_t>(classes),
      std::vector<double>(static_cast<size_t>(channels) * kRateSegments));
  for (int c = 0; c < classes; ++c) {
    std::mt19937_64 rng(mix64(seed, 0x70726f66ull + c));
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    for (auto& r : profiles[c]) {
      const double u = uni(rng);
      r = max_rate * u * u;  // squared to sharpen channel contrast
    }
  }

  for (int c = 0; c < classes; ++c) {
    for (int i = 0; i < samples_per_class; ++i) {
      std::mt19937_64 rng(
          mix64(seed, mix64(static_cast<uint64_t>(c) << 20, i)));
      std::uniform_real_distribution<double> uni(0.0, 1.0);
      std::normal_distribution<double> jitter(0.0, 0.02);
      const double rate_scale = 0.8 + 0.4 * uni(rng);

      EventSample sample;
      sample.label = c;
      sample.duration = duration;
      for (int ch = 0; ch < channels; ++ch) {
        // Thinning from the constant envelope max_rate * rate_scale.
        const double envelope = max_rate * rate_scale;
        double t = 0.0;
        while (true) {
          const double u = uni(rng);
          t += -std::log(1.0 - u) / envelope;
          if (t >= duration) break;
          const int seg = std::min(
              kRateSegments - 1,
              static_cast<int>(t / duration * kRateSegments));
          const double lambda =
              profiles[c][static_cast<size_t>(ch) * kRateSegments + seg] *
              rate_scale;
          if (uni(rng) * envelope < lambda) {
            double jt = t + jitter(rng);
            jt = std::min(static_cast<double>(duration) * (1.0 - 1e-7),
                          std::max(0.0, jt));
            sample.events.push_back(
                {static_cast<float>(jt), static_cast<uint32_t>(ch)});
          }
        }
      }
      std::sort(sample.events.begin(), sample.events.end(),
                [](const Event& a, const Event& b) {
                  return a.time != b.time ? a.time < b.time
                                          : a.channel < b.channel;
                });
      ds.samples.push_back(std::move(sample));
    }
  }
  return ds;
}

std::vector<uint8_t> write_events_bytes(const Dataset& dataset) {
  std::vector<uint8_t> out;
  out.push_back('E');
  out.push_back('V');
  out.push_back('T');
  out.push_back('1');
  append_le<uint32_t>(out, static_cast<uint32_t>(dataset.manifest.channels));
  append_le<uint32_t>(out, static_cast<uint32_t>(dataset.manifest.classes));
  append_le<uint32_t>(out, static_cast<uint32_t>(dataset.samples.size()));
  for (const EventSample& s : dataset.samples) {
    append_le<uint32_t>(out, static_cast<uint32_t>(s.label));
    append_le<uint32_t>(out, static_cast<uint32_t>(s.events.size()));
    for (const Event& e : s.events) {
      append_le<float>(out, e.time);
      append_le<uint32_t>(out, e.channel);
    }
  }
  return out;
}

void write_events(const Dataset& dataset, const std::string& path) {
  write_file_bytes(path, write_events_bytes(dataset));
}

Dataset parse_events(const std::vector<uint8_t>& bytes) {
  if (bytes.size() < 4 || bytes[0] != 'E' || bytes[1] != 'V' ||
      bytes[2] != 'T' || bytes[3] != '1')
    throw DataError("EVT1: bad magic at offset 0");
  if (bytes.size() < 16) throw DataError("EVT1: truncated header at offset 4");

  size_t off = 4;
  Dataset ds;
  ds.manifest.channels = static_cast<int>(read_le<uint32_t>(bytes, off));
  ds.manifest.classes = static_cast<int>(read_le<uint32_t>(bytes, off));
  const uint32_t n_samples = read_le<uint32_t>(bytes, off);
  ds.manifest.samples = static_cast<int>(n_samples);
  ds.manifest.source = "file";

  for (uint32_t i = 0; i < n_samples; ++i) {
    if (off + 8 > bytes.size())
      throw DataError("EVT1: truncated sample header at offset " +
                      std::to_string(off));
    EventSample s;
    const uint32_t label = read_le<uint32_t>(bytes, off);
    if (label >= static_cast<uint32_t>(ds.manifest.classes))
      throw DataError("EVT1: label exceeds class count at offset " +
                      std::to_string(off - 8));
    s.label = static_cast<int>(label);
    const uint32_t n_events = read_le<uint32_t>(bytes, off);
    if (off + static_cast<size_t>(n_events) * 8 > bytes.size())
      throw DataError("EVT1: truncated event list at offset " +
                      std::to_string(off));
    float prev_time = 0.0f;
    for (uint32_t e = 0; e < n_events; ++e) {
      const size_t event_off = off;
      Event ev;
      ev.time = read_le<float>(bytes, off);
      ev.channel = read_le<uint32_t>(bytes, off);
      if (!(ev.time >= 0.0f) || ev.time >= 1.0f)
        throw DataError("EVT1: event time outside [0,1) at offset " +
                        std::to_string(event_off));
      if (ev.time < prev_time)
        throw DataError("EVT1: unsorted event times at offset " +
                        std::to_string(event_off));
      if (ev.channel >= static_cast<uint32_t>(ds.manifest.channels))
        throw DataError("EVT1: channel overflow at offset " +
                        std::to_string(event_off + 4));
      prev_time = ev.time;
      s.events.push_back(ev);
    }
    s.duration = 1.0f;
    ds.samples.push_back(std::move(s));
  }
  if (off != bytes.size())
    throw DataError("EVT1: trailing bytes at offset " + std::to_string(off));
  return ds;
}

Dataset load_events(const std::string& path) {
  return parse_events(read_file_bytes(path));
}

uint64_t dataset_hash(const Dataset& dataset) {
  const std::vector<uint8_t> bytes = write_events_bytes(dataset);
  return fnv1a64(bytes.data(), bytes.size());
}

SpikeTrain rasterize(const EventSample& sample, int t_step, int channels) {
  SNNCL_CHECK(t_step >= 1, "rasterize: t_step must be >= 1");
  int width = channels;
  if (width == 0) {
    for (const Event& e : sample.events)
      width = std::max(width, static_cast<int>(e.channel) + 1);
  }
  SpikeTrain train(t_step, width);
  for (const Event& e : sample.events) {
    int bin = static_cast<int>(e.time / sample.duration * t_step);
    bin = std::min(bin, t_step - 1);
    train.set(bin, static_cast<int>(e.channel), 1);
  }
  return train;
}

}  // namespace snncl
