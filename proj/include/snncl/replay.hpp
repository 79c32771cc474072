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

#ifndef SNNCL_REPLAY_HPP
#define SNNCL_REPLAY_HPP

#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "snncl/accounting.hpp"
#include "snncl/network.hpp"
#include "snncl/pretrain.hpp"
#include "snncl/spike_train.hpp"

namespace snncl {

// Latent payload codecs. Bitpack is lossless (1 bit per entry); ratechunk
// stores per-chunk per-neuron spike counts, losing timing inside a chunk but
// preserving the counts exactly.
enum class CodecId : uint8_t { kBitpack = 1, kRateChunk = 2 };

constexpr long kEntryHeaderBytes = 16;

// Entry flag bits.
constexpr uint8_t kFlagSaturated = 0x01;  // a chunk count was clamped to 255
constexpr uint8_t kFlagPadded = 0x02;     // chunk does not divide T

// One compressed latent-replay sample captured at the insertion layer.
struct LatentActivations {
  CodecId codec = CodecId::kBitpack;
  uint8_t flags = 0;
  int t = 0;
  int width = 0;
  int chunk = 0;
  uint32_t label = 0;
  std::vector<uint8_t> payload;
  std::vector<long> neuron_counts;  // per-neuron totals, for accounting

  long payload_bytes() const { return static_cast<long>(payload.size()); }
  long stored_bytes() const { return payload_bytes() + kEntryHeaderBytes; }
};

// Analytic payload size of a codec, in bytes, excluding the entry header.
long codec_payload_bytes(CodecId codec, int t, int width, int chunk);

LatentActivations compress_latent(const SpikeTrain& train, CodecId codec,
                                  int chunk, uint32_t label = 0);
SpikeTrain decompress_latent(const LatentActivations& a);

// Sealed collection of latent activations sharing (codec, T, width, chunk).
struct LatentStore {
  CodecId codec = CodecId::kBitpack;
  int t = 0;
  int width = 0;
  int chunk = 0;
  std::vector<LatentActivations> entries;

  long total_bytes() const;
  void append(LatentActivations entry);
};

// Latent store file, magic "LRS1", little-endian, bit-exact across
// platforms.
std::vector<uint8_t> serialize_latent_store(const LatentStore& store);
LatentStore deserialize_latent_store(const std::vector<uint8_t>& bytes);
void save_latent_store(const LatentStore& store, const std::string& path);
LatentStore load_latent_store(const std::string& path);

// Frozen/learning partition of a network at the insertion layer. The split
// is a view: it marks frozen flags in place and shares the weights, so
// frozen part (layers 1..l_ins-1) plus learning part (layers l_ins..L) is
// the original topology.
struct ReplaySplit {
  int l_ins = 1;
  int depth = 0;

  int first_frozen() const { return l_ins > 1 ? 1 : 0; }
  int first_learning() const { return l_ins; }
};

ReplaySplit split_network(NetworkTopology& net, int l_ins);

// Fresh threshold-control policy per sample; a null factory means static
// per-layer thresholds.
using PolicyFactory = std::function<std::unique_ptr<ThresholdPolicy>()>;

// Runs each replay sample through the frozen part (layers 1..l_ins-1),
// captures the spike activations feeding layer l_ins, and compresses them.
// For l_ins = 1 the raw input train is stored.
LatentStore generate_latent(const NetworkTopology& net, int l_ins,
                            const std::vector<LabeledTrain>& ts_replay,
                            CodecId codec, int chunk,
                            const PolicyFactory& policy_factory = nullptr,
                            RunStats* stats = nullptr);

// Exact byte accounting for a store, plus analytic sizes under alternate
// (T, codec, chunk) settings for comparison rows.
struct AlternateSizing {
  int t = 0;
  CodecId codec = CodecId::kBitpack;
  int chunk = 0;
};

struct MemoryReport {
  long total_bytes = 0;
  std::vector<long> per_sample_bytes;
  std::vector<std::pair<AlternateSizing, long>> hypothetical_bytes;
};

MemoryReport latent_memory_report(
    const LatentStore& store,
    const std::vector<AlternateSizing>& alternates = {});

}  // namespace snncl

#endif  // SNNCL_REPLAY_HPP
