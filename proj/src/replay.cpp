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

#include "snncl/replay.hpp"

#include "snncl/util.hpp"

namespace snncl {

long codec_payload_bytes(CodecId codec, int t, int width, int chunk) {
  switch (codec) {
    case CodecId::kBitpack:
      return (static_cast<long>(t) * width + 7) / 8;
    case CodecId::kRateChunk: {
      SNNCL_CHECK(chunk >= 1, "codec_payload_bytes: chunk must be >= 1");
      const long n_chunks = (t + chunk - 1) / chunk;
      return n_chunks * width;
    }
  }
  throw CodecError("codec_payload_bytes: unknown codec id");
}

LatentActivations compress_latent(const SpikeTrain& train, CodecId codec,
                                  int chunk, uint32_t label) {
  LatentActivations a;
  a.codec = codec;
  a.t = train.timesteps();
  a.width = train.width();
  a.chunk = chunk;
  a.label = label;
  a.neuron_counts = train.per_neuron_counts();

  const int t_total = train.timesteps();
  const int width = train.width();

  if (codec == CodecId::kBitpack) {
    a.payload.assign(codec_payload_bytes(codec, t_total, width, chunk), 0);
    for (int t = 0; t < t_total; ++t) {
      for (int n = 0; n < width; ++n) {
        if (train.at(t, n)) {
          const long bit = static_cast<long>(t) * width + n;
          a.payload[bit / 8] |= static_cast<uint8_t>(1u << (bit % 8));
        }
      }
    }
  } else if (codec == CodecId::kRateChunk) {
    SNNCL_CHECK(chunk >= 1, "compress_latent: chunk must be >= 1");
    if (t_total % chunk != 0) a.flags |= kFlagPadded;
    const int n_chunks = (t_total + chunk - 1) / chunk;
    a.payload.assign(static_cast<size_t>(n_chunks) * width, 0);
    for (int c = 0; c < n_chunks; ++c) {
      const int t0 = c * chunk;
      const int t1 = std::min(t_total, t0 + chunk);
      for (int n = 0; n < width; ++n) {
        int count = 0;
        for (int t = t0; t < t1; ++t) count += train.at(t, n);
        if (count > 255) {
          count = 255;
          a.flags |= kFlagSaturated;
        }
        a.payload[static_cast<size_t>(c) * width + n] =
            static_cast<uint8_t>(count);
      }
    }
  } else {
    throw CodecError("compress_latent: unknown codec id");
  }
  return a;
}

SpikeTrain decompress_latent(const LatentActivations& a) {
  const long expected =
      codec_payload_bytes(a.codec, a.t, a.width, a.chunk);
  if (a.payload_bytes() != expected)
    throw CodecError("decompress_latent: payload size does not match header");

  SpikeTrain train(a.t, a.width);
  if (a.codec == CodecId::kBitpack) {
    for (int t = 0; t < a.t; ++t) {
      for (int n = 0; n < a.width; ++n) {
        const long bit = static_cast<long>(t) * a.width + n;
        if (a.payload[bit / 8] & (1u << (bit % 8))) train.set(t, n, 1);
      }
    }
  } else if (a.codec == CodecId::kRateChunk) {
    const int n_chunks = (a.t + a.chunk - 1) / a.chunk;
    for (int c = 0; c < n_chunks; ++c) {
      const int t0 = c * a.chunk;
      const int valid = std::min(a.t - t0, a.chunk);
      for (int n = 0; n < a.width; ++n) {
        const int k = a.payload[static_cast<size_t>(c) * a.width + n];
        if (k > valid)
          throw CodecError(
              "decompress_latent: chunk count exceeds chunk length");
        // k spikes at evenly spaced offsets within the chunk.
        for (int i = 0; i < k; ++i) {
          const int offset = static_cast<int>(
              (static_cast<long>(i) * valid) / k);
          train.set(t0 + offset, n, 1);
        }
      }
    }
  } else {
    throw CodecError("decompress_latent: unknown codec id");
  }
  return train;
}

long LatentStore::total_bytes() const {
  long total = 0;
  for (const LatentActivations& e : entries) total += e.stored_bytes();
  return total;
}

void LatentStore::append(LatentActivations entry) {
  if (entries.empty()) {
    codec = entry.codec;
    t = entry.t;
    width = entry.width;
    chunk = entry.chunk;
  } else {
    SNNCL_CHECK(entry.codec == codec && entry.t == t &&
                    entry.width == width && entry.chunk == chunk,
                "LatentStore: entries must share (codec, T, width, chunk)");
  }
  entries.push_back(std::move(entry));
}

std::vector<uint8_t> serialize_latent_store(const LatentStore& store) {
  std::vector<uint8_t> out;
  out.push_back('L');
  out.push_back('R');
  out.push_back('S');
  out.push_back('1');
  append_le<uint8_t>(out, static_cast<uint8_t>(store.codec));
  append_le<uint8_t>(out, 0);  // reserved
  append_le<uint16_t>(out, static_cast<uint16_t>(store.t));
  append_le<uint16_t>(out, static_cast<uint16_t>(store.width));
  append_le<uint16_t>(out, static_cast<uint16_t>(store.chunk));
  append_le<uint32_t>(out, static_cast<uint32_t>(store.entries.size()));

  for (const LatentActivations& e : store.entries) {
    append_le<uint8_t>(out, static_cast<uint8_t>(e.codec));
    append_le<uint8_t>(out, e.flags);
    append_le<uint16_t>(out, static_cast<uint16_t>(e.t));
    append_le<uint16_t>(out, static_cast<uint16_t>(e.width));
    append_le<uint16_t>(out, static_cast<uint16_t>(e.chunk));
    append_le<uint32_t>(out, e.label);
    append_le<uint32_t>(out, 0);  // reserved
    out.insert(out.end(), e.payload.begin(), e.payload.end());
  }
  return out;
}

LatentStore deserialize_latent_store(const std::vector<uint8_t>& bytes) {
  if (bytes.size() < 16) throw DataError("latent store: file too short");
  if (bytes[0] != 'L' || bytes[1] != 'R' || bytes[2] != 'S' || bytes[3] != '1')
    throw DataError("latent store: bad magic at offset 0");
  size_t off = 4;
  LatentStore store;
  store.codec = static_cast<CodecId>(read_le<uint8_t>(bytes, off));
  (void)read_le<uint8_t>(bytes, off);
  store.t = read_le<uint16_t>(bytes, off);
  store.width = read_le<uint16_t>(bytes, off);
  store.chunk = read_le<uint16_t>(bytes, off);
  const uint32_t count = read_le<uint32_t>(bytes, off);

  for (uint32_t i = 0; i < count; ++i) {
    if (off + kEntryHeaderBytes > bytes.size())
      throw DataError("latent store: truncated entry header at offset " +
                      std::to_string(off));
    LatentActivations e;
    e.codec = static_cast<CodecId>(read_le<uint8_t>(bytes, off));
    e.flags = read_le<uint8_t>(bytes, off);
    e.t = read_le<uint16_t>(bytes, off);
    e.width = read_le<uint16_t>(bytes, off);
    e.chunk = read_le<uint16_t>(bytes, off);
    e.label = read_le<uint32_t>(bytes, off);
    (void)read_le<uint32_t>(bytes, off);
    const long payload = codec_payload_bytes(e.codec, e.t, e.width, e.chunk);
    if (off + static_cast<size_t>(payload) > bytes.size())
      throw DataError("latent store: truncated entry payload at offset " +
                      std::to_string(off));
    e.payload.assign(bytes.begin() + off, bytes.begin() + off + payload);
    off += payload;

    // Rebuild the accounting counts from the payload.
    if (e.codec == CodecId::kBitpack) {
      e.neuron_counts = decompress_latent(e).per_neuron_counts();
    } else {
      e.neuron_counts.assign(e.width, 0);
      const int n_chunks = (e.t + e.chunk - 1) / e.chunk;
      for (int c = 0; c < n_chunks; ++c)
        for (int n = 0; n < e.width; ++n)
          e.neuron_counts[n] += e.payload[static_cast<size_t>(c) * e.width + n];
    }
    store.append(std::move(e));
  }
  return store;
}

void save_latent_store(const LatentStore& store, const std::string& path) {
  write_file_bytes(path, serialize_latent_store(store));
}

LatentStore load_latent_store(const std::string& path) {
  return deserialize_latent_store(read_file_bytes(path));
}

ReplaySplit split_network(NetworkTopology& net, int l_ins) {
  SNNCL_CHECK(l_ins >= 1 && l_ins <= net.depth(),
              "split_network: l_ins out of range");
  for (int l = 1; l <= net.depth(); ++l) net.layer(l).frozen = l < l_ins;
  return ReplaySplit{l_ins, net.depth()};
}

LatentStore generate_latent(const NetworkTopology& net, int l_ins,
                            const std::vector<LabeledTrain>& ts_replay,
                            CodecId codec, int chunk,
                            const PolicyFactory& policy_factory,
                            RunStats* stats) {
  SNNCL_CHECK(!ts_replay.empty(), "generate_latent: empty replay set");
  SNNCL_CHECK(l_ins >= 1 && l_ins <= net.depth(),
              "generate_latent: l_ins out of range");

  LatentStore store;
  for (const LabeledTrain& sample : ts_replay) {
    SpikeTrain activations;
    if (l_ins == 1) {
      activations = sample.train;
    } else {
      std::unique_ptr<ThresholdPolicy> policy;
      if (policy_factory) policy = policy_factory();
      ForwardResult fwd = network_forward(net, sample.train, 1, policy.get(),
                                          /*end_layer=*/l_ins - 1);
      if (stats != nullptr)
        stats->add(count_forward(net, 1, sample.train, fwd.traces));
      activations = std::move(fwd.output);
    }
    store.append(compress_latent(activations, codec, chunk,
                                 static_cast<uint32_t>(sample.label)));
  }
  return store;
}

MemoryReport latent_memory_report(
    const LatentStore& store, const std::vector<AlternateSizing>& alternates) {
  MemoryReport rep;
  for (const LatentActivations& e : store.entries) {
    rep.per_sample_bytes.push_back(e.stored_bytes());
    rep.total_bytes += e.stored_bytes();
  }
  for (const AlternateSizing& alt : alternates) {
    const long per_entry =
        codec_payload_bytes(alt.codec, alt.t, store.width, alt.chunk) +
        kEntryHeaderBytes;
    rep.hypothetical_bytes.emplace_back(
        alt, per_entry * static_cast<long>(store.entries.size()));
  }
  return rep;
}

}  // namespace snncl
