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

#include "snncl/checkpoint.hpp"

#include "snncl/util.hpp"

namespace snncl {

namespace {

constexpr uint32_t kMagic = 0x31434e53;  // "SNC1"
constexpr uint32_t kVersion = 1;

void append_matrix(std::vector<uint8_t>& out, const Eigen::MatrixXd& m) {
  append_le<uint32_t>(out, static_cast<uint32_t>(m.rows()));
  append_le<uint32_t>(out, static_cast<uint32_t>(m.cols()));
  for (Eigen::Index c = 0; c < m.cols(); ++c)
    for (Eigen::Index r = 0; r < m.rows(); ++r) append_le<double>(out, m(r, c));
}

Eigen::MatrixXd read_matrix(const std::vector<uint8_t>& in, size_t& off) {
  if (off + 8 > in.size()) throw DataError("checkpoint: truncated matrix header");
  const uint32_t rows = read_le<uint32_t>(in, off);
  const uint32_t cols = read_le<uint32_t>(in, off);
  if (off + static_cast<size_t>(rows) * cols * 8 > in.size())
    throw DataError("checkpoint: truncated matrix payload");
  Eigen::MatrixXd m(rows, cols);
  for (uint32_t c = 0; c < cols; ++c)
    for (uint32_t r = 0; r < rows; ++r) m(r, c) = read_le<double>(in, off);
  return m;
}

}  // namespace

std::vector<uint8_t> serialize_checkpoint(const Checkpoint& ckpt) {
  std::vector<uint8_t> out;
  append_le<uint32_t>(out, kMagic);
  append_le<uint32_t>(out, kVersion);

  const NetworkTopology& net = ckpt.net;
  append_le<uint32_t>(out, static_cast<uint32_t>(net.depth()));
  for (int l = 1; l <= net.depth(); ++l) {
    const LifLayer& ly = net.layer(l);
    append_le<double>(out, ly.params.v_thr);
    append_le<double>(out, ly.params.v_rst);
    append_le<double>(out, ly.params.beta);
    append_le<double>(out, ly.params.surrogate_slope);
    append_le<uint8_t>(out, ly.frozen ? 1 : 0);
    append_matrix(out, ly.w);
    append_matrix(out, ly.v);
  }

  append_le<double>(out, ckpt.opt_config.eta);
  append_le<uint8_t>(out, static_cast<uint8_t>(ckpt.opt_config.kind));
  append_le<double>(out, ckpt.opt_config.beta1);
  append_le<double>(out, ckpt.opt_config.beta2);
  append_le<double>(out, ckpt.opt_config.eps);

  append_le<int64_t>(out, ckpt.opt_state.step);
  append_le<uint32_t>(out, static_cast<uint32_t>(ckpt.opt_state.mw.size()));
  for (size_t i = 0; i < ckpt.opt_state.mw.size(); ++i) {
    append_matrix(out, ckpt.opt_state.mw[i]);
    append_matrix(out, ckpt.opt_state.vw[i]);
    append_matrix(out, ckpt.opt_state.mv[i]);
    append_matrix(out, ckpt.opt_state.vv[i]);
  }

  append_le<uint32_t>(out, static_cast<uint32_t>(ckpt.rng_state.size()));
  out.insert(out.end(), ckpt.rng_state.begin(), ckpt.rng_state.end());
  return out;
}

Checkpoint deserialize_checkpoint(const std::vector<uint8_t>& bytes) {
  size_t off = 0;
  if (bytes.size() < 12) throw DataError("checkpoint: file too short");
  if (read_le<uint32_t>(bytes, off) != kMagic)
    throw DataError("checkpoint: bad magic at offset 0");
  const uint32_t version = read_le<uint32_t>(bytes, off);
  if (version != kVersion)
    throw DataError("checkpoint: unsupported version " +
                    std::to_string(version));

  Checkpoint ckpt;
  const uint32_t depth = read_le<uint32_t>(bytes, off);
  for (uint32_t l = 0; l < depth; ++l) {
    if (off + 33 > bytes.size()) throw DataError("checkpoint: truncated layer");
    LifLayer ly;
    ly.params.v_thr = read_le<double>(bytes, off);
    ly.params.v_rst = read_le<double>(bytes, off);
    ly.params.beta = read_le<double>(bytes, off);
    ly.params.surrogate_slope = read_le<double>(bytes, off);
    ly.frozen = read_le<uint8_t>(bytes, off) != 0;
    ly.w = read_matrix(bytes, off);
    ly.v = read_matrix(bytes, off);
    ckpt.net.layers.push_back(std::move(ly));
  }
  ckpt.net.validate();

  ckpt.opt_config.eta = read_le<double>(bytes, off);
  ckpt.opt_config.kind = static_cast<OptimizerKind>(read_le<uint8_t>(bytes, off));
  ckpt.opt_config.beta1 = read_le<double>(bytes, off);
  ckpt.opt_config.beta2 = read_le<double>(bytes, off);
  ckpt.opt_config.eps = read_le<double>(bytes, off);

  ckpt.opt_state.step = read_le<int64_t>(bytes, off);
  const uint32_t n_state = read_le<uint32_t>(bytes, off);
  for (uint32_t i = 0; i < n_state; ++i) {
    ckpt.opt_state.mw.push_back(read_matrix(bytes, off));
    ckpt.opt_state.vw.push_back(read_matrix(bytes, off));
    ckpt.opt_state.mv.push_back(read_matrix(bytes, off));
    ckpt.opt_state.vv.push_back(read_matrix(bytes, off));
  }

  const uint32_t rng_len = read_le<uint32_t>(bytes, off);
  if (off + rng_len > bytes.size())
    throw DataError("checkpoint: truncated RNG state");
  ckpt.rng_state.assign(bytes.begin() + off, bytes.begin() + off + rng_len);
  return ckpt;
}

void save_checkpoint(const Checkpoint& ckpt, const std::string& path) {
  write_file_bytes(path, serialize_checkpoint(ckpt));
}

Checkpoint load_checkpoint(const std::string& path) {
  return deserialize_checkpoint(read_file_bytes(path));
}

uint64_t layer_weights_hash(const LifLayer& layer) {
  uint64_t h = fnv1a64(layer.w.data(), sizeof(double) * layer.w.size());
  h = fnv1a64(layer.v.data(), sizeof(double) * layer.v.size(), h);
  return h;
}

uint64_t net_weights_hash(const NetworkTopology& net) {
  uint64_t h = 0xcbf29ce484222325ull;
  for (const LifLayer& ly : net.layers) {
    h = fnv1a64(ly.w.data(), sizeof(double) * ly.w.size(), h);
    h = fnv1a64(ly.v.data(), sizeof(double) * ly.v.size(), h);
  }
  return h;
}

}  // namespace snncl
