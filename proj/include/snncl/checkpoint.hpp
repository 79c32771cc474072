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

#ifndef SNNCL_CHECKPOINT_HPP
#define SNNCL_CHECKPOINT_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "snncl/network.hpp"
#include "snncl/optimizer.hpp"

namespace snncl {

// Versioned binary record of topology, weights, LIF parameters, optimizer
// state, and RNG state. Little-endian, byte-stable across runs on the same
// platform. Magic "SNC1".
struct Checkpoint {
  NetworkTopology net;
  OptimizerConfig opt_config;
  OptimizerState opt_state;
  std::string rng_state;  // serialized mt19937_64 stream state
};

std::vector<uint8_t> serialize_checkpoint(const Checkpoint& ckpt);
Checkpoint deserialize_checkpoint(const std::vector<uint8_t>& bytes);

void save_checkpoint(const Checkpoint& ckpt, const std::string& path);
Checkpoint load_checkpoint(const std::string& path);

// Content hashes over raw weight bytes, used by the frozen-layer contracts.
uint64_t layer_weights_hash(const LifLayer& layer);
uint64_t net_weights_hash(const NetworkTopology& net);

}  // namespace snncl

#endif  // SNNCL_CHECKPOINT_HPP
