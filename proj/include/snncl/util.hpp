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

#ifndef SNNCL_UTIL_HPP
#define SNNCL_UTIL_HPP

#include <cstdint>
#include <cstring>
#include <string>
#include <vector>

namespace snncl {

inline uint64_t fnv1a64(const void* data, size_t len, uint64_t seed = 0xcbf29ce484222325ull) {
  const uint8_t* p = static_cast<const uint8_t*>(data);
  uint64_t h = seed;
  for (size_t i = 0; i < len; ++i) {
    h ^= p[i];
    h *= 0x100000001b3ull;
  }
  return h;
}

// splitmix64 finalizer, used to derive independent per-sample RNG seeds.
inline uint64_t mix64(uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

inline uint64_t mix64(uint64_t a, uint64_t b) { return mix64(a ^ mix64(b)); }

// Little-endian append/read helpers for the binary file formats.
template <typename T>
void append_le(std::vector<uint8_t>& out, T value) {
  static_assert(std::is_trivially_copyable_v<T>);
  uint8_t buf[sizeof(T)];
  std::memcpy(buf, &value, sizeof(T));
  out.insert(out.end(), buf, buf + sizeof(T));
}

template <typename T>
T read_le(const std::vector<uint8_t>& in, size_t& offset) {
  T value;
  std::memcpy(&value, in.data() + offset, sizeof(T));
  offset += sizeof(T);
  return value;
}

std::string to_hex(uint64_t v);

std::vector<uint8_t> read_file_bytes(const std::string& path);
void write_file_bytes(const std::string& path,
                      const std::vector<uint8_t>& bytes);

}  // namespace snncl

#endif  // SNNCL_UTIL_HPP
