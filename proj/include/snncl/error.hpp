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

#ifndef SNNCL_ERROR_HPP
#define SNNCL_ERROR_HPP

#include <stdexcept>
#include <string>

namespace snncl {

// Error categories map onto CLI exit codes: config -> 2, data -> 3,
// numeric -> 4.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Violated precondition or invariant (bad dimensions, out-of-range index,
// inconsistent configuration).
class ContractError : public Error {
 public:
  explicit ContractError(const std::string& msg) : Error(msg) {}
};

// Malformed or corrupt external data (files, payloads).
class DataError : public Error {
 public:
  explicit DataError(const std::string& msg) : Error(msg) {}
};

// Non-finite values where finite ones are required.
class NumericError : public Error {
 public:
  explicit NumericError(const std::string& msg) : Error(msg) {}
};

// Unknown codec id or undecodable latent payload.
class CodecError : public Error {
 public:
  explicit CodecError(const std::string& msg) : Error(msg) {}
};

#define SNNCL_CHECK(cond, msg)                 \
  do {                                         \
    if (!(cond)) throw ::snncl::ContractError(msg); \
  } while (0)

}  // namespace snncl

#endif  // SNNCL_ERROR_HPP
