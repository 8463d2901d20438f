// Copyright 2026 The Lexparse Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef LEXPARSE_CHECKPOINT_HPP_
#define LEXPARSE_CHECKPOINT_HPP_

#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "lexparse/numcore.hpp"

namespace lexparse {

// Text checkpoint:
//
//   lexparse-checkpoint 1
//   seed <n>
//   meta <key> <value...>          (zero or more, order preserved)
//   tensor <name> <rank> <dims...>
//   <values, space separated, shortest round-trip decimal>
//   end
//
// Doubles are written with std::to_chars, so save/load is bit-exact.
struct Checkpoint {
  std::uint64_t seed = 0;
  std::vector<std::pair<std::string, std::string>> meta;
  ParamStore params;

  // All values recorded under `key`, in file order.
  std::vector<std::string> meta_values(std::string_view key) const;
  // The single value for `key`; throws if absent.
  const std::string& meta_value(std::string_view key) const;
};

inline constexpr std::string_view kCheckpointMagic = "lexparse-checkpoint";
inline constexpr int kCheckpointVersion = 1;

std::string format_double(double value);
double parse_double(std::string_view text);

std::string serialize_checkpoint(const Checkpoint& ckpt);
Checkpoint deserialize_checkpoint(std::string_view text);

void save_checkpoint(const std::string& path, const Checkpoint& ckpt);
Checkpoint load_checkpoint(const std::string& path);

// FNV-1a over the file bytes.
std::uint64_t file_hash(const std::string& path);

std::string read_file(const std::string& path);
void write_file(const std::string& path, std::string_view contents);

}  // namespace lexparse

#endif  // LEXPARSE_CHECKPOINT_HPP_
