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

#include "lexparse/checkpoint.hpp"

#include <charconv>
#include <fstream>
#include <iterator>
#include <sstream>

#include "lexparse/error.hpp"

namespace lexparse {

std::vector<std::string> Checkpoint::meta_values(std::string_view key) const {
  std::vector<std::string> out;
  for (const auto& [k, v] : meta) {
    if (k == key) out.push_back(v);
  }
  return out;
}

const std::string& Checkpoint::meta_value(std::string_view key) const {
  for (const auto& [k, v] : meta) {
    if (k == key) return v;
  }
  throw_error(ErrorCode::kParse,
              "checkpoint is missing meta entry '" + std::string(key) + "'");
}

std::string format_double(double value) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, res.ptr);
}

double parse_double(std::string_view text) {
  double value = 0.0;
  auto res = std::from_chars(text.data(), text.data() + text.size(), value);
  if (res.ec != std::errc() || res.ptr != text.data() + text.size()) {
    throw_error(ErrorCode::kParse, "malformed number '" + std::string(text) + "'");
  }
  return value;
}

std::string serialize_checkpoint(const Checkpoint& ckpt) {
  std::string out;
  out += std::string(kCheckpointMagic) + " " + std::to_string(kCheckpointVersion) + "\n";
  out += "seed " + std::to_string(ckpt.seed) + "\n";
  for (const auto& [k, v] : ckpt.meta) {
    if (k.find_first_of(" \t\n") != std::string::npos ||
        v.find('\n') != std::string::npos) {
      throw_error(ErrorCode::kInvalidArgument, "meta entry contains a separator: " + k);
    }
    out += "meta " + k + " " + v + "\n";
  }
  for (const auto& [name, t] : ckpt.params.tensors()) {
    out += "tensor " + name + " " + std::to_string(t.shape.size());
    for (std::size_t d : t.shape) out += " " + std::to_string(d);
    out += "\n";
    for (std::size_t i = 0; i < t.size(); ++i) {
      if (i) out += ' ';
      out += format_double(t.data[i]);
    }
    out += "\n";
  }
  out += "end\n";
  return out;
}

namespace {

std::vector<std::string_view> split_ws(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && line[i] == ' ') ++i;
    std::size_t j = i;
    while (j < line.size() && line[j] != ' ') ++j;
    if (j > i) out.push_back(line.substr(i, j - i));
    i = j;
  }
  return out;
}

std::uint64_t parse_u64(std::string_view s) {
  std::uint64_t v = 0;
  auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size()) {
    throw_error(ErrorCode::kParse, "malformed integer '" + std::string(s) + "'");
  }
  return v;
}

}  // namespace

Checkpoint deserialize_checkpoint(std::string_view text) {
  std::vector<std::string_view> lines;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t nl = text.find('\n', pos);
    if (nl == std::string_view::npos) nl = text.size();
    lines.push_back(text.substr(pos, nl - pos));
    pos = nl + 1;
  }
  std::size_t li = 0;
  auto next = [&]() -> std::string_view {
    if (li >= lines.size()) throw_error(ErrorCode::kParse, "truncated checkpoint");
    return lines[li++];
  };
  auto header = split_ws(next());
  if (header.size() != 2 || header[0] != kCheckpointMagic) {
    throw_error(ErrorCode::kParse, "not a lexparse checkpoint");
  }
  if (parse_u64(header[1]) != static_cast<std::uint64_t>(kCheckpointVersion)) {
    throw_error(ErrorCode::kParse, "unsupported checkpoint version " + std::string(header[1]));
  }
  auto seed_line = split_ws(next());
  if (seed_line.size() != 2 || seed_line[0] != "seed") {
    throw_error(ErrorCode::kParse, "checkpoint seed line missing");
  }
  Checkpoint ckpt;
  ckpt.seed = parse_u64(seed_line[1]);
  ckpt.params = ParamStore(ckpt.seed);
  while (true) {
    std::string_view line = next();
    if (line == "end") break;
    if (line.substr(0, 5) == "meta ") {
      std::string_view rest = line.substr(5);
      std::size_t sp = rest.find(' ');
      if (sp == std::string_view::npos) {
        ckpt.meta.emplace_back(std::string(rest), "");
      } else {
        ckpt.meta.emplace_back(std::string(rest.substr(0, sp)),
                               std::string(rest.substr(sp + 1)));
      }
      continue;
    }
    auto fields = split_ws(line);
    if (fields.size() < 3 || fields[0] != "tensor") {
      throw_error(ErrorCode::kParse, "unexpected checkpoint line " + std::to_string(li));
    }
    std::size_t rank = parse_u64(fields[2]);
    if (fields.size() != 3 + rank) {
      throw_error(ErrorCode::kParse, "bad tensor header at line " + std::to_string(li));
    }
    Shape shape;
    for (std::size_t d = 0; d < rank; ++d) shape.push_back(parse_u64(fields[3 + d]));
    auto values = split_ws(next());
    std::vector<double> data;
    data.reserve(values.size());
    for (auto v : values) data.push_back(parse_double(v));
    if (data.size() != shape_size(shape)) {
      throw_error(ErrorCode::kParse, "tensor " + std::string(fields[1]) +
                                         " has the wrong number of values");
    }
    ckpt.params.insert(std::string(fields[1]), Tensor(shape, std::move(data)));
  }
  return ckpt;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw_error(ErrorCode::kIo, "cannot open " + path);
  return std::string(std::istreambuf_iterator<char>(in), {});
}

void write_file(const std::string& path, std::string_view contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw_error(ErrorCode::kIo, "cannot write " + path);
  out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
  if (!out) throw_error(ErrorCode::kIo, "write failed for " + path);
}

void save_checkpoint(const std::string& path, const Checkpoint& ckpt) {
  write_file(path, serialize_checkpoint(ckpt));
}

Checkpoint load_checkpoint(const std::string& path) {
  return deserialize_checkpoint(read_file(path));
}

std::uint64_t file_hash(const std::string& path) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : read_file(path)) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

}  // namespace lexparse
