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

#include "lexparse/config.hpp"

#include <charconv>

#include "lexparse/checkpoint.hpp"
#include "lexparse/error.hpp"

namespace lexparse {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
    s.remove_suffix(1);
  }
  return s;
}

}  // namespace

KeyValues parse_key_values(std::string_view text, const std::string& source) {
  KeyValues out;
  std::size_t pos = 0, line_no = 0;
  while (pos < text.size()) {
    std::size_t nl = text.find('\n', pos);
    if (nl == std::string_view::npos) nl = text.size();
    std::string_view line = trim(text.substr(pos, nl - pos));
    pos = nl + 1;
    ++line_no;
    if (line.empty() || line.front() == '#') continue;
    std::size_t eq = line.find('=');
    if (eq == std::string_view::npos || trim(line.substr(0, eq)).empty()) {
      throw_error(ErrorCode::kParse,
                  source + ": line " + std::to_string(line_no) + ": expected key=value");
    }
    out.emplace_back(std::string(trim(line.substr(0, eq))),
                     std::string(trim(line.substr(eq + 1))));
  }
  return out;
}

KeyValues load_key_values(const std::string& path) {
  return parse_key_values(read_file(path), path);
}

std::string format_key_values(const KeyValues& items) {
  std::string out;
  for (const auto& [k, v] : items) out += k + "=" + v + "\n";
  return out;
}

std::size_t parse_count(const std::string& key, const std::string& value) {
  std::size_t out = 0;
  auto [p, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
  if (ec != std::errc() || p != value.data() + value.size()) {
    throw_error(ErrorCode::kInvalidArgument,
                key + ": expected a non-negative integer, got '" + value + "'");
  }
  return out;
}

double parse_real(const std::string& key, const std::string& value) {
  try {
    return parse_double(value);
  } catch (const Error&) {
    throw_error(ErrorCode::kInvalidArgument, key + ": expected a number, got '" + value + "'");
  }
}

std::uint64_t parse_seed(const std::string& key, const std::string& value) {
  std::uint64_t out = 0;
  auto [p, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
  if (ec != std::errc() || p != value.data() + value.size()) {
    throw_error(ErrorCode::kInvalidArgument, key + ": expected an unsigned integer");
  }
  return out;
}

bool parse_flag(const std::string& key, const std::string& value) {
  if (value == "1" || value == "true") return true;
  if (value == "0" || value == "false") return false;
  throw_error(ErrorCode::kInvalidArgument, key + ": expected true or false");
}

KeyValues encoder_config_items(const EncoderConfig& c) {
  return {{"d_word", std::to_string(c.d_word)},   {"d_pos", std::to_string(c.d_pos)},
          {"d_slot", std::to_string(c.d_slot)},   {"d_model", std::to_string(c.d_model)},
          {"n_layers", std::to_string(c.n_layers)}, {"n_heads", std::to_string(c.n_heads)},
          {"d_ff", std::to_string(c.d_ff)},       {"max_len", std::to_string(c.max_len)}};
}

bool set_encoder_config_item(EncoderConfig& c, const std::string& key, const std::string& value) {
  std::size_t* field = nullptr;
  if (key == "d_word") field = &c.d_word;
  else if (key == "d_pos") field = &c.d_pos;
  else if (key == "d_slot") field = &c.d_slot;
  else if (key == "d_model") field = &c.d_model;
  else if (key == "n_layers") field = &c.n_layers;
  else if (key == "n_heads") field = &c.n_heads;
  else if (key == "d_ff") field = &c.d_ff;
  else if (key == "max_len") field = &c.max_len;
  if (!field) return false;
  *field = parse_count(key, value);
  return true;
}

KeyValues parser_config_items(const ParserConfig& c) {
  KeyValues out{{"mode", to_string(c.mode)}};
  for (auto& kv : encoder_config_items(c.encoder)) out.push_back(std::move(kv));
  out.emplace_back("d_hidden", std::to_string(c.d_hidden));
  return out;
}

bool set_parser_config_item(ParserConfig& c, const std::string& key, const std::string& value) {
  if (key == "mode") {
    c.mode = parser_mode_from_string(value);
    return true;
  }
  if (key == "d_hidden") {
    c.d_hidden = parse_count(key, value);
    return true;
  }
  return set_encoder_config_item(c.encoder, key, value);
}

KeyValues train_config_items(const TrainConfig& c) {
  return {{"epochs", std::to_string(c.epochs)},
          {"lr", format_double(c.learning_rate)},
          {"batch_size", std::to_string(c.batch_size)},
          {"seed", std::to_string(c.seed)},
          {"eval_every", std::to_string(c.eval_every)},
          {"stop_at_perfect_dev", c.stop_at_perfect_dev ? "true" : "false"},
          {"lexicon_dropout", format_double(c.lexicon_dropout)}};
}

bool set_train_config_item(TrainConfig& c, const std::string& key, const std::string& value) {
  if (key == "epochs") c.epochs = parse_count(key, value);
  else if (key == "lr") c.learning_rate = parse_real(key, value);
  else if (key == "batch_size") c.batch_size = parse_count(key, value);
  else if (key == "seed") c.seed = parse_seed(key, value);
  else if (key == "eval_every") c.eval_every = parse_count(key, value);
  else if (key == "stop_at_perfect_dev") c.stop_at_perfect_dev = parse_flag(key, value);
  else if (key == "lexicon_dropout") c.lexicon_dropout = parse_real(key, value);
  else return false;
  return true;
}

KeyValues disamb_config_items(const DisambConfig& c) {
  KeyValues out = encoder_config_items(c.encoder);
  out.emplace_back("word_dropout", format_double(c.word_dropout));
  out.emplace_back("epochs", std::to_string(c.epochs));
  out.emplace_back("lr", format_double(c.learning_rate));
  out.emplace_back("batch_size", std::to_string(c.batch_size));
  out.emplace_back("seed", std::to_string(c.seed));
  out.emplace_back("threshold", format_double(c.threshold));
  return out;
}

bool set_disamb_config_item(DisambConfig& c, const std::string& key, const std::string& value) {
  if (set_encoder_config_item(c.encoder, key, value)) return true;
  if (key == "word_dropout") c.word_dropout = parse_real(key, value);
  else if (key == "epochs") c.epochs = parse_count(key, value);
  else if (key == "lr") c.learning_rate = parse_real(key, value);
  else if (key == "batch_size") c.batch_size = parse_count(key, value);
  else if (key == "seed") c.seed = parse_seed(key, value);
  else if (key == "threshold") c.threshold = parse_real(key, value);
  else return false;
  return true;
}

}  // namespace lexparse
