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

#ifndef LEXPARSE_CONFIG_HPP_
#define LEXPARSE_CONFIG_HPP_

// Flat key=value configuration. Lines starting with '#' and blank lines are
// ignored; keys mirror the command-line flag names.

#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "lexparse/disambiguator.hpp"
#include "lexparse/parser.hpp"

namespace lexparse {

using KeyValues = std::vector<std::pair<std::string, std::string>>;

KeyValues parse_key_values(std::string_view text, const std::string& source = "config");
KeyValues load_key_values(const std::string& path);
std::string format_key_values(const KeyValues& items);

std::size_t parse_count(const std::string& key, const std::string& value);
double parse_real(const std::string& key, const std::string& value);
std::uint64_t parse_seed(const std::string& key, const std::string& value);
bool parse_flag(const std::string& key, const std::string& value);

// Each setter returns false for keys it does not know; values that fail to
// parse throw.
KeyValues encoder_config_items(const EncoderConfig& config);
bool set_encoder_config_item(EncoderConfig& config, const std::string& key,
                             const std::string& value);

KeyValues parser_config_items(const ParserConfig& config);
bool set_parser_config_item(ParserConfig& config, const std::string& key,
                            const std::string& value);

KeyValues train_config_items(const TrainConfig& config);
bool set_train_config_item(TrainConfig& config, const std::string& key,
                           const std::string& value);

KeyValues disamb_config_items(const DisambConfig& config);
bool set_disamb_config_item(DisambConfig& config, const std::string& key,
                            const std::string& value);

}  // namespace lexparse

#endif  // LEXPARSE_CONFIG_HPP_
