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

#ifndef LEXPARSE_VOCAB_HPP_
#define LEXPARSE_VOCAB_HPP_

#include <cstddef>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace lexparse {

// Closed word vocabulary. One token per line in files; the line number is the
// id. Ids 0..2 are reserved for the unknown word and the two sentinels.
class Vocabulary {
 public:
  static constexpr int kUnknown = 0;
  static constexpr int kStart = 1;
  static constexpr int kEnd = 2;

  Vocabulary();

  int add(const std::string& token);
  // kUnknown for anything not in the vocabulary.
  int id(const std::string& token) const;
  bool contains(const std::string& token) const;
  const std::string& token(int id) const { return tokens_.at(static_cast<std::size_t>(id)); }
  std::size_t size() const { return tokens_.size(); }
  const std::vector<std::string>& tokens() const { return tokens_; }

  static Vocabulary from_tokens(const std::vector<std::string>& tokens);
  static Vocabulary parse(std::string_view text);
  std::string to_text() const;

 private:
  std::vector<std::string> tokens_;
  std::unordered_map<std::string, int> ids_;
};

}  // namespace lexparse

#endif  // LEXPARSE_VOCAB_HPP_
