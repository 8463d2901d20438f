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

#ifndef LEXPARSE_LEXICON_HPP_
#define LEXPARSE_LEXICON_HPP_

#include <cstddef>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "lexparse/treebank.hpp"

namespace lexparse {

using TokenSeq = std::vector<std::string>;

struct LexiconStats {
  std::size_t categories = 0;
  // Slot nodes seen while building; equals unique_values for a loaded file.
  std::size_t total_values = 0;
  // Distinct (category, value) pairs.
  std::size_t unique_values = 0;
};

// Slot category -> set of lowercased token sequences.
//
// Category ids are 1..C in the order categories were introduced; id 0 is the
// out-of-category tag. Ids never change once assigned, which is what lets a
// trained model consume a lexicon that gained entries after training.
class Lexicon {
 public:
  static constexpr std::size_t kOutOfCategory = 0;

  Lexicon() = default;

  // Every slot-labeled node contributes its covered tokens. Categories are
  // numbered in sorted name order.
  static Lexicon build(const Corpus& corpus, LexiconStats* stats = nullptr);

  // TSV: category<TAB>space-joined value, one entry per line. Categories are
  // numbered in order of first appearance.
  static Lexicon parse_tsv(std::string_view text, const std::string& source = "lexicon");
  static Lexicon load(const std::string& path);
  std::string to_tsv() const;
  void save(const std::string& path) const;

  // Adds values to an existing category. Unknown categories are rejected:
  // a new category would need new trained embeddings.
  void add_entries(const std::string& category, const std::vector<TokenSeq>& values);

  bool has_category(std::string_view category) const;
  // 1-based id; throws for unknown categories.
  std::size_t category_id(std::string_view category) const;
  const std::string& category_name(std::size_t id) const;
  const std::vector<std::string>& categories() const { return categories_; }
  // 1 + number of categories.
  std::size_t num_ids() const { return categories_.size() + 1; }

  bool contains(std::string_view category, const TokenSeq& value) const;
  const std::set<TokenSeq>& values(std::string_view category) const;
  // Category ids whose value set holds this lowercased, space-joined key.
  const std::vector<std::size_t>* lookup(const std::string& key) const;

  std::size_t max_value_length() const { return max_len_; }
  LexiconStats stats() const;

 private:
  std::size_t ensure_category(const std::string& category);
  bool insert(std::size_t id, TokenSeq value);

  std::vector<std::string> categories_;
  std::map<std::string, std::size_t, std::less<>> ids_;
  std::vector<std::set<TokenSeq>> values_;  // indexed by id - 1
  std::unordered_map<std::string, std::vector<std::size_t>> index_;
  std::size_t max_len_ = 0;
};

std::string to_lower(std::string_view text);
TokenSeq lowercase(const TokenSeq& tokens);

enum class Verdict { kPending, kKept, kRemoved };

struct MatchOccurrence {
  std::string category;
  std::size_t category_id = 0;
  std::size_t begin = 0;  // fences
  std::size_t end = 0;
  Verdict verdict = Verdict::kPending;

  friend bool operator==(const MatchOccurrence&, const MatchOccurrence&) = default;
};

// Every span of at most max_len tokens whose lowercased text is a lexicon
// value, once per matching category, ordered by (begin, end, category id).
// max_len == 0 uses the longest value in the lexicon.
std::vector<MatchOccurrence> match_spans(const Utterance& utterance,
                                         const Lexicon& lexicon,
                                         std::size_t max_len = 0);

// Per-token slot tags: one indicator row per token over the lexicon ids.
// A token covered by at least one non-removed occurrence gets a 1 for each
// distinct covering category; any other token gets the out-of-category id.
struct SlotTags {
  std::size_t num_ids = 0;
  std::vector<std::vector<double>> indicators;  // [n][num_ids]
  std::vector<bool> in_lexicon;                 // [n]
};

SlotTags tag_tokens(std::size_t num_tokens, const std::vector<MatchOccurrence>& occurrences,
                    std::size_t num_ids);

}  // namespace lexparse

#endif  // LEXPARSE_LEXICON_HPP_
