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

#include "lexparse/lexicon.hpp"

#include <algorithm>
#include <cctype>
#include <functional>

#include "lexparse/checkpoint.hpp"
#include "lexparse/error.hpp"

namespace lexparse {

std::string to_lower(std::string_view text) {
  std::string out(text);
  for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

TokenSeq lowercase(const TokenSeq& tokens) {
  TokenSeq out;
  out.reserve(tokens.size());
  for (const auto& t : tokens) out.push_back(to_lower(t));
  return out;
}

namespace {

std::string index_key(const TokenSeq& value) {
  return join_tokens(value, 0, value.size());
}

}  // namespace

std::size_t Lexicon::ensure_category(const std::string& category) {
  auto it = ids_.find(category);
  if (it != ids_.end()) return it->second;
  Label::atom(category);  // validates the prefix
  if (category.substr(0, 3) != "SL:") {
    throw_error(ErrorCode::kInvalidArgument,
                "lexicon categories must be slots, got " + category);
  }
  categories_.push_back(category);
  values_.emplace_back();
  std::size_t id = categories_.size();
  ids_.emplace(category, id);
  return id;
}

bool Lexicon::insert(std::size_t id, TokenSeq value) {
  if (value.empty()) {
    throw_error(ErrorCode::kInvalidArgument, "lexicon values must be non-empty");
  }
  for (const auto& tok : value) {
    if (tok.empty() || tok.find_first_of(" \t\r\n") != std::string::npos) {
      throw_error(ErrorCode::kInvalidArgument, "invalid lexicon token '" + tok + "'");
    }
  }
  value = lowercase(value);
  std::string key = index_key(value);
  std::size_t len = value.size();
  if (!values_[id - 1].insert(std::move(value)).second) return false;
  auto& ids = index_[key];
  ids.insert(std::lower_bound(ids.begin(), ids.end(), id), id);
  max_len_ = std::max(max_len_, len);
  return true;
}

Lexicon Lexicon::build(const Corpus& corpus, LexiconStats* stats) {
  std::map<std::string, std::vector<TokenSeq>> found;
  std::size_t total = 0;
  for (const Example& ex : corpus) {
    std::function<void(const ParseTree&)> walk = [&](const ParseTree& t) {
      if (t.label.kind == LabelKind::kCollapsedChain) {
        throw_error(ErrorCode::kContract, "build_lexicon expects unary-expanded trees");
      }
      if (t.label.kind == LabelKind::kSlot) {
        TokenSeq value(ex.utterance.tokens.begin() + static_cast<std::ptrdiff_t>(t.begin),
                       ex.utterance.tokens.begin() + static_cast<std::ptrdiff_t>(t.end));
        found[t.label.parts[0]].push_back(std::move(value));
        ++total;
      }
      for (const ParseTree& c : t.children) walk(c);
    };
    walk(ex.tree);
  }
  Lexicon lex;
  for (auto& [category, values] : found) {
    std::size_t id = lex.ensure_category(category);
    for (auto& v : values) lex.insert(id, std::move(v));
  }
  if (stats) {
    *stats = lex.stats();
    stats->total_values = total;
  }
  return lex;
}

Lexicon Lexicon::parse_tsv(std::string_view text, const std::string& source) {
  Lexicon lex;
  std::size_t pos = 0, line_no = 0;
  while (pos < text.size()) {
    std::size_t nl = text.find('\n', pos);
    if (nl == std::string_view::npos) nl = text.size();
    std::string_view line = text.substr(pos, nl - pos);
    pos = nl + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty()) continue;
    std::size_t tab = line.find('\t');
    try {
      if (tab == std::string_view::npos) {
        throw_error(ErrorCode::kParse, "expected category<TAB>value");
      }
      std::string category(line.substr(0, tab));
      TokenSeq value = split_tokens(line.substr(tab + 1));
      lex.insert(lex.ensure_category(category), std::move(value));
    } catch (const Error& e) {
      throw_error(ErrorCode::kParse,
                  source + ": line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return lex;
}

Lexicon Lexicon::load(const std::string& path) { return parse_tsv(read_file(path), path); }

std::string Lexicon::to_tsv() const {
  std::string out;
  for (std::size_t id = 1; id <= categories_.size(); ++id) {
    for (const TokenSeq& v : values_[id - 1]) {
      out += categories_[id - 1];
      out += '\t';
      out += index_key(v);
      out += '\n';
    }
  }
  return out;
}

void Lexicon::save(const std::string& path) const { write_file(path, to_tsv()); }

void Lexicon::add_entries(const std::string& category, const std::vector<TokenSeq>& values) {
  auto it = ids_.find(category);
  if (it == ids_.end()) {
    throw_error(ErrorCode::kContract,
                "unknown slot category " + category +
                    ": new categories require retraining; only values of "
                    "existing categories can be added");
  }
  for (const TokenSeq& v : values) insert(it->second, v);
}

bool Lexicon::has_category(std::string_view category) const {
  return ids_.find(category) != ids_.end();
}

std::size_t Lexicon::category_id(std::string_view category) const {
  auto it = ids_.find(category);
  if (it == ids_.end()) {
    throw_error(ErrorCode::kContract, "unknown slot category " + std::string(category));
  }
  return it->second;
}

const std::string& Lexicon::category_name(std::size_t id) const {
  if (id == 0 || id > categories_.size()) {
    throw_error(ErrorCode::kContract, "category id out of range");
  }
  return categories_[id - 1];
}

bool Lexicon::contains(std::string_view category, const TokenSeq& value) const {
  auto it = ids_.find(category);
  if (it == ids_.end()) return false;
  return values_[it->second - 1].count(lowercase(value)) != 0;
}

const std::set<TokenSeq>& Lexicon::values(std::string_view category) const {
  return values_[category_id(category) - 1];
}

const std::vector<std::size_t>* Lexicon::lookup(const std::string& key) const {
  auto it = index_.find(key);
  return it == index_.end() ? nullptr : &it->second;
}

LexiconStats Lexicon::stats() const {
  LexiconStats s;
  s.categories = categories_.size();
  for (const auto& v : values_) s.unique_values += v.size();
  s.total_values = s.unique_values;
  return s;
}

std::vector<MatchOccurrence> match_spans(const Utterance& utterance,
                                         const Lexicon& lexicon, std::size_t max_len) {
  if (max_len == 0) max_len = lexicon.max_value_length();
  std::vector<MatchOccurrence> out;
  const TokenSeq lowered = lowercase(utterance.tokens);
  const std::size_t n = lowered.size();
  for (std::size_t i = 0; i < n; ++i) {
    std::string key;
    for (std::size_t j = i + 1; j <= n && j - i <= max_len; ++j) {
      if (j > i + 1) key += ' ';
      key += lowered[j - 1];
      const auto* ids = lexicon.lookup(key);
      if (!ids) continue;
      for (std::size_t id : *ids) {
        out.push_back({lexicon.category_name(id), id, i, j, Verdict::kPending});
      }
    }
  }
  return out;
}

SlotTags tag_tokens(std::size_t num_tokens, const std::vector<MatchOccurrence>& occurrences,
                    std::size_t num_ids) {
  SlotTags tags;
  tags.num_ids = num_ids;
  tags.indicators.assign(num_tokens, std::vector<double>(num_ids, 0.0));
  tags.in_lexicon.assign(num_tokens, false);
  for (const MatchOccurrence& occ : occurrences) {
    if (occ.verdict == Verdict::kRemoved) continue;
    if (occ.end > num_tokens || occ.category_id == 0 || occ.category_id >= num_ids) {
      throw_error(ErrorCode::kContract, "match occurrence out of range");
    }
    for (std::size_t t = occ.begin; t < occ.end; ++t) {
      tags.indicators[t][occ.category_id] = 1.0;
      tags.in_lexicon[t] = true;
    }
  }
  for (std::size_t t = 0; t < num_tokens; ++t) {
    if (!tags.in_lexicon[t]) tags.indicators[t][Lexicon::kOutOfCategory] = 1.0;
  }
  return tags;
}

}  // namespace lexparse
