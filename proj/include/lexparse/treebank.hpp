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

#ifndef LEXPARSE_TREEBANK_HPP_
#define LEXPARSE_TREEBANK_HPP_

// TOP trees: bracketed I/O, unary-chain collapsing, right-branching
// binarization with a dummy label, and labeled-span extraction.
//
// Spans use fence coordinates: (i, j) covers tokens i+1..j (1-indexed), so
// 0 <= i < j <= n. A parent (i, j) split at fence k has children (i, k) and
// (k, j); in token terms the left child ends at token k and the right child
// starts at token k+1.

#include <cstddef>
#include <compare>
#include <string>
#include <string_view>
#include <vector>

namespace lexparse {

enum class LabelKind { kIntent, kSlot, kCollapsedChain, kDummy };

struct Label {
  LabelKind kind = LabelKind::kDummy;
  // Raw strings such as "IN:GET_LOCATION"; one per chain level, top-down.
  std::vector<std::string> parts;

  static Label dummy() { return Label{}; }
  // "IN:..." or "SL:..."; throws on anything else.
  static Label atom(std::string_view raw);
  // Two or more atoms listed top-down; a single part yields an atom.
  static Label chain(std::vector<std::string> parts);
  // Inverse of str(): "A+B" becomes a chain, "A" an atom.
  static Label from_string(std::string_view text);

  bool is_dummy() const { return kind == LabelKind::kDummy; }
  // Chain parts joined with '+'; the dummy label prints as "<dummy>".
  std::string str() const;

  friend bool operator==(const Label&, const Label&) = default;
};

inline constexpr char kChainSeparator = '+';

struct ParseTree {
  Label label;
  std::size_t begin = 0;
  std::size_t end = 0;
  std::vector<ParseTree> children;

  // A bare token: dummy-labeled width-1 leaf.
  bool is_token() const { return label.is_dummy() && children.empty(); }
  std::size_t width() const { return end - begin; }

  friend bool operator==(const ParseTree&, const ParseTree&) = default;
};

struct Utterance {
  std::vector<std::string> tokens;
  std::string raw;

  std::size_t size() const { return tokens.size(); }
};

// One annotated corpus line.
struct Example {
  Utterance utterance;
  ParseTree tree;
};

using Corpus = std::vector<Example>;

struct LabeledSpan {
  std::size_t begin = 0;
  std::size_t end = 0;
  std::string label;

  friend auto operator<=>(const LabeledSpan&, const LabeledSpan&) = default;
};

Example parse_top(std::string_view text);
std::string serialize_top(const ParseTree& tree, const Utterance& utterance);

ParseTree collapse_unary(const ParseTree& tree);
ParseTree expand_unary(const ParseTree& tree);
ParseTree binarize(const ParseTree& tree);
ParseTree debinarize(const ParseTree& tree);

// collapse_unary then binarize: the form the chart parser scores.
ParseTree to_chart_form(const ParseTree& tree);
// Inverse of to_chart_form.
ParseTree from_chart_form(const ParseTree& tree);

// Sorted multiset of non-dummy spans with chains flattened to one span per
// part.
std::vector<LabeledSpan> labeled_spans(const ParseTree& tree);

// Throws if child spans do not partition their parent, or the root does not
// cover (0, n).
void validate_tree(const ParseTree& tree, std::size_t num_tokens);
void validate_utterance(const Utterance& utterance);

// Recomputes every span from the token leaves, left to right. Used after
// edits that change the number of tokens.
void reindex_spans(ParseTree& tree);

// Lines are either a bracketed tree or a TSV row whose last column is the
// tree. Errors name the 1-based line number. Blank lines are skipped.
Corpus read_corpus(std::string_view text, const std::string& source = "corpus");
Corpus load_corpus(const std::string& path);
std::string write_corpus(const Corpus& corpus);
void save_corpus(const std::string& path, const Corpus& corpus);

std::string join_tokens(const std::vector<std::string>& tokens,
                        std::size_t begin, std::size_t end);
std::vector<std::string> split_tokens(std::string_view text);

}  // namespace lexparse

#endif  // LEXPARSE_TREEBANK_HPP_
