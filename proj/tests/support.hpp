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

#ifndef LEXPARSE_TESTS_SUPPORT_HPP_
#define LEXPARSE_TESTS_SUPPORT_HPP_

// Shared test helpers: an exhaustive chart oracle written independently of
// the CKY code, random TOP trees, and small fixtures.

#include <algorithm>
#include <cstddef>
#include <functional>
#include <set>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "lexparse/chart.hpp"
#include "lexparse/lexicon.hpp"
#include "lexparse/numcore.hpp"
#include "lexparse/treebank.hpp"

namespace lexparse::testing {

// Unlabeled binary shapes over (i, j): width-1 leaves, two children above.
struct Shape {
  std::size_t begin = 0, end = 0, split = kNoSplit;
  std::vector<Shape> kids;
};

inline std::vector<Shape> all_shapes(std::size_t i, std::size_t j) {
  std::vector<Shape> out;
  if (j - i == 1) {
    out.push_back(Shape{i, j, kNoSplit, {}});
    return out;
  }
  for (std::size_t k = i + 1; k < j; ++k) {
    for (const Shape& l : all_shapes(i, k)) {
      for (const Shape& r : all_shapes(k, j)) out.push_back(Shape{i, j, k, {l, r}});
    }
  }
  return out;
}

// label score for (i, j) given the node's split (kNoSplit for leaves);
// already includes any cost. Only called for non-dummy labels.
using LabelScore = std::function<double(std::size_t i, std::size_t j, std::size_t split,
                                        std::size_t label)>;

struct OracleResult {
  double score = 0.0;
  ParseTree tree;
  std::size_t optimal_trees = 0;  // shapes reaching the best score
};

namespace detail {

struct Labeled {
  double total = 0.0;
  std::vector<std::pair<std::size_t, std::size_t>> key;  // preorder (label, split)
  ParseTree tree;
};

inline Labeled label_shape(const Shape& s, const LabelScore& score, std::size_t num_labels,
                           bool root_labeled, const LabelVocab& labels, bool is_root) {
  // Best label on its own: the node's label never affects any other node.
  std::size_t first = is_root && root_labeled ? 1 : 0;
  std::size_t best_label = first;
  double best = 0.0;
  for (std::size_t l = first; l < num_labels; ++l) {
    double v = l == 0 ? 0.0 : score(s.begin, s.end, s.split, l);
    if (l == first || v > best) {
      best = v;
      best_label = l;
    }
  }
  Labeled out;
  out.tree.label = labels.label(best_label);
  out.tree.begin = s.begin;
  out.tree.end = s.end;
  out.key.emplace_back(best_label, s.split == kNoSplit ? 0 : s.split);
  if (s.kids.empty()) {
    out.total = best;
    return out;
  }
  Labeled l = label_shape(s.kids[0], score, num_labels, root_labeled, labels, false);
  Labeled r = label_shape(s.kids[1], score, num_labels, root_labeled, labels, false);
  out.total = best + (l.total + r.total);
  out.key.insert(out.key.end(), l.key.begin(), l.key.end());
  out.key.insert(out.key.end(), r.key.begin(), r.key.end());
  out.tree.children = {std::move(l.tree), std::move(r.tree)};
  return out;
}

}  // namespace detail

// Maximum over every binary tree of sum(label score). Among optimal trees
// the one with the smallest preorder sequence of (label, split) wins, which
// is what lowest-fence / lowest-label tie breaking produces.
inline OracleResult oracle_decode(const LabelScore& score, const LabelVocab& labels,
                                  std::size_t n, bool root_labeled = false) {
  OracleResult best;
  std::vector<std::pair<std::size_t, std::size_t>> best_key;
  bool have = false;
  for (const Shape& s : all_shapes(0, n)) {
    detail::Labeled t = detail::label_shape(s, score, labels.size(), root_labeled, labels, true);
    if (!have || t.total > best.score || (t.total == best.score && t.key < best_key)) {
      if (!have || t.total > best.score) best.optimal_trees = 0;
      have = true;
      best.score = t.total;
      best_key = t.key;
      best.tree = std::move(t.tree);
    }
    if (t.total == best.score) ++best.optimal_trees;
  }
  return best;
}

// Every labeled binary tree over (0, n); only sensible for tiny n.
inline std::vector<ParseTree> all_labeled_trees(std::size_t i, std::size_t j,
                                                const LabelVocab& labels) {
  std::vector<ParseTree> out;
  for (std::size_t l = 0; l < labels.size(); ++l) {
    if (j - i == 1) {
      ParseTree t;
      t.label = labels.label(l);
      t.begin = i;
      t.end = j;
      out.push_back(t);
      continue;
    }
    for (std::size_t k = i + 1; k < j; ++k) {
      auto left = all_labeled_trees(i, k, labels);
      auto right = all_labeled_trees(k, j, labels);
      for (const auto& a : left) {
        for (const auto& b : right) {
          ParseTree t;
          t.label = labels.label(l);
          t.begin = i;
          t.end = j;
          t.children = {a, b};
          out.push_back(std::move(t));
        }
      }
    }
  }
  return out;
}

// Random binary chart tree; the root is labeled when `root_labeled`.
inline ParseTree random_chart_tree(Rng& rng, std::size_t i, std::size_t j,
                                   const LabelVocab& labels, bool root_labeled) {
  ParseTree t;
  t.begin = i;
  t.end = j;
  std::size_t lo = root_labeled ? 1 : 0;
  t.label = labels.label(lo + rng.below(labels.size() - lo));
  if (j - i > 1) {
    std::size_t k = i + 1 + rng.below(j - i - 1);
    t.children.push_back(random_chart_tree(rng, i, k, labels, false));
    t.children.push_back(random_chart_tree(rng, k, j, labels, false));
  }
  return t;
}

// Plain recursive sum, label + (left + right).
inline double sum_tree(const ParseTree& t, const LabelScore& score, const LabelVocab& labels) {
  std::size_t l = labels.id(t.label);
  std::size_t split = t.children.empty() ? kNoSplit : t.children[0].end;
  double own = l == 0 ? 0.0 : score(t.begin, t.end, split, l);
  if (t.children.empty()) return own;
  return own + (sum_tree(t.children[0], score, labels) + sum_tree(t.children[1], score, labels));
}

inline LabelVocab numbered_labels(std::size_t count) {
  std::vector<std::string> names;
  for (std::size_t l = 0; l < count; ++l) names.push_back("IN:L" + std::to_string(l + 1));
  return LabelVocab::from_names(names);
}

// Multiples of 1/1024 in [-8, 8): sums of a few dozen are exact in double.
inline double dyadic(Rng& rng) {
  return static_cast<double>(static_cast<long>(rng.below(16384)) - 8192) / 1024.0;
}

// Random bracketed TOP text with nesting, unary chains and bare tokens.
inline std::string random_top(Rng& rng, int depth = 0) {
  static const char* kIntents[] = {"IN:GET_A", "IN:GET_B", "IN:FIND_C"};
  static const char* kSlots[] = {"SL:X", "SL:Y", "SL:Z_W"};
  static const char* kWords[] = {"go", "to", "the", "mall", "dad", "'s", "now", "x-1"};
  const bool intent = depth % 2 == 0;
  std::string out = "[";
  out += intent ? kIntents[rng.below(3)] : kSlots[rng.below(3)];
  const std::size_t items = 1 + rng.below(depth >= 3 ? 2 : 4);
  for (std::size_t k = 0; k < items; ++k) {
    const bool nest = depth < 4 && rng.uniform() < 0.4;
    if (nest) {
      out += " " + random_top(rng, depth + 1);
    } else {
      out += " ";
      out += kWords[rng.below(8)];
    }
  }
  out += " ]";
  return out;
}

// Traffic-to-home utterance with nested slots; the worked disambiguation example.
inline const char* kTrafficTree =
    "[IN:GET_INFO_TRAFFIC How is traffic heading to [SL:DESTINATION [IN:GET_LOCATION_HOME "
    "[SL:TYPE_RELATION Dad ] 's house ] ] ]";

inline const char* kTrafficLexicon =
    "SL:DESTINATION\tdad 's house\n"
    "SL:DESTINATION\thouse\n"
    "SL:TYPE_RELATION\tdad\n"
    "SL:CONTACT\tdad\n"
    "SL:SEARCH_RADIUS\tto\n";

// Labeled-bracket fixtures worked out by hand: (predicted, gold) lines and
// the expected micro-averaged counts and scores.
struct BracketFixture {
  std::vector<std::pair<std::string, std::string>> pairs;
  std::size_t gold = 0, predicted = 0, matched = 0;
  double precision = 0.0, recall = 0.0, f1 = 0.0;
};

inline std::vector<BracketFixture> bracket_fixtures() {
  return {
      // Slot boundary off by one token.
      {{{"[IN:A x y [SL:B z ] ]", "[IN:A x [SL:B y z ] ]"}}, 2, 2, 1, 0.5, 0.5, 0.5},
      // One slot missed.
      {{{"[IN:A [SL:B x ] y z ]", "[IN:A [SL:B x ] [SL:C y ] z ]"}},
       3, 2, 2, 1.0, 2.0 / 3.0, 0.8},
      // Wrong intent, spurious slots.
      {{{"[IN:D [SL:B x ] [SL:C y ] ]", "[IN:A x y ]"}}, 1, 3, 0, 0.0, 0.0, 0.0},
      // Unary chain with the wrong slot on top.
      {{{"[IN:A go [SL:E [IN:C x ] ] ]", "[IN:A go [SL:B [IN:C x ] ] ]"}},
       3, 3, 2, 2.0 / 3.0, 2.0 / 3.0, 2.0 / 3.0},
      // Micro average over two lines of different sizes.
      {{{"[IN:A [SL:B x ] y z ]", "[IN:A [SL:B x ] [SL:C y ] z ]"},
        {"[IN:D [SL:B x ] [SL:C y ] ]", "[IN:A x y ]"}},
       4, 5, 2, 0.4, 0.5, 4.0 / 9.0},
  };
}

}  // namespace lexparse::testing

#endif  // LEXPARSE_TESTS_SUPPORT_HPP_
