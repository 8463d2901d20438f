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

#ifndef LEXPARSE_CHART_HPP_
#define LEXPARSE_CHART_HPP_

// CKY decoding over fence-coordinate spans, tree scoring, and the Hamming
// span cost used for loss-augmented decoding. The scorer is abstract so the
// same chart runs on network scores and on injected tables.

#include <cstddef>
#include <functional>
#include <set>
#include <string>
#include <string_view>
#include <tuple>
#include <unordered_map>
#include <vector>

#include "lexparse/treebank.hpp"

namespace lexparse {

// Scorable labels. Id 0 is the dummy label, which always scores 0.
class LabelVocab {
 public:
  static constexpr std::size_t kDummy = 0;

  LabelVocab();

  std::size_t add(const Label& label);
  // -1 when the label was never seen.
  long find(const Label& label) const;
  std::size_t id(const Label& label) const;  // throws when unseen
  const Label& label(std::size_t id) const { return labels_.at(id); }
  std::size_t size() const { return labels_.size(); }

  // Collects every node label of the chart-form trees.
  static LabelVocab from_trees(const std::vector<ParseTree>& chart_trees);
  // Label strings in id order, dummy excluded.
  std::vector<std::string> names() const;
  static LabelVocab from_names(const std::vector<std::string>& names);

 private:
  std::vector<Label> labels_;
  std::unordered_map<std::string, std::size_t> ids_;
};

inline constexpr std::size_t kNoSplit = static_cast<std::size_t>(-1);

class SpanScorer {
 public:
  virtual ~SpanScorer() = default;
  virtual std::size_t num_labels() const = 0;
  // Fills out[0..num_labels) for span (i, j). `split` is the interior fence
  // whose boundary joins the span vector, or kNoSplit. out[0] must be 0.
  virtual void score(std::size_t i, std::size_t j, std::size_t split,
                     std::vector<double>& out) const = 0;
};

// Injected scores indexed by (i, j, label); the split is ignored.
class TableScorer : public SpanScorer {
 public:
  TableScorer(std::size_t num_tokens, std::size_t num_labels);

  std::size_t num_labels() const override { return num_labels_; }
  void score(std::size_t i, std::size_t j, std::size_t split,
             std::vector<double>& out) const override;

  double& at(std::size_t i, std::size_t j, std::size_t label);
  double at(std::size_t i, std::size_t j, std::size_t label) const;
  std::size_t num_tokens() const { return n_; }

 private:
  std::size_t index(std::size_t i, std::size_t j, std::size_t label) const;

  std::size_t n_;
  std::size_t num_labels_;
  std::vector<double> scores_;
};

// Additive cost for a labeled span, applied to non-dummy labels only.
using SpanCost = std::function<double(std::size_t i, std::size_t j, std::size_t label)>;

struct DecodeOptions {
  bool use_split = false;
  // Excludes the dummy label at the root (0, n).
  bool force_root_label = false;
  const SpanCost* cost = nullptr;
};

struct DecodeStats {
  std::size_t spans_scored = 0;
  // Spans scored with a split boundary, and those among them having more
  // than one interior fence to choose from.
  std::size_t split_reps = 0;
  std::size_t multi_split_reps = 0;
};

struct DecodeResult {
  ParseTree tree;  // chart form: binary, collapsed, dummy-labeled cascade nodes
  double score = 0.0;  // includes costs when a cost was supplied
  DecodeStats stats;
};

// Bottom-up CKY. Width-1 spans take their best label. Wider spans pick the
// split k* maximizing s*(i,k)+s*(k,j) first (ties to the lowest fence), then
// score labels once (with the k* boundary when use_split), ties to the lowest
// label id. s*(i,j) = label + (left + right).
DecodeResult cky_decode(const SpanScorer& scorer, const LabelVocab& labels,
                        std::size_t num_tokens, const DecodeOptions& options = {});

// Sum of label scores over the nodes of a chart-form tree, with each internal
// node's split taken from its children. Summation order matches cky_decode.
double tree_score(const SpanScorer& scorer, const LabelVocab& labels,
                  const ParseTree& chart_tree, bool use_split,
                  const SpanCost* cost = nullptr);

// 1 for a non-dummy (i, j, label) absent from the gold tree, else 0.
class HammingCost {
 public:
  HammingCost(const ParseTree& gold_chart_tree, const LabelVocab& labels);

  double operator()(std::size_t i, std::size_t j, std::size_t label) const;
  SpanCost as_function() const;
  // Sum of the cost over a chart-form tree's nodes.
  double distance(const ParseTree& chart_tree) const;

 private:
  std::set<std::tuple<std::size_t, std::size_t, std::size_t>> gold_;
  const LabelVocab* labels_;
};

struct MarginResult {
  double loss = 0.0;
  double gold_score = 0.0;
  double rival_score = 0.0;  // s(T*) without cost
  double rival_cost = 0.0;
  ParseTree rival;
};

// max(0, max_T [s(T) + cost(T)] - s(gold)) with the inner max from a
// loss-augmented decode.
MarginResult margin_value(const SpanScorer& scorer, const LabelVocab& labels,
                          const ParseTree& gold_chart_tree, const DecodeOptions& options);

}  // namespace lexparse

#endif  // LEXPARSE_CHART_HPP_
