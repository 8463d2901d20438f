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

#include "lexparse/chart.hpp"

#include "lexparse/error.hpp"

namespace lexparse {

LabelVocab::LabelVocab() { labels_.push_back(Label::dummy()); }

std::size_t LabelVocab::add(const Label& label) {
  if (label.is_dummy()) return kDummy;
  auto [it, inserted] = ids_.emplace(label.str(), labels_.size());
  if (inserted) labels_.push_back(label);
  return it->second;
}

long LabelVocab::find(const Label& label) const {
  if (label.is_dummy()) return static_cast<long>(kDummy);
  auto it = ids_.find(label.str());
  return it == ids_.end() ? -1 : static_cast<long>(it->second);
}

std::size_t LabelVocab::id(const Label& label) const {
  long found = find(label);
  if (found < 0) {
    throw_error(ErrorCode::kContract, "label " + label.str() + " is not in the label vocabulary");
  }
  return static_cast<std::size_t>(found);
}

LabelVocab LabelVocab::from_trees(const std::vector<ParseTree>& chart_trees) {
  LabelVocab vocab;
  std::function<void(const ParseTree&)> walk = [&](const ParseTree& t) {
    vocab.add(t.label);
    for (const ParseTree& c : t.children) walk(c);
  };
  for (const ParseTree& t : chart_trees) walk(t);
  return vocab;
}

std::vector<std::string> LabelVocab::names() const {
  std::vector<std::string> out;
  for (std::size_t i = 1; i < labels_.size(); ++i) out.push_back(labels_[i].str());
  return out;
}

LabelVocab LabelVocab::from_names(const std::vector<std::string>& names) {
  LabelVocab vocab;
  for (const std::string& n : names) {
    if (vocab.add(Label::from_string(n)) != vocab.size() - 1) {
      throw_error(ErrorCode::kParse, "duplicate label " + n);
    }
  }
  return vocab;
}

TableScorer::TableScorer(std::size_t num_tokens, std::size_t num_labels)
    : n_(num_tokens),
      num_labels_(num_labels),
      scores_((num_tokens + 1) * (num_tokens + 1) * num_labels, 0.0) {
  if (num_labels == 0) throw_error(ErrorCode::kInvalidArgument, "need at least the dummy label");
}

std::size_t TableScorer::index(std::size_t i, std::size_t j, std::size_t label) const {
  if (i >= j || j > n_ || label >= num_labels_) {
    throw_error(ErrorCode::kInvalidArgument, "score table index out of range");
  }
  return (i * (n_ + 1) + j) * num_labels_ + label;
}

double& TableScorer::at(std::size_t i, std::size_t j, std::size_t label) {
  if (label == LabelVocab::kDummy) {
    throw_error(ErrorCode::kContract, "the dummy label score is fixed at 0");
  }
  return scores_[index(i, j, label)];
}

double TableScorer::at(std::size_t i, std::size_t j, std::size_t label) const {
  return scores_[index(i, j, label)];
}

void TableScorer::score(std::size_t i, std::size_t j, std::size_t /*split*/,
                        std::vector<double>& out) const {
  out.assign(scores_.begin() + static_cast<std::ptrdiff_t>(index(i, j, 0)),
             scores_.begin() + static_cast<std::ptrdiff_t>(index(i, j, 0) + num_labels_));
  out[0] = 0.0;
}

namespace {

struct Cell {
  double best = 0.0;
  std::size_t label = 0;
  std::size_t split = kNoSplit;
};

ParseTree backtrace(const std::vector<Cell>& chart, const LabelVocab& labels, std::size_t n,
                    std::size_t i, std::size_t j) {
  const Cell& c = chart[i * (n + 1) + j];
  ParseTree t;
  t.label = labels.label(c.label);
  t.begin = i;
  t.end = j;
  if (j - i > 1) {
    t.children.push_back(backtrace(chart, labels, n, i, c.split));
    t.children.push_back(backtrace(chart, labels, n, c.split, j));
  }
  return t;
}

}  // namespace

DecodeResult cky_decode(const SpanScorer& scorer, const LabelVocab& labels,
                        std::size_t num_tokens, const DecodeOptions& options) {
  const std::size_t n = num_tokens;
  const std::size_t num_labels = scorer.num_labels();
  if (n == 0) throw_error(ErrorCode::kInvalidArgument, "cannot decode an empty utterance");
  if (num_labels != labels.size()) {
    throw_error(ErrorCode::kContract, "scorer and label vocabulary disagree on the label count");
  }
  if (options.force_root_label && num_labels < 2) {
    throw_error(ErrorCode::kContract, "a labeled root needs at least one non-dummy label");
  }
  std::vector<Cell> chart((n + 1) * (n + 1));
  std::vector<double> scores;
  DecodeResult result;
  for (std::size_t width = 1; width <= n; ++width) {
    for (std::size_t i = 0; i + width <= n; ++i) {
      const std::size_t j = i + width;
      Cell& cell = chart[i * (n + 1) + j];
      double children = 0.0;
      std::size_t split = kNoSplit;
      if (width > 1) {
        for (std::size_t k = i + 1; k < j; ++k) {
          double v = chart[i * (n + 1) + k].best + chart[k * (n + 1) + j].best;
          if (split == kNoSplit || v > children) {
            children = v;
            split = k;
          }
        }
      }
      const bool with_split = options.use_split && split != kNoSplit;
      scorer.score(i, j, with_split ? split : kNoSplit, scores);
      ++result.stats.spans_scored;
      if (with_split) {
        ++result.stats.split_reps;
        if (width > 2) ++result.stats.multi_split_reps;
      }
      const bool root = i == 0 && j == n;
      const std::size_t first = root && options.force_root_label ? 1 : 0;
      std::size_t best_label = first;
      double best = 0.0;
      for (std::size_t l = first; l < num_labels; ++l) {
        double s = l == LabelVocab::kDummy ? 0.0 : scores[l];
        if (options.cost && l != LabelVocab::kDummy) s += (*options.cost)(i, j, l);
        if (l == first || s > best) {
          best = s;
          best_label = l;
        }
      }
      cell.label = best_label;
      cell.split = split;
      cell.best = width > 1 ? best + children : best;
    }
  }
  result.score = chart[n].best;
  result.tree = backtrace(chart, labels, n, 0, n);
  return result;
}

namespace {

double score_node(const SpanScorer& scorer, const LabelVocab& labels, const ParseTree& t,
                  bool use_split, const SpanCost* cost, std::vector<double>& buf) {
  const std::size_t label = labels.id(t.label);
  std::size_t split = kNoSplit;
  if (!t.children.empty()) {
    if (t.children.size() != 2 || t.children[0].begin != t.begin ||
        t.children[1].end != t.end || t.children[0].end != t.children[1].begin) {
      throw_error(ErrorCode::kContract, "tree is not in binary chart form");
    }
    split = t.children[0].end;
  } else if (t.width() != 1) {
    throw_error(ErrorCode::kContract, "chart-form leaves must cover one token");
  }
  scorer.score(t.begin, t.end, use_split ? split : kNoSplit, buf);
  double s = label == LabelVocab::kDummy ? 0.0 : buf[label];
  if (cost && label != LabelVocab::kDummy) s += (*cost)(t.begin, t.end, label);
  if (t.children.empty()) return s;
  double left = score_node(scorer, labels, t.children[0], use_split, cost, buf);
  double right = score_node(scorer, labels, t.children[1], use_split, cost, buf);
  return s + (left + right);
}

}  // namespace

double tree_score(const SpanScorer& scorer, const LabelVocab& labels,
                  const ParseTree& chart_tree, bool use_split, const SpanCost* cost) {
  std::vector<double> buf;
  return score_node(scorer, labels, chart_tree, use_split, cost, buf);
}

HammingCost::HammingCost(const ParseTree& gold_chart_tree, const LabelVocab& labels)
    : labels_(&labels) {
  std::function<void(const ParseTree&)> walk = [&](const ParseTree& t) {
    long id = labels.find(t.label);
    // Unseen gold labels cannot be produced, so they never cancel a cost.
    if (id > 0) gold_.emplace(t.begin, t.end, static_cast<std::size_t>(id));
    for (const ParseTree& c : t.children) walk(c);
  };
  walk(gold_chart_tree);
}

double HammingCost::operator()(std::size_t i, std::size_t j, std::size_t label) const {
  if (label == LabelVocab::kDummy) return 0.0;
  return gold_.count({i, j, label}) ? 0.0 : 1.0;
}

SpanCost HammingCost::as_function() const {
  return [this](std::size_t i, std::size_t j, std::size_t l) { return (*this)(i, j, l); };
}

double HammingCost::distance(const ParseTree& chart_tree) const {
  double total = 0.0;
  std::function<void(const ParseTree&)> walk = [&](const ParseTree& t) {
    total += (*this)(t.begin, t.end, labels_->id(t.label));
    for (const ParseTree& c : t.children) walk(c);
  };
  walk(chart_tree);
  return total;
}

MarginResult margin_value(const SpanScorer& scorer, const LabelVocab& labels,
                          const ParseTree& gold_chart_tree, const DecodeOptions& options) {
  HammingCost hamming(gold_chart_tree, labels);
  SpanCost cost = hamming.as_function();
  DecodeOptions augmented = options;
  augmented.cost = &cost;
  DecodeResult rival = cky_decode(scorer, labels, gold_chart_tree.end, augmented);
  MarginResult r;
  r.gold_score = tree_score(scorer, labels, gold_chart_tree, options.use_split);
  r.rival_score = tree_score(scorer, labels, rival.tree, options.use_split);
  r.rival_cost = hamming.distance(rival.tree);
  double excess = rival.score - r.gold_score;
  r.loss = excess > 0.0 ? excess : 0.0;
  r.rival = std::move(rival.tree);
  return r;
}

}  // namespace lexparse
