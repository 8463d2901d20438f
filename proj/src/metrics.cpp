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

#include "lexparse/metrics.hpp"

#include <algorithm>
#include <cstdio>
#include <iterator>

#include "lexparse/checkpoint.hpp"
#include "lexparse/error.hpp"

namespace lexparse {

namespace {

bool has_structure_markers(const ParseTree& t) {
  if (t.label.kind == LabelKind::kCollapsedChain) return true;
  if (t.label.is_dummy() && !t.children.empty()) return true;
  for (const ParseTree& c : t.children) {
    if (has_structure_markers(c)) return true;
  }
  return false;
}

void check_aligned(std::size_t a, std::size_t b) {
  if (a != b) {
    throw_error(ErrorCode::kInvalidArgument, "prediction and gold lists differ in length (" +
                                                 std::to_string(a) + " vs " +
                                                 std::to_string(b) + ")");
  }
}

// Shortest round-trip form, always with a decimal point ("1.0", "0.75").
std::string fraction_text(double v) {
  std::string s = format_double(v);
  if (s.find_first_of(".eE") == std::string::npos) s += ".0";
  return s;
}

double ratio(std::size_t num, std::size_t den) {
  return den == 0 ? 0.0 : static_cast<double>(num) / static_cast<double>(den);
}

}  // namespace

ParseTree normalize_tree(const ParseTree& tree) {
  if (!has_structure_markers(tree)) return tree;
  return expand_unary(debinarize(tree));
}

double exact_match(const std::vector<ParseTree>& predicted, const std::vector<ParseTree>& gold) {
  check_aligned(predicted.size(), gold.size());
  std::size_t hits = 0;
  for (std::size_t i = 0; i < gold.size(); ++i) {
    hits += normalize_tree(predicted[i]) == normalize_tree(gold[i]) ? 1 : 0;
  }
  return ratio(hits, gold.size());
}

BracketScore labeled_f1(const std::vector<ParseTree>& predicted,
                        const std::vector<ParseTree>& gold) {
  check_aligned(predicted.size(), gold.size());
  BracketScore s;
  for (std::size_t i = 0; i < gold.size(); ++i) {
    std::vector<LabeledSpan> p = labeled_spans(normalize_tree(predicted[i]));
    std::vector<LabeledSpan> g = labeled_spans(normalize_tree(gold[i]));
    std::vector<LabeledSpan> both;
    std::set_intersection(p.begin(), p.end(), g.begin(), g.end(), std::back_inserter(both));
    s.predicted_spans += p.size();
    s.gold_spans += g.size();
    s.matched_spans += both.size();
  }
  s.precision = ratio(s.matched_spans, s.predicted_spans);
  s.recall = ratio(s.matched_spans, s.gold_spans);
  s.f1 = s.precision + s.recall > 0.0
             ? 2.0 * s.precision * s.recall / (s.precision + s.recall)
             : 0.0;
  return s;
}

double disamb_accuracy(const std::vector<bool>& predicted, const std::vector<bool>& labels) {
  check_aligned(predicted.size(), labels.size());
  std::size_t hits = 0;
  for (std::size_t i = 0; i < labels.size(); ++i) hits += predicted[i] == labels[i] ? 1 : 0;
  return ratio(hits, labels.size());
}

EvalReport evaluate(const std::vector<ParseTree>& predicted, const std::vector<ParseTree>& gold) {
  check_aligned(predicted.size(), gold.size());
  EvalReport r;
  r.utterances = gold.size();
  std::size_t hits = 0;
  for (std::size_t i = 0; i < gold.size(); ++i) {
    if (normalize_tree(predicted[i]) == normalize_tree(gold[i])) {
      ++hits;
    } else {
      r.failures.push_back(i);
    }
  }
  r.exact_match = ratio(hits, gold.size());
  r.brackets = labeled_f1(predicted, gold);
  return r;
}

EvalReport evaluate(const Corpus& predicted, const Corpus& gold) {
  check_aligned(predicted.size(), gold.size());
  std::vector<ParseTree> p, g;
  for (std::size_t i = 0; i < gold.size(); ++i) {
    if (predicted[i].utterance.tokens != gold[i].utterance.tokens) {
      throw_error(ErrorCode::kInvalidArgument,
                  "line " + std::to_string(i + 1) + ": prediction tokens differ from gold");
    }
    p.push_back(predicted[i].tree);
    g.push_back(gold[i].tree);
  }
  return evaluate(p, g);
}

std::string format_report(const EvalReport& r) {
  char buf[512];
  std::snprintf(buf, sizeof buf,
                "utterances    %8zu\n"
                "exact match   %8.4f\n"
                "precision     %8.4f\n"
                "recall        %8.4f\n"
                "f1            %8.4f\n"
                "gold spans    %8zu\n"
                "pred spans    %8zu\n"
                "matched spans %8zu\n"
                "failures      %8zu\n",
                r.utterances, r.exact_match, r.brackets.precision, r.brackets.recall,
                r.brackets.f1, r.brackets.gold_spans, r.brackets.predicted_spans,
                r.brackets.matched_spans, r.failures.size());
  return buf;
}

std::string format_report_kv(const EvalReport& r) {
  std::string out;
  out += "utterances=" + std::to_string(r.utterances) + "\n";
  out += "exact_match=" + fraction_text(r.exact_match) + "\n";
  out += "precision=" + fraction_text(r.brackets.precision) + "\n";
  out += "recall=" + fraction_text(r.brackets.recall) + "\n";
  out += "f1=" + fraction_text(r.brackets.f1) + "\n";
  out += "gold_spans=" + std::to_string(r.brackets.gold_spans) + "\n";
  out += "predicted_spans=" + std::to_string(r.brackets.predicted_spans) + "\n";
  out += "matched_spans=" + std::to_string(r.brackets.matched_spans) + "\n";
  out += "failures=";
  for (std::size_t i = 0; i < r.failures.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(r.failures[i] + 1);
  }
  out += "\n";
  return out;
}

}  // namespace lexparse
