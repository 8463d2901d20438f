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

#ifndef LEXPARSE_METRICS_HPP_
#define LEXPARSE_METRICS_HPP_

#include <cstddef>
#include <string>
#include <vector>

#include "lexparse/treebank.hpp"

namespace lexparse {

struct BracketScore {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  std::size_t gold_spans = 0;
  std::size_t predicted_spans = 0;
  std::size_t matched_spans = 0;
};

struct EvalReport {
  std::size_t utterances = 0;
  double exact_match = 0.0;
  BracketScore brackets;
  // 0-based indices of lines whose trees differ.
  std::vector<std::size_t> failures;
};

// Trees are normalized (chains expanded, binarization undone) before any
// comparison, so original and chart forms score the same.
ParseTree normalize_tree(const ParseTree& tree);

double exact_match(const std::vector<ParseTree>& predicted, const std::vector<ParseTree>& gold);

// Micro-averaged labeled-bracket scores; the root span counts.
BracketScore labeled_f1(const std::vector<ParseTree>& predicted,
                        const std::vector<ParseTree>& gold);

double disamb_accuracy(const std::vector<bool>& predicted, const std::vector<bool>& labels);

EvalReport evaluate(const std::vector<ParseTree>& predicted, const std::vector<ParseTree>& gold);
EvalReport evaluate(const Corpus& predicted, const Corpus& gold);

// Aligned human-readable table.
std::string format_report(const EvalReport& report);
// key=value lines.
std::string format_report_kv(const EvalReport& report);

}  // namespace lexparse

#endif  // LEXPARSE_METRICS_HPP_
