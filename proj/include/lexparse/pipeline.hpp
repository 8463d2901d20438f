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

#ifndef LEXPARSE_PIPELINE_HPP_
#define LEXPARSE_PIPELINE_HPP_

// Glue between lexicon matching, occurrence filtering and the parser.

#include <string>
#include <vector>

#include "lexparse/disambiguator.hpp"
#include "lexparse/lexicon.hpp"
#include "lexparse/metrics.hpp"
#include "lexparse/parser.hpp"

namespace lexparse {

enum class FilterKind {
  kNone,    // every match is used
  kModel,   // disambiguator verdicts
  kOracle,  // gold slot spans only; needs gold trees
};

std::string to_string(FilterKind kind);
FilterKind filter_kind_from_string(const std::string& text);

struct FilterSetup {
  FilterKind kind = FilterKind::kNone;
  const Disambiguator* disambiguator = nullptr;  // required for kModel
  double threshold = 0.5;
};

// Matches and filters one utterance. `gold` is required for the oracle.
std::vector<MatchOccurrence> prepare_occurrences(const Utterance& utterance,
                                                 const Lexicon& lexicon,
                                                 const FilterSetup& filter,
                                                 const ParseTree* gold = nullptr);

// One filtered occurrence list per line, using the corpus trees as gold.
OccurrenceTable prepare_occurrences(const Corpus& corpus, const Lexicon& lexicon,
                                    const FilterSetup& filter);

// Parses every utterance. `lexicon` is required for the lexicon modes and
// ignored otherwise; the oracle filter reads the trees of `input`.
Corpus parse_corpus(const ParserModel& model, const Corpus& input, const Lexicon* lexicon,
                    const FilterSetup& filter);

EvalReport evaluate_parser(const ParserModel& model, const Corpus& gold, const Lexicon* lexicon,
                           const FilterSetup& filter);

// Reads either bracketed trees or plain whitespace-tokenized utterances, one
// per line. Plain lines get an empty tree (begin == end == 0).
Corpus read_parse_input(std::string_view text, const std::string& source = "input");

}  // namespace lexparse

#endif  // LEXPARSE_PIPELINE_HPP_
