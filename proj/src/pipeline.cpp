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

#include "lexparse/pipeline.hpp"

#include "lexparse/error.hpp"

namespace lexparse {

std::string to_string(FilterKind kind) {
  switch (kind) {
    case FilterKind::kNone:
      return "none";
    case FilterKind::kModel:
      return "model";
    case FilterKind::kOracle:
      return "oracle";
  }
  return "none";
}

FilterKind filter_kind_from_string(const std::string& text) {
  if (text == "none") return FilterKind::kNone;
  if (text == "model") return FilterKind::kModel;
  if (text == "oracle") return FilterKind::kOracle;
  throw_error(ErrorCode::kInvalidArgument,
              "unknown filter '" + text + "' (expected none, model or oracle)");
}

std::vector<MatchOccurrence> prepare_occurrences(const Utterance& utterance,
                                                 const Lexicon& lexicon,
                                                 const FilterSetup& filter,
                                                 const ParseTree* gold) {
  std::vector<MatchOccurrence> occs = match_spans(utterance, lexicon);
  switch (filter.kind) {
    case FilterKind::kNone:
      return occs;
    case FilterKind::kModel:
      if (!filter.disambiguator) {
        throw_error(ErrorCode::kInvalidArgument, "the model filter needs a disambiguator");
      }
      return filter.disambiguator->filter(utterance, occs, filter.threshold);
    case FilterKind::kOracle:
      if (!gold || gold->end == 0) {
        throw_error(ErrorCode::kInvalidArgument, "the oracle filter needs gold trees");
      }
      return oracle_filter(occs, *gold);
  }
  return occs;
}

OccurrenceTable prepare_occurrences(const Corpus& corpus, const Lexicon& lexicon,
                                    const FilterSetup& filter) {
  OccurrenceTable table;
  table.reserve(corpus.size());
  for (const Example& ex : corpus) {
    table.push_back(prepare_occurrences(ex.utterance, lexicon, filter, &ex.tree));
  }
  return table;
}

Corpus parse_corpus(const ParserModel& model, const Corpus& input, const Lexicon* lexicon,
                    const FilterSetup& filter) {
  const bool lex = model.config().uses_lexicon();
  if (lex) {
    if (!lexicon) throw_error(ErrorCode::kInvalidArgument, "this parser needs a lexicon");
    model.check_lexicon(*lexicon);
  }
  Corpus out;
  out.reserve(input.size());
  const std::vector<MatchOccurrence> none;
  for (const Example& ex : input) {
    Example parsed;
    parsed.utterance = ex.utterance;
    if (lex) {
      parsed.tree = model.parse(ex.utterance,
                                prepare_occurrences(ex.utterance, *lexicon, filter, &ex.tree));
    } else {
      parsed.tree = model.parse(ex.utterance, none);
    }
    out.push_back(std::move(parsed));
  }
  return out;
}

EvalReport evaluate_parser(const ParserModel& model, const Corpus& gold, const Lexicon* lexicon,
                           const FilterSetup& filter) {
  return evaluate(parse_corpus(model, gold, lexicon, filter), gold);
}

Corpus read_parse_input(std::string_view text, const std::string& source) {
  Corpus out;
  std::size_t pos = 0, line_no = 0;
  while (pos < text.size()) {
    std::size_t nl = text.find('\n', pos);
    if (nl == std::string_view::npos) nl = text.size();
    std::string_view line = text.substr(pos, nl - pos);
    pos = nl + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.find_first_not_of(" \t") == std::string_view::npos) continue;
    std::size_t tab = line.rfind('\t');
    std::string_view last = tab == std::string_view::npos ? line : line.substr(tab + 1);
    Example ex;
    try {
      if (last.find('[') != std::string_view::npos) {
        ex = parse_top(last);
        validate_utterance(ex.utterance);
        validate_tree(ex.tree, ex.utterance.size());
      } else {
        ex.utterance.tokens = split_tokens(line);
        ex.utterance.raw = std::string(line);
        validate_utterance(ex.utterance);
      }
    } catch (const Error& e) {
      throw_error(ErrorCode::kParse,
                  source + ": line " + std::to_string(line_no) + ": " + e.what());
    }
    out.push_back(std::move(ex));
  }
  return out;
}

}  // namespace lexparse
