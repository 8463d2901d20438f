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

#ifndef LEXPARSE_DATASIM_HPP_
#define LEXPARSE_DATASIM_HPP_

// Unseen-slot-value experiments: new-value catalogs, modified test sets,
// lexicon-update scenarios and the regex substitution baseline.

#include <cstddef>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "lexparse/lexicon.hpp"
#include "lexparse/metrics.hpp"
#include "lexparse/numcore.hpp"
#include "lexparse/pipeline.hpp"
#include "lexparse/treebank.hpp"

namespace lexparse {

// Existing slot category -> new values, in file order. Same TSV layout as
// the lexicon.
struct NewValueCatalog {
  std::map<std::string, std::vector<TokenSeq>> values;

  static NewValueCatalog parse_tsv(std::string_view text, const std::string& source = "catalog");
  static NewValueCatalog load(const std::string& path);
  std::string to_tsv() const;

  // Throws if a category is unknown to `base` or a value is already listed
  // under its category there.
  void validate(const Lexicon& base) const;
  std::size_t size() const;
};

struct Modification {
  std::size_t line = 0;     // 0-based corpus line
  std::size_t begin = 0;    // original fences of the slot node
  std::size_t end = 0;
  std::string category;
  TokenSeq old_value;
  TokenSeq new_value;
};

struct ModifiedCorpus {
  Corpus corpus;
  std::vector<Modification> log;
  std::size_t modified_utterances = 0;
};

// Per eligible slot node (a slot whose category is in the catalog and whose
// children are all tokens), replace its tokens with probability p_replace by
// a uniformly drawn catalog value. Two draws are taken for every eligible
// node whatever p_replace is, so one seed gives nested modification sets as
// the rate grows.
ModifiedCorpus generate_modified_test(const Corpus& corpus, const NewValueCatalog& catalog,
                                      double p_replace, std::uint64_t seed);

// Bisection on p_replace for a target fraction of modified utterances.
double calibrate_p_replace(const Corpus& corpus, const NewValueCatalog& catalog,
                           double target_fraction, std::uint64_t seed);

std::string modifications_to_tsv(const std::vector<Modification>& log);

struct Substitution {
  std::size_t begin = 0;  // fences in the substituted utterance
  std::size_t end = 0;
  std::string category;
  TokenSeq original;      // tokens as they appeared before substitution
};

struct SubstitutionResult {
  Utterance utterance;
  std::vector<Substitution> mapping;
};

// Replaces catalog values found in the utterance, longest first then
// leftmost (category ties to the lowest lexicon id), by a uniformly drawn
// value of the same category from `base`.
SubstitutionResult regex_substitute(const Utterance& utterance, const NewValueCatalog& catalog,
                                    const Lexicon& base, Rng& rng);

// Puts the original tokens back into a tree parsed over the substituted
// utterance. A substituted span split across constituents is restored at
// its first token; constituents left empty are dropped.
Example undo_substitution(const ParseTree& tree, const Utterance& substituted,
                          const std::vector<Substitution>& mapping);

enum class Scenario {
  kPlain,           // parse as is; lexicon parsers use the base lexicon
  kUpdatedLexicon,  // base lexicon plus the catalog, no retraining
  kStaleLexicon,    // base lexicon only (ablation)
  kRegexBaseline,   // substitute, parse, undo
};

std::string to_string(Scenario scenario);
Scenario scenario_from_string(const std::string& text);

struct ScenarioModel {
  std::string name;
  const ParserModel* parser = nullptr;
  FilterSetup filter;
  Scenario scenario = Scenario::kPlain;
};

struct ScenarioData {
  const Lexicon* base_lexicon = nullptr;
  const NewValueCatalog* catalog = nullptr;
  std::uint64_t seed = 1;
};

EvalReport run_scenario(const ScenarioModel& model, const ScenarioData& data, const Corpus& test);

struct SweepRow {
  double p_replace = 0.0;
  double modified_fraction = 0.0;
  std::size_t modifications = 0;
  std::vector<double> exact_match;  // one per model
};

// One modified test set per rate (same seed for every rate) evaluated under
// every model's scenario.
std::vector<SweepRow> sweep_modification_rate(const Corpus& test, const NewValueCatalog& catalog,
                                              const std::vector<double>& rates,
                                              std::uint64_t seed,
                                              const std::vector<ScenarioModel>& models,
                                              const ScenarioData& data);

std::string sweep_to_tsv(const std::vector<SweepRow>& rows,
                         const std::vector<ScenarioModel>& models);

}  // namespace lexparse

#endif  // LEXPARSE_DATASIM_HPP_
