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

#ifndef LEXPARSE_DISAMBIGUATOR_HPP_
#define LEXPARSE_DISAMBIGUATOR_HPP_

// Binary classifier over lexicon match occurrences. Each occurrence is shown
// to a small encoder as "[CLS] ... [SL:X.left] span [SL:X.right] ..." and
// the CLS state decides whether the match is a real slot.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "lexparse/checkpoint.hpp"
#include "lexparse/encoder.hpp"
#include "lexparse/lexicon.hpp"
#include "lexparse/treebank.hpp"
#include "lexparse/vocab.hpp"

namespace lexparse {

inline constexpr const char* kClsToken = "[CLS]";

std::string left_marker(const std::string& category);
std::string right_marker(const std::string& category);

struct DisambExample {
  Utterance utterance;
  MatchOccurrence occurrence;
  bool label = false;
};

// True iff (span, category) is a slot node of the gold tree.
bool is_gold_slot(const ParseTree& gold, const MatchOccurrence& occurrence);

// One example per match occurrence; positives are the gold slot spans.
std::vector<DisambExample> gen_examples(const Example& gold, const Lexicon& lexicon);
std::vector<DisambExample> gen_examples(const Corpus& gold, const Lexicon& lexicon);

// [CLS] + tokens with the category markers around the occurrence span.
std::vector<std::string> insert_markers(const Utterance& utterance,
                                        const MatchOccurrence& occurrence);

// Kept iff the occurrence is a gold slot span; everything else Removed.
std::vector<MatchOccurrence> oracle_filter(const std::vector<MatchOccurrence>& occurrences,
                                           const ParseTree& gold);

// TSV rows: category, "i:j" (1-based inclusive tokens), True/False, tokens.
std::string examples_to_tsv(const std::vector<DisambExample>& examples);
std::vector<DisambExample> examples_from_tsv(std::string_view text,
                                             const std::string& source = "examples");

struct DisambConfig {
  EncoderConfig encoder{.d_word = 32, .d_pos = 32, .d_slot = 32, .d_model = 64,
                        .n_layers = 2, .n_heads = 2, .d_ff = 128, .max_len = 64,
                        .mode = EncoderMode::kBase};
  // Probability of replacing a word (never CLS or a marker) by the unknown
  // id during training.
  double word_dropout = 0.1;
  std::size_t epochs = 24;
  double learning_rate = 5e-4;
  std::size_t batch_size = 16;
  std::uint64_t seed = 1;
  double threshold = 0.5;
};

struct DisambEpochLog {
  std::size_t epoch = 0;
  double mean_loss = 0.0;
  double heldout_accuracy = -1.0;
};

struct DisambLog {
  std::vector<DisambEpochLog> epochs;
  std::size_t best_epoch = 0;
  double best_heldout_accuracy = -1.0;
};

class Disambiguator {
 public:
  Disambiguator() = default;
  // Vocabulary: CLS, two markers per category, then the lowercased words of
  // the training examples.
  Disambiguator(const DisambConfig& config, const std::vector<std::string>& categories,
                const std::vector<DisambExample>& train, std::uint64_t seed);

  const DisambConfig& config() const { return config_; }
  const std::vector<std::string>& categories() const { return categories_; }
  const Vocabulary& vocab() const { return vocab_; }
  ParamStore& params() { return params_; }
  const ParamStore& params() const { return params_; }
  std::size_t num_markers() const { return 2 * categories_.size(); }

  std::vector<int> token_ids(const std::vector<std::string>& marked) const;

  // Two-class logits for a marked sequence; `dropout` enables word dropout.
  Var logits(Tape& tape, const std::vector<int>& ids) const;
  // Cross-entropy on `tape` for one example.
  Var loss(Tape& tape, const DisambExample& example, Rng* dropout) const;

  // P(true) for an occurrence in context.
  double probability(const Utterance& utterance, const MatchOccurrence& occurrence) const;
  bool predict(const DisambExample& example) const;

  // Kept iff P(true) >= threshold; order preserved.
  std::vector<MatchOccurrence> filter(const Utterance& utterance,
                                      const std::vector<MatchOccurrence>& occurrences,
                                      double threshold) const;

  Checkpoint to_checkpoint() const;
  static Disambiguator from_checkpoint(const Checkpoint& ckpt);
  void save(const std::string& path) const;
  static Disambiguator load(const std::string& path);

 private:
  DisambConfig config_;
  Encoder encoder_;
  std::vector<std::string> categories_;
  Vocabulary vocab_;
  ParamStore params_;
};

// Cross-entropy training; keeps the parameters of the best held-out epoch
// (the last epoch when `heldout` is empty). Throws on a single-class set.
Disambiguator train_disamb(const std::vector<DisambExample>& train,
                           const std::vector<DisambExample>& heldout,
                           const std::vector<std::string>& categories,
                           const DisambConfig& config, DisambLog* log = nullptr,
                           const std::function<void(const DisambEpochLog&)>& on_epoch = {});

std::vector<bool> disamb_predictions(const Disambiguator& model,
                                     const std::vector<DisambExample>& examples);

}  // namespace lexparse

#endif  // LEXPARSE_DISAMBIGUATOR_HPP_
