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

#ifndef LEXPARSE_PARSER_HPP_
#define LEXPARSE_PARSER_HPP_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "lexparse/chart.hpp"
#include "lexparse/checkpoint.hpp"
#include "lexparse/encoder.hpp"
#include "lexparse/lexicon.hpp"
#include "lexparse/numcore.hpp"
#include "lexparse/treebank.hpp"
#include "lexparse/vocab.hpp"

namespace lexparse {

enum class ParserMode {
  kBase,                 // "base"
  kSplit,                // "split": base encoder, split boundary in span vectors
  kLexicon,              // "lex": slot tags injected, split on
  kLexiconGeneralized,   // "lex-gr": as lex, covered tokens drop their word vector
};

std::string to_string(ParserMode mode);
ParserMode parser_mode_from_string(const std::string& text);

struct ParserConfig {
  ParserMode mode = ParserMode::kBase;
  EncoderConfig encoder;  // encoder.mode is derived from `mode`
  std::size_t d_hidden = 128;

  bool use_split() const { return mode != ParserMode::kBase; }
  bool uses_lexicon() const {
    return mode == ParserMode::kLexicon || mode == ParserMode::kLexiconGeneralized;
  }
  EncoderMode encoder_mode() const;
  // Copy with encoder.mode filled in and everything validated.
  ParserConfig resolved() const;
};

struct TrainConfig {
  std::size_t epochs = 60;
  double learning_rate = 1e-3;
  std::size_t batch_size = 16;
  std::uint64_t seed = 1;
  // Dev exact match is measured every `eval_every` epochs and on the last.
  std::size_t eval_every = 1;
  bool stop_at_perfect_dev = false;
  // Lexicon modes: each training occurrence is hidden from the parser with
  // this probability, drawn afresh every epoch.
  double lexicon_dropout = 0.3;
};

struct EpochLog {
  std::size_t epoch = 0;
  double mean_loss = 0.0;
  std::size_t updates = 0;
  double dev_exact_match = -1.0;  // -1 when not measured
};

struct TrainLog {
  std::vector<EpochLog> epochs;
  std::size_t best_epoch = 0;
  double best_dev_exact_match = -1.0;
  // Decode statistics accumulated over every training decode.
  DecodeStats stats;
};

// Match occurrences per corpus line, already filtered. Empty for the
// non-lexicon modes.
using OccurrenceTable = std::vector<std::vector<MatchOccurrence>>;

// Span scores from boundary vectors: V * relu(W r + b), dummy fixed at 0.
class NetworkScorer : public SpanScorer {
 public:
  NetworkScorer(const Tensor& boundaries, const Tensor& w, const Tensor& b, const Tensor& v);

  std::size_t num_labels() const override { return v_.rows() + 1; }
  void score(std::size_t i, std::size_t j, std::size_t split,
             std::vector<double>& out) const override;

 private:
  const Tensor& bounds_;
  const Tensor& w_;
  const Tensor& b_;
  const Tensor& v_;
  mutable std::vector<double> rep_;
  mutable std::vector<double> hidden_;
};

class ParserModel {
 public:
  ParserModel() = default;
  // Builds the word and label vocabularies from `train` and initializes
  // parameters from `seed`. `categories` are the lexicon categories in id
  // order (ignored by the non-lexicon modes).
  ParserModel(const ParserConfig& config, const Corpus& train,
              std::vector<std::string> categories, std::uint64_t seed);

  const ParserConfig& config() const { return config_; }
  const Vocabulary& words() const { return words_; }
  const LabelVocab& labels() const { return labels_; }
  const std::vector<std::string>& categories() const { return categories_; }
  ParamStore& params() { return params_; }
  const ParamStore& params() const { return params_; }

  // Throws unless the lexicon has exactly the categories the model was
  // trained with, in the same id order. Values may differ.
  void check_lexicon(const Lexicon& lexicon) const;

  // Boundary vectors b_0..b_n on `tape` for the utterance.
  Var boundaries(Tape& tape, const Utterance& utterance,
                 const std::vector<MatchOccurrence>& occurrences) const;

  DecodeResult decode(const Utterance& utterance,
                      const std::vector<MatchOccurrence>& occurrences) const;
  // Original-form tree (debinarized, unary chains expanded).
  ParseTree parse(const Utterance& utterance,
                  const std::vector<MatchOccurrence>& occurrences) const;

  // Hinge loss for one example on `tape`; returns an invalid Var when the
  // loss is zero (no gradient to propagate). `value` receives the loss.
  Var loss(Tape& tape, const Example& example,
           const std::vector<MatchOccurrence>& occurrences, double* value,
           DecodeStats* stats = nullptr) const;

  Checkpoint to_checkpoint() const;
  static ParserModel from_checkpoint(const Checkpoint& ckpt);
  void save(const std::string& path) const;
  static ParserModel load(const std::string& path);

 private:
  std::vector<int> word_ids(const Utterance& utterance) const;

  ParserConfig config_;
  Encoder encoder_;
  Vocabulary words_;
  LabelVocab labels_;
  std::vector<std::string> categories_;
  ParamStore params_;
};

// Margin-loss training with minibatched Adam. The returned model carries
// the parameters of the best dev epoch (the last epoch without dev data).
ParserModel train_parser(const ParserConfig& config, const Corpus& train,
                         const OccurrenceTable& train_occurrences, const Corpus& dev,
                         const OccurrenceTable& dev_occurrences,
                         const std::vector<std::string>& categories,
                         const TrainConfig& train_config, TrainLog* log = nullptr,
                         const std::function<void(const EpochLog&)>& on_epoch = {});

// Fraction of lines whose decoded tree equals the gold tree.
double parser_exact_match(const ParserModel& model, const Corpus& corpus,
                          const OccurrenceTable& occurrences);

}  // namespace lexparse

#endif  // LEXPARSE_PARSER_HPP_
