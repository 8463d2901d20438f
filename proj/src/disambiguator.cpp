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

#include "lexparse/disambiguator.hpp"

#include <algorithm>
#include <numeric>

#include "lexparse/config.hpp"
#include "lexparse/error.hpp"

namespace lexparse {

std::string left_marker(const std::string& category) { return "[" + category + ".left]"; }
std::string right_marker(const std::string& category) { return "[" + category + ".right]"; }

bool is_gold_slot(const ParseTree& gold, const MatchOccurrence& occurrence) {
  if (gold.begin > occurrence.begin || gold.end < occurrence.end) return false;
  if (gold.begin == occurrence.begin && gold.end == occurrence.end) {
    for (const std::string& part : gold.label.parts) {
      if (part == occurrence.category) return true;
    }
  }
  for (const ParseTree& c : gold.children) {
    if (is_gold_slot(c, occurrence)) return true;
  }
  return false;
}

std::vector<DisambExample> gen_examples(const Example& gold, const Lexicon& lexicon) {
  std::vector<DisambExample> out;
  for (const MatchOccurrence& occ : match_spans(gold.utterance, lexicon)) {
    out.push_back({gold.utterance, occ, is_gold_slot(gold.tree, occ)});
  }
  return out;
}

std::vector<DisambExample> gen_examples(const Corpus& gold, const Lexicon& lexicon) {
  std::vector<DisambExample> out;
  for (const Example& ex : gold) {
    auto part = gen_examples(ex, lexicon);
    out.insert(out.end(), std::make_move_iterator(part.begin()),
               std::make_move_iterator(part.end()));
  }
  return out;
}

std::vector<std::string> insert_markers(const Utterance& utterance,
                                        const MatchOccurrence& occurrence) {
  const std::size_t n = utterance.size();
  if (occurrence.begin >= occurrence.end || occurrence.end > n) {
    throw_error(ErrorCode::kInvalidArgument, "occurrence span out of range");
  }
  std::vector<std::string> out;
  out.reserve(n + 3);
  out.push_back(kClsToken);
  for (std::size_t t = 0; t < n; ++t) {
    if (t == occurrence.begin) out.push_back(left_marker(occurrence.category));
    out.push_back(utterance.tokens[t]);
    if (t + 1 == occurrence.end) out.push_back(right_marker(occurrence.category));
  }
  return out;
}

std::vector<MatchOccurrence> oracle_filter(const std::vector<MatchOccurrence>& occurrences,
                                           const ParseTree& gold) {
  std::vector<MatchOccurrence> out = occurrences;
  for (MatchOccurrence& occ : out) {
    occ.verdict = is_gold_slot(gold, occ) ? Verdict::kKept : Verdict::kRemoved;
  }
  return out;
}

std::string examples_to_tsv(const std::vector<DisambExample>& examples) {
  std::string out;
  for (const DisambExample& ex : examples) {
    out += ex.occurrence.category;
    out += '\t';
    out += std::to_string(ex.occurrence.begin + 1) + ":" + std::to_string(ex.occurrence.end);
    out += '\t';
    out += ex.label ? "True" : "False";
    out += '\t';
    out += join_tokens(ex.utterance.tokens, 0, ex.utterance.size());
    out += '\n';
  }
  return out;
}

std::vector<DisambExample> examples_from_tsv(std::string_view text, const std::string& source) {
  std::vector<DisambExample> out;
  std::size_t pos = 0, line_no = 0;
  while (pos < text.size()) {
    std::size_t nl = text.find('\n', pos);
    if (nl == std::string_view::npos) nl = text.size();
    std::string_view line = text.substr(pos, nl - pos);
    pos = nl + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty()) continue;
    try {
      std::vector<std::string_view> cols;
      std::size_t start = 0;
      for (;;) {
        std::size_t tab = line.find('\t', start);
        cols.push_back(line.substr(start, tab == std::string_view::npos ? tab : tab - start));
        if (tab == std::string_view::npos) break;
        start = tab + 1;
      }
      if (cols.size() != 4) throw_error(ErrorCode::kParse, "expected 4 tab-separated columns");
      DisambExample ex;
      ex.utterance.tokens = split_tokens(cols[3]);
      validate_utterance(ex.utterance);
      ex.occurrence.category = std::string(cols[0]);
      Label::atom(ex.occurrence.category);
      std::size_t colon = cols[1].find(':');
      if (colon == std::string_view::npos) throw_error(ErrorCode::kParse, "span must be i:j");
      std::size_t first = std::stoul(std::string(cols[1].substr(0, colon)));
      std::size_t last = std::stoul(std::string(cols[1].substr(colon + 1)));
      if (first == 0 || last < first || last > ex.utterance.size()) {
        throw_error(ErrorCode::kParse, "span out of range");
      }
      ex.occurrence.begin = first - 1;
      ex.occurrence.end = last;
      if (cols[2] == "True") {
        ex.label = true;
      } else if (cols[2] == "False") {
        ex.label = false;
      } else {
        throw_error(ErrorCode::kParse, "label must be True or False");
      }
      out.push_back(std::move(ex));
    } catch (const std::logic_error&) {
      throw_error(ErrorCode::kParse, source + ": line " + std::to_string(line_no) +
                                         ": malformed span");
    } catch (const Error& e) {
      throw_error(ErrorCode::kParse,
                  source + ": line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return out;
}

namespace {

constexpr const char* kEncoderPrefix = "disamb.";

bool is_reserved(const std::string& token) {
  return !token.empty() && token.front() == '[' && token.back() == ']';
}

}  // namespace

Disambiguator::Disambiguator(const DisambConfig& config,
                             const std::vector<std::string>& categories,
                             const std::vector<DisambExample>& train, std::uint64_t seed)
    : config_(config), categories_(categories), params_(seed) {
  config_.encoder.mode = EncoderMode::kBase;
  encoder_ = Encoder(kEncoderPrefix, config_.encoder);
  if (categories_.empty()) throw_error(ErrorCode::kInvalidArgument, "no slot categories");
  vocab_.add(kClsToken);
  for (const std::string& c : categories_) {
    vocab_.add(left_marker(c));
    vocab_.add(right_marker(c));
  }
  for (const DisambExample& ex : train) {
    for (const std::string& tok : ex.utterance.tokens) vocab_.add(to_lower(tok));
  }
  encoder_.init_params(params_, vocab_.size(), 0);
  params_.create("disamb.head.w", {2, config_.encoder.d_model}, Init::kFanIn);
  params_.create("disamb.head.b", {1, 2}, Init::kZeros);
}

std::vector<int> Disambiguator::token_ids(const std::vector<std::string>& marked) const {
  std::vector<int> ids;
  ids.reserve(marked.size());
  for (const std::string& tok : marked) {
    if (is_reserved(tok)) {
      if (!vocab_.contains(tok)) {
        throw_error(ErrorCode::kContract, "marker " + tok + " belongs to an unknown category");
      }
      ids.push_back(vocab_.id(tok));
    } else {
      ids.push_back(vocab_.id(to_lower(tok)));
    }
  }
  return ids;
}

Var Disambiguator::logits(Tape& tape, const std::vector<int>& ids) const {
  Var h = encoder_.encode(tape, params_, encoder_.embed(tape, params_, ids, nullptr));
  Var cls = slice_rows(h, 0, 1);
  return add(matmul(cls, tape.param(params_, "disamb.head.w"), Transpose::kYes),
             tape.param(params_, "disamb.head.b"));
}

Var Disambiguator::loss(Tape& tape, const DisambExample& example, Rng* dropout) const {
  std::vector<std::string> marked = insert_markers(example.utterance, example.occurrence);
  std::vector<int> ids = token_ids(marked);
  if (dropout && config_.word_dropout > 0.0) {
    for (std::size_t t = 0; t < ids.size(); ++t) {
      // Draw for every position so the stream does not depend on the tokens.
      const double u = dropout->uniform();
      if (!is_reserved(marked[t]) && u < config_.word_dropout) ids[t] = Vocabulary::kUnknown;
    }
  }
  Var logp = log_softmax_rows(logits(tape, ids));
  const std::size_t y = example.label ? 1 : 0;
  return scale(slice_cols(logp, y, y + 1), -1.0);
}

double Disambiguator::probability(const Utterance& utterance,
                                  const MatchOccurrence& occurrence) const {
  Tape tape;
  Var p = softmax_rows(logits(tape, token_ids(insert_markers(utterance, occurrence))));
  return p.value().data[1];
}

bool Disambiguator::predict(const DisambExample& example) const {
  return probability(example.utterance, example.occurrence) >= config_.threshold;
}

std::vector<MatchOccurrence> Disambiguator::filter(
    const Utterance& utterance, const std::vector<MatchOccurrence>& occurrences,
    double threshold) const {
  std::vector<MatchOccurrence> out = occurrences;
  for (MatchOccurrence& occ : out) {
    occ.verdict =
        probability(utterance, occ) >= threshold ? Verdict::kKept : Verdict::kRemoved;
  }
  return out;
}

Checkpoint Disambiguator::to_checkpoint() const {
  Checkpoint ckpt;
  ckpt.seed = params_.seed();
  ckpt.meta.emplace_back("kind", "disambiguator");
  for (const auto& [k, v] : disamb_config_items(config_)) {
    ckpt.meta.emplace_back("config", k + "=" + v);
  }
  for (const std::string& c : categories_) ckpt.meta.emplace_back("category", c);
  for (const std::string& w : vocab_.tokens()) ckpt.meta.emplace_back("word", w);
  ckpt.params = ParamStore(params_.seed());
  for (const auto& [name, t] : params_.tensors()) ckpt.params.insert(name, Tensor(t.shape, t.data));
  return ckpt;
}

Disambiguator Disambiguator::from_checkpoint(const Checkpoint& ckpt) {
  if (ckpt.meta_value("kind") != "disambiguator") {
    throw_error(ErrorCode::kParse, "checkpoint does not hold a disambiguator");
  }
  Disambiguator d;
  for (const std::string& item : ckpt.meta_values("config")) {
    auto eq = item.find('=');
    if (eq == std::string::npos ||
        !set_disamb_config_item(d.config_, item.substr(0, eq), item.substr(eq + 1))) {
      throw_error(ErrorCode::kParse, "bad disambiguator config entry '" + item + "'");
    }
  }
  d.config_.encoder.mode = EncoderMode::kBase;
  d.encoder_ = Encoder(kEncoderPrefix, d.config_.encoder);
  d.categories_ = ckpt.meta_values("category");
  d.vocab_ = Vocabulary::from_tokens(ckpt.meta_values("word"));
  if (d.vocab_.size() < 4 + 2 * d.categories_.size()) {
    throw_error(ErrorCode::kParse, "disambiguator vocabulary lacks marker tokens");
  }
  d.params_ = ParamStore(ckpt.seed);
  for (const auto& [name, t] : ckpt.params.tensors()) d.params_.insert(name, t);
  ParamStore expected(ckpt.seed);
  d.encoder_.init_params(expected, d.vocab_.size(), 0);
  expected.create("disamb.head.w", {2, d.config_.encoder.d_model}, Init::kZeros);
  expected.create("disamb.head.b", {1, 2}, Init::kZeros);
  if (expected.tensors().size() != d.params_.tensors().size()) {
    throw_error(ErrorCode::kParse, "checkpoint tensor set does not match its config");
  }
  for (const auto& [name, t] : expected.tensors()) {
    if (!d.params_.contains(name) || d.params_.at(name).shape != t.shape) {
      throw_error(ErrorCode::kParse, "checkpoint tensor '" + name + "' missing or misshaped");
    }
  }
  return d;
}

void Disambiguator::save(const std::string& path) const { save_checkpoint(path, to_checkpoint()); }

Disambiguator Disambiguator::load(const std::string& path) {
  return from_checkpoint(load_checkpoint(path));
}

std::vector<bool> disamb_predictions(const Disambiguator& model,
                                     const std::vector<DisambExample>& examples) {
  std::vector<bool> out;
  out.reserve(examples.size());
  for (const DisambExample& ex : examples) out.push_back(model.predict(ex));
  return out;
}

Disambiguator train_disamb(const std::vector<DisambExample>& train,
                           const std::vector<DisambExample>& heldout,
                           const std::vector<std::string>& categories,
                           const DisambConfig& config, DisambLog* log,
                           const std::function<void(const DisambEpochLog&)>& on_epoch) {
  if (config.epochs == 0 || config.batch_size == 0 || !(config.learning_rate > 0.0) ||
      config.word_dropout < 0.0 || config.word_dropout >= 1.0) {
    throw_error(ErrorCode::kInvalidArgument, "invalid disambiguator hyperparameters");
  }
  std::size_t positives = 0;
  for (const DisambExample& ex : train) positives += ex.label ? 1 : 0;
  if (positives == 0 || positives == train.size()) {
    throw_error(ErrorCode::kInvalidArgument,
                "disambiguator training needs both positive and negative examples");
  }
  Disambiguator model(config, categories, train, config.seed);
  OptimState optim;
  optim.config.learning_rate = config.learning_rate;
  Rng order_rng(config.seed ^ 0x51ed2701a3c4b5d7ULL);
  Rng dropout_rng(config.seed ^ 0x2545f4914f6cdd1dULL);
  std::vector<std::size_t> order(train.size());
  std::iota(order.begin(), order.end(), 0);

  DisambLog local;
  DisambLog& out = log ? *log : local;
  out = DisambLog{};
  ParamStore best = model.params();
  for (std::size_t epoch = 1; epoch <= config.epochs; ++epoch) {
    order_rng.shuffle(order);
    DisambEpochLog entry;
    entry.epoch = epoch;
    double total = 0.0;
    for (std::size_t start = 0; start < order.size(); start += config.batch_size) {
      const std::size_t stop = std::min(order.size(), start + config.batch_size);
      const double inv = 1.0 / static_cast<double>(stop - start);
      for (std::size_t b = start; b < stop; ++b) {
        Tape tape;
        Var l = model.loss(tape, train[order[b]], &dropout_rng);
        total += l.item();
        tape.backward(scale(l, inv), model.params());
      }
      adam_step(model.params(), optim);
    }
    entry.mean_loss = total / static_cast<double>(train.size());
    if (!heldout.empty()) {
      std::vector<bool> pred = disamb_predictions(model, heldout);
      std::size_t hits = 0;
      for (std::size_t i = 0; i < heldout.size(); ++i) hits += pred[i] == heldout[i].label;
      entry.heldout_accuracy = static_cast<double>(hits) / static_cast<double>(heldout.size());
      if (entry.heldout_accuracy > out.best_heldout_accuracy) {
        out.best_heldout_accuracy = entry.heldout_accuracy;
        out.best_epoch = epoch;
        best = model.params();
      }
    }
    out.epochs.push_back(entry);
    if (on_epoch) on_epoch(entry);
  }
  if (heldout.empty()) {
    out.best_epoch = config.epochs;
  } else {
    model.params() = best;
  }
  return model;
}

}  // namespace lexparse
