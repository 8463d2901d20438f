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

#include "lexparse/parser.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <tuple>

#include "lexparse/config.hpp"
#include "lexparse/error.hpp"

namespace lexparse {

std::string to_string(ParserMode mode) {
  switch (mode) {
    case ParserMode::kBase:
      return "base";
    case ParserMode::kSplit:
      return "split";
    case ParserMode::kLexicon:
      return "lex";
    case ParserMode::kLexiconGeneralized:
      return "lex-gr";
  }
  return "base";
}

ParserMode parser_mode_from_string(const std::string& text) {
  if (text == "base") return ParserMode::kBase;
  if (text == "split") return ParserMode::kSplit;
  if (text == "lex") return ParserMode::kLexicon;
  if (text == "lex-gr") return ParserMode::kLexiconGeneralized;
  throw_error(ErrorCode::kInvalidArgument,
              "unknown parser mode '" + text + "' (expected base, split, lex or lex-gr)");
}

EncoderMode ParserConfig::encoder_mode() const {
  switch (mode) {
    case ParserMode::kLexicon:
      return EncoderMode::kLexiconInjected;
    case ParserMode::kLexiconGeneralized:
      return EncoderMode::kGeneralized;
    default:
      return EncoderMode::kBase;
  }
}

ParserConfig ParserConfig::resolved() const {
  ParserConfig c = *this;
  c.encoder.mode = encoder_mode();
  c.encoder.validate();
  if (c.d_hidden == 0) throw_error(ErrorCode::kInvalidArgument, "d_hidden must be positive");
  return c;
}

NetworkScorer::NetworkScorer(const Tensor& boundaries, const Tensor& w, const Tensor& b,
                             const Tensor& v)
    : bounds_(boundaries), w_(w), b_(b), v_(v) {
  if (w.cols() != boundaries.cols() || b.cols() != w.rows() || v.cols() != w.rows()) {
    throw_error(ErrorCode::kContract, "scorer parameter shapes do not line up");
  }
}

void NetworkScorer::score(std::size_t i, std::size_t j, std::size_t split,
                          std::vector<double>& out) const {
  const std::size_t d = bounds_.cols();
  const std::size_t hid = w_.rows();
  const std::size_t labels = v_.rows();
  if (i >= j || j >= bounds_.rows()) {
    throw_error(ErrorCode::kInvalidArgument, "span out of range");
  }
  rep_.resize(d);
  const double* bj = &bounds_.data[j * d];
  const double* bi = &bounds_.data[i * d];
  for (std::size_t p = 0; p < d; ++p) rep_[p] = bj[p] + (-1.0 * bi[p]);
  if (split != kNoSplit) {
    if (!(i < split && split < j)) {
      throw_error(ErrorCode::kInvalidArgument, "split fence not strictly inside the span");
    }
    const double* bk = &bounds_.data[split * d];
    for (std::size_t p = 0; p < d; ++p) rep_[p] = rep_[p] + bk[p];
  }
  // Same accumulation order as the tape's matmul, so decoded scores and
  // taped scores agree bit for bit.
  hidden_.resize(hid);
  for (std::size_t h = 0; h < hid; ++h) {
    const double* wrow = &w_.data[h * d];
    double acc = 0.0;
    for (std::size_t p = 0; p < d; ++p) acc += rep_[p] * wrow[p];
    acc = acc + b_.data[h];
    hidden_[h] = acc > 0.0 ? acc : 0.0;
  }
  out.resize(labels + 1);
  out[0] = 0.0;
  for (std::size_t l = 0; l < labels; ++l) {
    const double* vrow = &v_.data[l * hid];
    double acc = 0.0;
    for (std::size_t p = 0; p < hid; ++p) acc += hidden_[p] * vrow[p];
    out[l + 1] = acc;
  }
}

namespace {

constexpr const char* kEncoderPrefix = "parser.";

void pad_sentinels(SlotTags& tags) {
  std::vector<double> outside(tags.num_ids, 0.0);
  outside[Lexicon::kOutOfCategory] = 1.0;
  tags.indicators.insert(tags.indicators.begin(), outside);
  tags.indicators.push_back(outside);
  tags.in_lexicon.insert(tags.in_lexicon.begin(), false);
  tags.in_lexicon.push_back(false);
}

}  // namespace

ParserModel::ParserModel(const ParserConfig& config, const Corpus& train,
                         std::vector<std::string> categories, std::uint64_t seed)
    : config_(config.resolved()),
      encoder_(kEncoderPrefix, config_.encoder),
      params_(seed) {
  if (train.empty()) throw_error(ErrorCode::kInvalidArgument, "training corpus is empty");
  if (config_.uses_lexicon()) {
    if (categories.empty()) {
      throw_error(ErrorCode::kInvalidArgument, "lexicon modes need a lexicon with categories");
    }
    categories_ = std::move(categories);
  }
  std::vector<ParseTree> chart_trees;
  for (const Example& ex : train) {
    for (const std::string& tok : ex.utterance.tokens) words_.add(to_lower(tok));
    chart_trees.push_back(to_chart_form(ex.tree));
  }
  labels_ = LabelVocab::from_trees(chart_trees);
  if (labels_.size() < 2) throw_error(ErrorCode::kInvalidArgument, "training trees have no labels");
  encoder_.init_params(params_, words_.size(), categories_.size() + 1);
  params_.create("scorer.w", {config_.d_hidden, config_.encoder.d_model}, Init::kFanIn);
  params_.create("scorer.b", {1, config_.d_hidden}, Init::kZeros);
  params_.create("scorer.v", {labels_.size() - 1, config_.d_hidden}, Init::kFanIn);
}

void ParserModel::check_lexicon(const Lexicon& lexicon) const {
  if (!config_.uses_lexicon()) return;
  if (lexicon.categories() != categories_) {
    throw_error(ErrorCode::kContract,
                "lexicon categories differ from the ones the parser was trained with; "
                "only values of existing categories may change without retraining");
  }
}

std::vector<int> ParserModel::word_ids(const Utterance& utterance) const {
  std::vector<int> ids;
  ids.reserve(utterance.size() + 2);
  ids.push_back(Vocabulary::kStart);
  for (const std::string& tok : utterance.tokens) ids.push_back(words_.id(to_lower(tok)));
  ids.push_back(Vocabulary::kEnd);
  return ids;
}

Var ParserModel::boundaries(Tape& tape, const Utterance& utterance,
                            const std::vector<MatchOccurrence>& occurrences) const {
  validate_utterance(utterance);
  std::vector<int> ids = word_ids(utterance);
  SlotTags tags;
  const SlotTags* tag_ptr = nullptr;
  if (config_.uses_lexicon()) {
    tags = tag_tokens(utterance.size(), occurrences, categories_.size() + 1);
    pad_sentinels(tags);
    tag_ptr = &tags;
  }
  Var x = encoder_.embed(tape, params_, ids, tag_ptr);
  return lexparse::boundaries(encoder_.encode(tape, params_, x));
}

DecodeResult ParserModel::decode(const Utterance& utterance,
                                 const std::vector<MatchOccurrence>& occurrences) const {
  Tape tape;
  Var b = boundaries(tape, utterance, occurrences);
  NetworkScorer scorer(b.value(), params_.at("scorer.w"), params_.at("scorer.b"),
                       params_.at("scorer.v"));
  DecodeOptions options;
  options.use_split = config_.use_split();
  options.force_root_label = true;
  return cky_decode(scorer, labels_, utterance.size(), options);
}

ParseTree ParserModel::parse(const Utterance& utterance,
                             const std::vector<MatchOccurrence>& occurrences) const {
  return from_chart_form(decode(utterance, occurrences).tree);
}

Var ParserModel::loss(Tape& tape, const Example& example,
                      const std::vector<MatchOccurrence>& occurrences, double* value,
                      DecodeStats* stats) const {
  const ParseTree gold = to_chart_form(example.tree);
  Var b = boundaries(tape, example.utterance, occurrences);
  NetworkScorer scorer(b.value(), params_.at("scorer.w"), params_.at("scorer.b"),
                       params_.at("scorer.v"));
  DecodeOptions options;
  options.use_split = config_.use_split();
  options.force_root_label = true;
  HammingCost hamming(gold, labels_);
  SpanCost cost = hamming.as_function();
  options.cost = &cost;
  DecodeResult rival = cky_decode(scorer, labels_, example.utterance.size(), options);
  if (stats) {
    stats->spans_scored += rival.stats.spans_scored;
    stats->split_reps += rival.stats.split_reps;
    stats->multi_split_reps += rival.stats.multi_split_reps;
  }
  const double gold_score = tree_score(scorer, labels_, gold, options.use_split);
  const double excess = rival.score - gold_score;
  if (value) *value = excess > 0.0 ? excess : 0.0;
  if (!(excess > 0.0) || rival.tree == gold) {
    if (value) *value = 0.0;
    return Var();
  }

  Var w = tape.param(params_, "scorer.w");
  Var bias = tape.param(params_, "scorer.b");
  Var v = tape.param(params_, "scorer.v");
  std::map<std::tuple<std::size_t, std::size_t, std::size_t>, Var> cache;
  auto span_scores = [&](std::size_t i, std::size_t j, std::size_t split) {
    auto key = std::make_tuple(i, j, split);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
    Var rep = span_rep(b, i, j);
    if (split != kNoSplit) rep = span_split_rep(rep, b, i, j, split);
    Var hidden = relu(add(matmul(rep, w, Transpose::kYes), bias));
    Var s = matmul(hidden, v, Transpose::kYes);
    cache.emplace(key, s);
    return s;
  };
  std::vector<Var> picked;
  auto collect = [&](const ParseTree& tree, std::vector<Var>& out) {
    std::function<void(const ParseTree&)> walk = [&](const ParseTree& t) {
      const std::size_t id = labels_.id(t.label);
      if (id != LabelVocab::kDummy) {
        std::size_t split = kNoSplit;
        if (options.use_split && !t.children.empty()) split = t.children[0].end;
        out.push_back(slice_cols(span_scores(t.begin, t.end, split), id - 1, id));
      }
      for (const ParseTree& c : t.children) walk(c);
    };
    walk(tree);
  };
  std::vector<Var> rival_nodes, gold_nodes;
  collect(rival.tree, rival_nodes);
  collect(gold, gold_nodes);
  Var rival_total = sum(concat_cols(rival_nodes));
  Var gold_total = sum(concat_cols(gold_nodes));
  Var margin = tape.constant(Tensor::scalar(hamming.distance(rival.tree)));
  return add(sub(rival_total, gold_total), margin);
}

Checkpoint ParserModel::to_checkpoint() const {
  Checkpoint ckpt;
  ckpt.seed = params_.seed();
  ckpt.meta.emplace_back("kind", "parser");
  for (const auto& [k, v] : parser_config_items(config_)) {
    ckpt.meta.emplace_back("config", k + "=" + v);
  }
  for (const std::string& w : words_.tokens()) ckpt.meta.emplace_back("word", w);
  for (const std::string& l : labels_.names()) ckpt.meta.emplace_back("label", l);
  for (const std::string& c : categories_) ckpt.meta.emplace_back("category", c);
  ckpt.params = ParamStore(params_.seed());
  for (const auto& [name, t] : params_.tensors()) {
    ckpt.params.insert(name, Tensor(t.shape, t.data));
  }
  return ckpt;
}

ParserModel ParserModel::from_checkpoint(const Checkpoint& ckpt) {
  if (ckpt.meta_value("kind") != "parser") {
    throw_error(ErrorCode::kParse, "checkpoint does not hold a parser");
  }
  ParserModel m;
  ParserConfig config;
  for (const std::string& item : ckpt.meta_values("config")) {
    auto eq = item.find('=');
    if (eq == std::string::npos || !set_parser_config_item(config, item.substr(0, eq),
                                                           item.substr(eq + 1))) {
      throw_error(ErrorCode::kParse, "bad parser config entry '" + item + "'");
    }
  }
  m.config_ = config.resolved();
  m.encoder_ = Encoder(kEncoderPrefix, m.config_.encoder);
  m.words_ = Vocabulary::from_tokens(ckpt.meta_values("word"));
  m.labels_ = LabelVocab::from_names(ckpt.meta_values("label"));
  m.categories_ = ckpt.meta_values("category");
  m.params_ = ParamStore(ckpt.seed);
  for (const auto& [name, t] : ckpt.params.tensors()) m.params_.insert(name, t);

  // The stored tensors must be exactly the ones a fresh model would create.
  ParamStore expected(ckpt.seed);
  m.encoder_.init_params(expected, m.words_.size(), m.categories_.size() + 1);
  expected.create("scorer.w", {m.config_.d_hidden, m.config_.encoder.d_model}, Init::kZeros);
  expected.create("scorer.b", {1, m.config_.d_hidden}, Init::kZeros);
  expected.create("scorer.v", {m.labels_.size() - 1, m.config_.d_hidden}, Init::kZeros);
  if (expected.tensors().size() != m.params_.tensors().size()) {
    throw_error(ErrorCode::kParse, "checkpoint tensor set does not match its config");
  }
  for (const auto& [name, t] : expected.tensors()) {
    if (!m.params_.contains(name) || m.params_.at(name).shape != t.shape) {
      throw_error(ErrorCode::kParse, "checkpoint tensor '" + name + "' missing or misshaped");
    }
  }
  return m;
}

void ParserModel::save(const std::string& path) const { save_checkpoint(path, to_checkpoint()); }

ParserModel ParserModel::load(const std::string& path) {
  return from_checkpoint(load_checkpoint(path));
}

namespace {

const std::vector<MatchOccurrence>& occurrences_for(const OccurrenceTable& table,
                                                    std::size_t index) {
  static const std::vector<MatchOccurrence> kNone;
  return index < table.size() ? table[index] : kNone;
}

void check_table(const ParserConfig& config, const Corpus& corpus, const OccurrenceTable& table,
                 const char* what) {
  if (config.uses_lexicon() && table.size() != corpus.size()) {
    throw_error(ErrorCode::kInvalidArgument,
                std::string("lexicon modes need one occurrence list per ") + what + " line");
  }
}

}  // namespace

double parser_exact_match(const ParserModel& model, const Corpus& corpus,
                          const OccurrenceTable& occurrences) {
  if (corpus.empty()) return 0.0;
  check_table(model.config(), corpus, occurrences, "evaluation");
  std::size_t hits = 0;
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    const Example& ex = corpus[i];
    DecodeResult r = model.decode(ex.utterance, occurrences_for(occurrences, i));
    if (r.tree == to_chart_form(ex.tree)) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(corpus.size());
}

ParserModel train_parser(const ParserConfig& config, const Corpus& train,
                         const OccurrenceTable& train_occurrences, const Corpus& dev,
                         const OccurrenceTable& dev_occurrences,
                         const std::vector<std::string>& categories,
                         const TrainConfig& train_config, TrainLog* log,
                         const std::function<void(const EpochLog&)>& on_epoch) {
  if (train_config.epochs == 0 || train_config.batch_size == 0 ||
      !(train_config.learning_rate > 0.0) || train_config.eval_every == 0) {
    throw_error(ErrorCode::kInvalidArgument, "training hyperparameters must be positive");
  }
  if (!(train_config.lexicon_dropout >= 0.0 && train_config.lexicon_dropout < 1.0)) {
    throw_error(ErrorCode::kInvalidArgument, "lexicon_dropout must lie in [0, 1)");
  }
  ParserModel model(config, train, categories, train_config.seed);
  check_table(model.config(), train, train_occurrences, "training");
  check_table(model.config(), dev, dev_occurrences, "dev");

  OptimState optim;
  optim.config.learning_rate = train_config.learning_rate;
  Rng order_rng(train_config.seed ^ 0x9e3779b97f4a7c15ULL);
  Rng drop_rng(train_config.seed ^ 0xc2b2ae3d27d4eb4fULL);
  std::vector<MatchOccurrence> kept;
  std::vector<std::size_t> order(train.size());
  std::iota(order.begin(), order.end(), 0);

  TrainLog local;
  TrainLog& out = log ? *log : local;
  out = TrainLog{};
  ParamStore best = model.params();
  for (std::size_t epoch = 1; epoch <= train_config.epochs; ++epoch) {
    order_rng.shuffle(order);
    EpochLog entry;
    entry.epoch = epoch;
    double total = 0.0;
    for (std::size_t start = 0; start < order.size(); start += train_config.batch_size) {
      const std::size_t stop = std::min(order.size(), start + train_config.batch_size);
      const double inv = 1.0 / static_cast<double>(stop - start);
      bool any = false;
      for (std::size_t b = start; b < stop; ++b) {
        const std::size_t idx = order[b];
        Tape tape;
        double value = 0.0;
        const std::vector<MatchOccurrence>& all = occurrences_for(train_occurrences, idx);
        kept.clear();
        for (const MatchOccurrence& occ : all) {
          // One draw per occurrence whatever the rate, so the stream is fixed.
          if (drop_rng.uniform() >= train_config.lexicon_dropout) kept.push_back(occ);
        }
        Var l = model.loss(tape, train[idx], kept, &value, &out.stats);
        total += value;
        if (l.valid()) {
          tape.backward(scale(l, inv), model.params());
          any = true;
        }
      }
      if (!any) {
        model.params().clear_grads();
        continue;
      }
      for (auto& [name, t] : model.params().tensors()) {
        if (t.grad.size() != t.size()) t.grad.assign(t.size(), 0.0);
      }
      adam_step(model.params(), optim);
      ++entry.updates;
    }
    entry.mean_loss = total / static_cast<double>(train.size());
    const bool measure = !dev.empty() &&
                         (epoch % train_config.eval_every == 0 || epoch == train_config.epochs);
    if (measure) {
      entry.dev_exact_match = parser_exact_match(model, dev, dev_occurrences);
      if (entry.dev_exact_match > out.best_dev_exact_match) {
        out.best_dev_exact_match = entry.dev_exact_match;
        out.best_epoch = epoch;
        best = model.params();
      }
    }
    out.epochs.push_back(entry);
    if (on_epoch) on_epoch(entry);
    if (measure && train_config.stop_at_perfect_dev && entry.dev_exact_match >= 1.0) break;
  }
  if (dev.empty()) {
    out.best_epoch = out.epochs.empty() ? 0 : out.epochs.back().epoch;
  } else {
    model.params() = best;
  }
  return model;
}

}  // namespace lexparse
