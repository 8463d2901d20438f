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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <set>
#include <tuple>

#include "lexparse/checkpoint.hpp"
#include "lexparse/error.hpp"
#include "lexparse/parser.hpp"
#include "lexparse/pipeline.hpp"
#include "lexparse/toy_corpus.hpp"
#include "support.hpp"

using namespace lexparse;

namespace {

ParserConfig tiny_config(ParserMode mode) {
  ParserConfig c;
  c.mode = mode;
  c.encoder.d_word = 6;
  c.encoder.d_pos = 4;
  c.encoder.d_slot = 6;
  c.encoder.d_model = 8;
  c.encoder.n_layers = 1;
  c.encoder.n_heads = 2;
  c.encoder.d_ff = 16;
  c.d_hidden = 10;
  return c;
}

struct Fixture {
  Corpus corpus = generate_toy_corpus(40, 7);
  Lexicon lexicon = Lexicon::build(corpus);
};

}  // namespace

TEST_CASE("mode strings") {
  for (ParserMode m : {ParserMode::kBase, ParserMode::kSplit, ParserMode::kLexicon,
                       ParserMode::kLexiconGeneralized}) {
    CHECK(parser_mode_from_string(to_string(m)) == m);
  }
  CHECK_THROWS_AS(parser_mode_from_string("gr"), Error);
  CHECK_FALSE(tiny_config(ParserMode::kBase).use_split());
  CHECK(tiny_config(ParserMode::kSplit).use_split());
  CHECK(tiny_config(ParserMode::kLexicon).uses_lexicon());
}

TEST_CASE("decoded scores agree with tree scores and taped scores") {
  Fixture f;
  for (ParserMode m : {ParserMode::kBase, ParserMode::kSplit, ParserMode::kLexiconGeneralized}) {
    CAPTURE(to_string(m));
    ParserModel model(tiny_config(m), f.corpus, f.lexicon.categories(), 3);
    OccurrenceTable occ = prepare_occurrences(f.corpus, f.lexicon, FilterSetup{});
    for (std::size_t i = 0; i < 5; ++i) {
      const auto& ex = f.corpus[i];
      const auto& o = model.config().uses_lexicon() ? occ[i] : std::vector<MatchOccurrence>{};
      DecodeResult r = model.decode(ex.utterance, o);
      CHECK_FALSE(r.tree.label.is_dummy());
      Tape tape;
      Var b = model.boundaries(tape, ex.utterance, o);
      NetworkScorer scorer(b.value(), model.params().at("scorer.w"),
                           model.params().at("scorer.b"), model.params().at("scorer.v"));
      CHECK(tree_score(scorer, model.labels(), r.tree, model.config().use_split()) == r.score);
      ParseTree parsed = model.parse(ex.utterance, o);
      validate_tree(parsed, ex.utterance.size());

      double value = 0.0;
      Tape t2;
      Var loss = model.loss(t2, ex, o, &value);
      if (loss.valid()) CHECK(loss.item() == doctest::Approx(value).epsilon(1e-12));
    }
  }
}

TEST_CASE("margin loss equals brute force over all trees") {
  Rng rng(5);
  Corpus corpus = generate_toy_corpus(30, 11);
  ParserModel model(tiny_config(ParserMode::kBase), corpus, {}, 21);
  std::size_t checked = 0;
  for (const Example& ex : corpus) {
    if (ex.utterance.size() > 7) continue;
    Tape tape;
    Var b = model.boundaries(tape, ex.utterance, {});
    NetworkScorer scorer(b.value(), model.params().at("scorer.w"), model.params().at("scorer.b"),
                         model.params().at("scorer.v"));
    const ParseTree gold = to_chart_form(ex.tree);
    std::set<std::tuple<std::size_t, std::size_t, std::size_t>> gold_set;
    std::function<void(const ParseTree&)> walk = [&](const ParseTree& t) {
      std::size_t id = model.labels().id(t.label);
      if (id != 0) gold_set.emplace(t.begin, t.end, id);
      for (const auto& c : t.children) walk(c);
    };
    walk(gold);
    std::vector<double> buf;
    testing::LabelScore plain = [&](std::size_t i, std::size_t j, std::size_t, std::size_t l) {
      scorer.score(i, j, kNoSplit, buf);
      return buf[l];
    };
    testing::LabelScore augmented = [&](std::size_t i, std::size_t j, std::size_t k,
                                        std::size_t l) {
      return plain(i, j, k, l) + (gold_set.count({i, j, l}) ? 0.0 : 1.0);
    };
    const double best =
        testing::oracle_decode(augmented, model.labels(), ex.utterance.size(), true).score;
    const double want = std::max(0.0, best - testing::sum_tree(gold, plain, model.labels()));
    double value = -1.0;
    Tape t2;
    model.loss(t2, ex, {}, &value);
    CHECK(value == want);
    ++checked;
  }
  CHECK(checked >= 10);
}

TEST_CASE("end-to-end gradient check through the parser") {
  Fixture f;
  for (ParserMode m : {ParserMode::kBase, ParserMode::kSplit, ParserMode::kLexiconGeneralized}) {
    CAPTURE(to_string(m));
    Corpus small(f.corpus.begin(), f.corpus.begin() + 1);
    Example ex = parse_top("[IN:GET_DIRECTIONS directions to [SL:DESTINATION home ] ]");
    small.push_back(ex);
    ParserModel model(tiny_config(m), small, f.lexicon.categories(), 4);
    auto occ = prepare_occurrences(ex.utterance, f.lexicon, FilterSetup{}, &ex.tree);
    auto fn = [&](Tape& tape, const ParamStore&) {
      double v = 0.0;
      Var loss = model.loss(tape, ex, occ, &v);
      REQUIRE(loss.valid());
      return loss;
    };
    CHECK(grad_check(fn, model.params(), 1e-6) <= 1e-4);
  }
}

TEST_CASE("checkpoint round trip reproduces parses") {
  Fixture f;
  ParserModel model(tiny_config(ParserMode::kLexiconGeneralized), f.corpus,
                    f.lexicon.categories(), 8);
  const std::string path = "test_parser_roundtrip.ckpt";
  model.save(path);
  ParserModel back = ParserModel::load(path);
  CHECK(serialize_checkpoint(back.to_checkpoint()) == serialize_checkpoint(model.to_checkpoint()));
  OccurrenceTable occ = prepare_occurrences(f.corpus, f.lexicon, FilterSetup{});
  for (std::size_t i = 0; i < 5; ++i) {
    CHECK(back.decode(f.corpus[i].utterance, occ[i]).score ==
          model.decode(f.corpus[i].utterance, occ[i]).score);
  }
  std::remove(path.c_str());
  Lexicon other = Lexicon::parse_tsv("SL:ONLY\tx\n");
  CHECK_THROWS_AS(model.check_lexicon(other), Error);
  Lexicon grown = f.lexicon;
  grown.add_entries(f.lexicon.categories()[0], {{"brand", "new"}});
  CHECK_NOTHROW(model.check_lexicon(grown));
}

TEST_CASE("unknown words map to the unknown id") {
  Fixture f;
  ParserModel model(tiny_config(ParserMode::kBase), f.corpus, {}, 2);
  Utterance u;
  u.tokens = {"zzqx", "to", "home"};
  CHECK_NOTHROW(model.parse(u, {}));
}

TEST_CASE("training is deterministic and lowers the loss") {
  Corpus corpus = generate_toy_corpus(12, 3);
  TrainConfig tc;
  tc.epochs = 4;
  tc.batch_size = 2;
  tc.learning_rate = 3e-3;
  TrainLog log1, log2;
  ParserModel a = train_parser(tiny_config(ParserMode::kSplit), corpus, {}, corpus, {}, {}, tc,
                               &log1);
  ParserModel b = train_parser(tiny_config(ParserMode::kSplit), corpus, {}, corpus, {}, {}, tc,
                               &log2);
  CHECK(serialize_checkpoint(a.to_checkpoint()) == serialize_checkpoint(b.to_checkpoint()));
  REQUIRE(log1.epochs.size() == 4);
  CHECK(log1.epochs.back().mean_loss < log1.epochs.front().mean_loss);
  CHECK(log1.stats.multi_split_reps > 0);
  CHECK_THROWS_AS(train_parser(tiny_config(ParserMode::kLexicon), corpus, {}, corpus, {}, {}, tc),
                  Error);
}

TEST_CASE("lexicon dropout only hides occurrences during training") {
  Corpus corpus = generate_toy_corpus(12, 6);
  Lexicon lex = Lexicon::build(corpus);
  OccurrenceTable occ = prepare_occurrences(corpus, lex, FilterSetup{});
  TrainConfig tc;
  tc.epochs = 2;
  tc.batch_size = 4;
  auto run = [&](double rate) {
    tc.lexicon_dropout = rate;
    return serialize_checkpoint(train_parser(tiny_config(ParserMode::kLexiconGeneralized), corpus,
                                             occ, corpus, occ, lex.categories(), tc)
                                    .to_checkpoint());
  };
  const std::string none = run(0.0);
  const std::string some = run(0.5);
  CHECK(none != some);
  CHECK(some == run(0.5));
  tc.lexicon_dropout = 1.0;
  CHECK_THROWS_AS(train_parser(tiny_config(ParserMode::kLexiconGeneralized), corpus, occ, corpus,
                               occ, lex.categories(), tc),
                  Error);
}
