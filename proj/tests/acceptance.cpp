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

// Acceptance gate: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails. Every tolerance and budget is pinned below.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <functional>
#include <memory>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "cli_runner.hpp"
#include "lexparse/checkpoint.hpp"
#include "lexparse/datasim.hpp"
#include "lexparse/error.hpp"
#include "lexparse/metrics.hpp"
#include "lexparse/pipeline.hpp"
#include "lexparse/toy_corpus.hpp"
#include "support.hpp"

using namespace lexparse;
namespace lt = lexparse::testing;

namespace {

// Criterion budgets and thresholds.
constexpr int kCkyInstances = 500;
constexpr std::size_t kCkyMaxTokens = 6;
constexpr std::size_t kCkyMaxLabels = 5;  // including the dummy label
constexpr double kCkyBudgetSeconds = 60.0;
constexpr double kGradTolerance = 1e-4;
constexpr double kGradStep = 1e-6;
constexpr int kMarginInstances = 100;
constexpr std::size_t kMarginMaxTokens = 5;
constexpr std::size_t kFullEnumerationMaxTokens = 3;
constexpr int kRandomTrees = 1000;
constexpr std::size_t kMemorizeSize = 50;
constexpr std::size_t kMemorizeEpochs = 50;
constexpr double kMemorizeCpuSeconds = 120.0;
constexpr double kDisambAccuracy = 0.95;
constexpr double kTargetModifiedFraction = 0.20;
constexpr double kMaxLexiconLossPoints = 3.0;
constexpr double kSweepRangePoints = 3.0;
constexpr double kSweepSlackPoints = 1.0;
constexpr double kRatioTolerance = 1e-12;

// Toy experiment shape.
constexpr std::size_t kTrainSize = 400;
constexpr std::size_t kDevSize = 100;
constexpr std::size_t kTestSize = 400;
constexpr std::uint64_t kCorpusSeed = 1;
constexpr std::uint64_t kModifySeed = 7;
constexpr std::size_t kParserEpochs = 60;
const std::vector<double> kSweepRates{0.0, 0.1, 0.2, 0.3, 0.4};

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* pattern, double a) {
  char buf[128];
  std::snprintf(buf, sizeof buf, pattern, a);
  return buf;
}

double points(double fraction) { return 100.0 * fraction; }

ParserConfig toy_parser(ParserMode mode) {
  ParserConfig c;
  c.mode = mode;
  c.encoder.d_word = 32;
  c.encoder.d_pos = 32;
  c.encoder.d_slot = 32;
  c.encoder.d_model = 64;
  c.encoder.n_layers = 2;
  c.encoder.n_heads = 2;
  c.encoder.d_ff = 128;
  c.d_hidden = 128;
  return c;
}

TrainConfig toy_training(std::size_t epochs) {
  TrainConfig t;
  t.epochs = epochs;
  t.batch_size = 1;
  t.learning_rate = 1e-3;
  t.eval_every = 5;
  return t;
}

ParserConfig tiny_parser(ParserMode mode) {
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

TableScorer random_table(Rng& rng, std::size_t n, std::size_t num_labels, bool integer) {
  TableScorer t(n, num_labels);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j <= n; ++j) {
      for (std::size_t l = 1; l < num_labels; ++l) {
        t.at(i, j, l) = integer ? static_cast<double>(rng.below(5)) - 2.0 : lt::dyadic(rng);
      }
    }
  }
  return t;
}

lt::LabelScore table_score(const TableScorer& t, const SpanCost* cost) {
  return [&t, cost](std::size_t i, std::size_t j, std::size_t, std::size_t l) {
    double s = t.at(i, j, l);
    if (cost) s += (*cost)(i, j, l);
    return s;
  };
}

// ---------------------------------------------------------------------------

Outcome cky_equivalence() {
  const auto start = std::chrono::steady_clock::now();
  Rng rng(101);
  int score_mismatch = 0, tree_mismatch = 0;
  std::size_t tied = 0;
  for (int trial = 0; trial < kCkyInstances; ++trial) {
    const std::size_t n = 1 + rng.below(kCkyMaxTokens);
    const std::size_t num_labels = 2 + rng.below(kCkyMaxLabels - 1);
    LabelVocab labels = lt::numbered_labels(num_labels - 1);
    // Small integer tables make ties common, which is what tie breaking needs.
    TableScorer t = random_table(rng, n, num_labels, trial % 2 == 0);
    DecodeOptions opt;
    opt.force_root_label = trial % 4 < 2;
    DecodeResult got = cky_decode(t, labels, n, opt);
    lt::OracleResult want = lt::oracle_decode(table_score(t, nullptr), labels, n,
                                              opt.force_root_label);
    score_mismatch += got.score != want.score;
    tree_mismatch += !(got.tree == want.tree);
    tied += want.optimal_trees > 1;
  }
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  Outcome o;
  o.pass = score_mismatch == 0 && tree_mismatch == 0 && secs < kCkyBudgetSeconds;
  o.detail = std::to_string(kCkyInstances) + " instances, " + std::to_string(score_mismatch) +
             " score / " + std::to_string(tree_mismatch) + " tree mismatches, " +
             std::to_string(tied) + " with tied optima, " + fmt("%.2fs", secs);
  return o;
}

Outcome gradient_integrity() {
  Corpus corpus = generate_toy_corpus(20, 5);
  Example ex = parse_top("[IN:GET_DIRECTIONS directions to [SL:DESTINATION the airport ] ]");
  corpus.push_back(ex);
  Lexicon lex = Lexicon::build(corpus);
  double worst = 0.0;
  std::string modes;
  for (ParserMode m : {ParserMode::kBase, ParserMode::kSplit, ParserMode::kLexicon,
                       ParserMode::kLexiconGeneralized}) {
    ParserModel model(tiny_parser(m), corpus, lex.categories(), 17);
    auto occ = model.config().uses_lexicon()
                   ? prepare_occurrences(ex.utterance, lex, FilterSetup{}, &ex.tree)
                   : std::vector<MatchOccurrence>{};
    bool active = true;
    auto fn = [&](Tape& tape, const ParamStore&) {
      double v = 0.0;
      Var loss = model.loss(tape, ex, occ, &v);
      if (!loss.valid()) {
        active = false;
        return tape.constant(Tensor({1, 1}, {0.0}));
      }
      return loss;
    };
    const double err = grad_check(fn, model.params(), kGradStep);
    if (!active) return {false, to_string(m) + ": margin loss inactive at initialization"};
    worst = std::max(worst, err);
    modes += (modes.empty() ? "" : ",") + to_string(m);
  }
  return {worst <= kGradTolerance,
          "4-token utterance, modes " + modes + ", max relative error " + fmt("%.3g", worst)};
}

Outcome loss_augmented() {
  Rng rng(202);
  int mismatches = 0, table_cases = 0, network_cases = 0;
  // Score tables: exact brute force over every labeled tree for tiny n, over
  // every shape with independent node labels beyond that.
  for (int trial = 0; trial < kMarginInstances / 2; ++trial) {
    const std::size_t n = 1 + rng.below(kMarginMaxTokens);
    const std::size_t num_labels = 2 + rng.below(3);
    LabelVocab labels = lt::numbered_labels(num_labels - 1);
    TableScorer t = random_table(rng, n, num_labels, trial % 3 == 0);
    const ParseTree gold = lt::random_chart_tree(rng, 0, n, labels, true);
    HammingCost hamming(gold, labels);
    SpanCost cost = hamming.as_function();
    DecodeOptions opt;
    opt.force_root_label = true;
    opt.cost = &cost;
    const MarginResult m = margin_value(t, labels, gold, opt);
    const double gold_score = lt::sum_tree(gold, table_score(t, nullptr), labels);
    double best = -1e300;
    if (n <= kFullEnumerationMaxTokens) {
      for (const ParseTree& tree : lt::all_labeled_trees(0, n, labels)) {
        if (tree.label.is_dummy()) continue;
        best = std::max(best, lt::sum_tree(tree, table_score(t, &cost), labels));
      }
    } else {
      best = lt::oracle_decode(table_score(t, &cost), labels, n, true).score;
    }
    mismatches += m.loss != best - gold_score;
    ++table_cases;
  }
  // The parser's own scorer and loss on short utterances.
  Corpus short_corpus;
  while (short_corpus.size() < static_cast<std::size_t>(kMarginInstances / 2)) {
    Example ex = parse_top(lt::random_top(rng));
    if (ex.utterance.size() <= kMarginMaxTokens) short_corpus.push_back(std::move(ex));
  }
  ParserModel model(tiny_parser(ParserMode::kBase), short_corpus, {}, 23);
  std::vector<double> buf;
  for (const Example& ex : short_corpus) {
    Tape tape;
    Var b = model.boundaries(tape, ex.utterance, {});
    NetworkScorer scorer(b.value(), model.params().at("scorer.w"),
                         model.params().at("scorer.b"), model.params().at("scorer.v"));
    const ParseTree gold = to_chart_form(ex.tree);
    HammingCost hamming(gold, model.labels());
    lt::LabelScore plain = [&](std::size_t i, std::size_t j, std::size_t, std::size_t l) {
      scorer.score(i, j, kNoSplit, buf);
      return buf[l];
    };
    lt::LabelScore augmented = [&](std::size_t i, std::size_t j, std::size_t k, std::size_t l) {
      return plain(i, j, k, l) + hamming(i, j, l);
    };
    const double best =
        lt::oracle_decode(augmented, model.labels(), ex.utterance.size(), true).score;
    const double want = best - lt::sum_tree(gold, plain, model.labels());
    double value = -1.0;
    Tape t2;
    model.loss(t2, ex, {}, &value);
    mismatches += value != want;
    ++network_cases;
  }
  return {mismatches == 0, std::to_string(table_cases) + " score-table and " +
                               std::to_string(network_cases) + " network instances, " +
                               std::to_string(mismatches) + " mismatches"};
}

Outcome tree_machinery(const lt::CliRunner& scratch) {
  int failures = 0;
  Corpus toy = generate_toy_corpus(kTrainSize + kDevSize + kTestSize, kCorpusSeed);
  const std::string path = scratch.path("corpus.txt");
  save_corpus(path, toy);
  const std::string text = read_file(path);
  Corpus back = load_corpus(path);
  failures += write_corpus(back) != text;
  std::size_t line = 0;
  for (const Example& ex : back) {
    failures += serialize_top(ex.tree, ex.utterance) != serialize_top(toy[line].tree,
                                                                      toy[line].utterance);
    ++line;
  }
  Rng rng(303);
  for (int k = 0; k < kRandomTrees; ++k) {
    const std::string top = lt::random_top(rng);
    Example ex = parse_top(top);
    failures += serialize_top(ex.tree, ex.utterance) != top;
    failures += !(debinarize(binarize(ex.tree)) == ex.tree);
    failures += !(expand_unary(collapse_unary(ex.tree)) == ex.tree);
    const auto spans = labeled_spans(ex.tree);
    failures += labeled_spans(binarize(ex.tree)) != spans;
    failures += labeled_spans(collapse_unary(ex.tree)) != spans;
    failures += labeled_spans(to_chart_form(ex.tree)) != spans;
    failures += !(from_chart_form(to_chart_form(ex.tree)) == ex.tree);
  }
  return {failures == 0, std::to_string(back.size()) + " corpus lines, " +
                             std::to_string(kRandomTrees) + " random trees, " +
                             std::to_string(failures) + " failures"};
}

Outcome memorization() {
  Corpus corpus = generate_toy_corpus(kMemorizeSize, 3);
  std::string detail;
  bool pass = true;
  for (ParserMode m : {ParserMode::kBase, ParserMode::kSplit}) {
    TrainConfig tc = toy_training(kMemorizeEpochs);
    tc.eval_every = 1;
    tc.stop_at_perfect_dev = true;
    TrainLog log;
    const std::clock_t c0 = std::clock();
    ParserModel model = train_parser(toy_parser(m), corpus, {}, corpus, {}, {}, tc, &log);
    const double cpu = static_cast<double>(std::clock() - c0) / CLOCKS_PER_SEC;
    const double em = parser_exact_match(model, corpus, {});
    const bool ok = em == 1.0 && cpu < kMemorizeCpuSeconds &&
                    (m != ParserMode::kSplit || log.stats.multi_split_reps > 0);
    pass = pass && ok;
    detail += (detail.empty() ? "" : "; ") + to_string(m) + " train_em=" + fmt("%.2f", em) +
              " at epoch " + std::to_string(log.best_epoch) + fmt(" cpu=%.1fs", cpu);
    if (m == ParserMode::kSplit) {
      detail += " multi_split_reps=" + std::to_string(log.stats.multi_split_reps);
    }
  }
  return {pass, detail};
}

// Shared toy world for the disambiguation and adaptation criteria.
struct World {
  Corpus train, dev, test;
  Lexicon lexicon;
  NewValueCatalog catalog;
  std::unique_ptr<Disambiguator> disamb;
  std::unique_ptr<ParserModel> base, lex_model, lex_oracle;
  double p_replace = 0.0;
  ModifiedCorpus modified;

  World() {
    Corpus all = generate_toy_corpus(kTrainSize + kDevSize + kTestSize, kCorpusSeed);
    train.assign(all.begin(), all.begin() + kTrainSize);
    dev.assign(all.begin() + kTrainSize, all.begin() + kTrainSize + kDevSize);
    test.assign(all.begin() + kTrainSize + kDevSize, all.end());
    lexicon = Lexicon::build(train);
    catalog = NewValueCatalog::parse_tsv(toy_catalog_tsv());
    catalog.validate(lexicon);
  }

  FilterSetup model_filter() const { return {FilterKind::kModel, disamb.get(), 0.5}; }

  ParserModel train_lexicon(FilterSetup filter) const {
    return train_parser(toy_parser(ParserMode::kLexiconGeneralized), train,
                        prepare_occurrences(train, lexicon, filter), dev,
                        prepare_occurrences(dev, lexicon, filter), lexicon.categories(),
                        toy_training(kParserEpochs));
  }

  void fit() {
    disamb = std::make_unique<Disambiguator>(train_disamb(
        gen_examples(train, lexicon), gen_examples(dev, lexicon), lexicon.categories(), {}));
    base = std::make_unique<ParserModel>(train_parser(toy_parser(ParserMode::kBase), train, {},
                                                      dev, {}, {}, toy_training(kParserEpochs)));
    lex_model = std::make_unique<ParserModel>(train_lexicon(model_filter()));
    lex_oracle = std::make_unique<ParserModel>(train_lexicon({FilterKind::kOracle, nullptr, 0.5}));
    p_replace = calibrate_p_replace(test, catalog, kTargetModifiedFraction, kModifySeed);
    modified = generate_modified_test(test, catalog, p_replace, kModifySeed);
  }

  double run(const ParserModel& m, FilterSetup filter, Scenario s, const Corpus& corpus) const {
    ScenarioData data{&lexicon, &catalog, kModifySeed};
    return run_scenario({"", &m, filter, s}, data, corpus).exact_match;
  }
};

Outcome disambiguation(const World& w) {
  auto held = gen_examples(w.test, w.lexicon);
  std::vector<bool> gold;
  for (const auto& ex : held) gold.push_back(ex.label);
  const double acc = disamb_accuracy(disamb_predictions(*w.disamb, held), gold);

  // Threshold monotonicity over every held-out utterance.
  const double grid[] = {0.0, 0.1, 0.25, 0.5, 0.75, 0.9, 1.0};
  int monotone_violations = 0;
  for (const Example& ex : w.test) {
    auto occ = match_spans(ex.utterance, w.lexicon);
    std::vector<bool> previous(occ.size(), true);
    for (double th : grid) {
      auto out = w.disamb->filter(ex.utterance, occ, th);
      for (std::size_t k = 0; k < out.size(); ++k) {
        const bool kept = out[k].verdict == Verdict::kKept;
        monotone_violations += kept && !previous[k];
        previous[k] = kept;
      }
    }
  }

  // Worked example, verbatim.
  Example table1 = parse_top(lt::kTrafficTree);
  Lexicon table1_lex = Lexicon::parse_tsv(lt::kTrafficLexicon);
  std::set<std::string> rows;
  for (const auto& ex : gen_examples(table1, table1_lex)) {
    rows.insert(ex.occurrence.category + " " + std::to_string(ex.occurrence.begin + 1) + ":" +
                std::to_string(ex.occurrence.end) + " " + (ex.label ? "True" : "False"));
  }
  const std::set<std::string> expected{"SL:DESTINATION 6:8 True", "SL:TYPE_RELATION 6:6 True",
                                       "SL:CONTACT 6:6 False", "SL:SEARCH_RADIUS 5:5 False",
                                       "SL:DESTINATION 8:8 False"};
  const bool fixture = rows == expected;
  int oracle_errors = 0;
  for (const Example& ex : w.test) {
    auto kept = oracle_filter(match_spans(ex.utterance, w.lexicon), ex.tree);
    for (const auto& occ : kept) {
      oracle_errors += (occ.verdict == Verdict::kKept) != is_gold_slot(ex.tree, occ);
    }
  }
  return {acc >= kDisambAccuracy && monotone_violations == 0 && fixture && oracle_errors == 0,
          "held-out accuracy " + fmt("%.4f", acc) + " on " + std::to_string(held.size()) +
              " examples, " + std::to_string(monotone_violations) +
              " threshold violations, worked example " + (fixture ? "reproduced" : "differs")};
}

Outcome adaptation(const World& w, const lt::CliRunner& scratch) {
  const FilterSetup filter = w.model_filter();
  const double lex_clean = w.run(*w.lex_model, filter, Scenario::kUpdatedLexicon, w.test);
  const double lex_mod = w.run(*w.lex_model, filter, Scenario::kUpdatedLexicon, w.modified.corpus);
  const double base_clean = w.run(*w.base, {}, Scenario::kPlain, w.test);
  const double base_mod = w.run(*w.base, {}, Scenario::kPlain, w.modified.corpus);
  const double lex_loss = points(lex_clean - lex_mod);
  const double base_loss = points(base_clean - base_mod);

  // The lexicon update touches no parameter.
  const std::string before = scratch.path("lex_before.ckpt");
  const std::string after = scratch.path("lex_after.ckpt");
  w.lex_model->save(before);
  Lexicon updated = w.lexicon;
  for (const auto& [category, values] : w.catalog.values) updated.add_entries(category, values);
  w.lex_model->check_lexicon(updated);
  evaluate_parser(*w.lex_model, w.modified.corpus, &updated, filter);
  w.lex_model->save(after);
  const bool same_hash = file_hash(before) == file_hash(after);
  const bool grew = updated.stats().unique_values > w.lexicon.stats().unique_values;

  const double fraction =
      static_cast<double>(w.modified.modified_utterances) / static_cast<double>(w.test.size());
  char buf[320];
  std::snprintf(buf, sizeof buf,
                "%.1f%% modified (p_replace=%.4f); lex-gr %.2f -> %.2f (-%.2f pts), "
                "base %.2f -> %.2f (-%.2f pts), checkpoint hash %s",
                points(fraction), w.p_replace, points(lex_clean), points(lex_mod), lex_loss,
                points(base_clean), points(base_mod), base_loss,
                same_hash ? "unchanged" : "CHANGED");
  return {lex_loss <= kMaxLexiconLossPoints && base_loss > lex_loss && same_hash && grew, buf};
}

Outcome ablations(const World& w) {
  const FilterSetup filter = w.model_filter();
  const double updated = w.run(*w.lex_model, filter, Scenario::kUpdatedLexicon, w.modified.corpus);
  const double stale = w.run(*w.lex_model, filter, Scenario::kStaleLexicon, w.modified.corpus);
  const double oracle = w.run(*w.lex_oracle, {FilterKind::kOracle, nullptr, 0.5},
                              Scenario::kUpdatedLexicon, w.modified.corpus);
  const double regex = w.run(*w.base, {}, Scenario::kRegexBaseline, w.modified.corpus);
  char buf[256];
  std::snprintf(buf, sizeof buf,
                "modified set: stale %.2f <= updated %.2f; oracle filter %.2f >= model filter "
                "%.2f (regex baseline %.2f, not gated)",
                points(stale), points(updated), points(oracle), points(updated), points(regex));
  return {stale <= updated && oracle >= updated, buf};
}

Outcome sweep(const World& w) {
  std::vector<ScenarioModel> models{
      {"lex-gr", w.lex_model.get(), w.model_filter(), Scenario::kUpdatedLexicon},
      {"base", w.base.get(), {}, Scenario::kPlain}};
  ScenarioData data{&w.lexicon, &w.catalog, kModifySeed};
  auto rows = sweep_modification_rate(w.test, w.catalog, kSweepRates, kModifySeed, models, data);
  double lo = 1.0, hi = 0.0;
  bool non_increasing = true;
  std::string lex_series, base_series;
  for (std::size_t r = 0; r < rows.size(); ++r) {
    lo = std::min(lo, rows[r].exact_match[0]);
    hi = std::max(hi, rows[r].exact_match[0]);
    if (r > 0 && points(rows[r].exact_match[1] - rows[r - 1].exact_match[1]) > kSweepSlackPoints) {
      non_increasing = false;
    }
    lex_series += fmt(r ? "/%.2f" : "%.2f", points(rows[r].exact_match[0]));
    base_series += fmt(r ? "/%.2f" : "%.2f", points(rows[r].exact_match[1]));
  }
  const double range = points(hi - lo);
  const double top_fraction = rows.back().modified_fraction;
  return {range < kSweepRangePoints && non_increasing,
          "p_replace 0-0.4 (up to " + fmt("%.1f%%", points(top_fraction)) +
              " modified); lex-gr " + lex_series + " range " + fmt("%.2f pts", range) +
              "; base " + base_series};
}

Outcome metrics_fixtures() {
  int failures = 0;
  for (const auto& fx : lt::bracket_fixtures()) {
    std::vector<ParseTree> pred, gold;
    for (const auto& [p, g] : fx.pairs) {
      pred.push_back(parse_top(p).tree);
      gold.push_back(parse_top(g).tree);
    }
    const BracketScore s = labeled_f1(pred, gold);
    failures += s.gold_spans != fx.gold || s.predicted_spans != fx.predicted ||
                s.matched_spans != fx.matched;
    failures += std::abs(s.precision - fx.precision) > kRatioTolerance;
    failures += std::abs(s.recall - fx.recall) > kRatioTolerance;
    failures += std::abs(s.f1 - fx.f1) > kRatioTolerance;
  }
  Corpus c = generate_toy_corpus(100, 9);
  EvalReport same = evaluate(c, c);
  failures += same.exact_match != 1.0 || same.brackets.f1 != 1.0;
  return {failures == 0, std::to_string(lt::bracket_fixtures().size()) +
                             " fixtures, identical corpora EM=" + fmt("%.1f", same.exact_match) +
                             " F1=" + fmt("%.1f", same.brackets.f1)};
}

Outcome determinism(const lt::CliRunner& cli) {
  auto must = [&](const std::string& args) {
    auto r = cli.run(args);
    if (r.status != 0) throw std::runtime_error("`lexparse " + args + "` failed: " +
                                                cli.last_stderr());
    return r.out;
  };
  must("prep --out-dir det --train-size 80 --dev-size 20 --test-size 40 --seed 11");
  must("lexicon build --train det/train.txt --out det/lex.tsv");
  const std::string common =
      "train --train det/train.txt --dev det/dev.txt --lexicon det/lex.tsv --mode lex-gr "
      "--epochs 3 --seed 5 --set d_word=16 --set d_pos=16 --set d_slot=16 --set d_model=32 "
      "--set n_layers=1 --set d_ff=64 --set d_hidden=32 --set batch_size=4";
  must(common + " --out det/a.ckpt");
  must(common + " --out det/b.ckpt");
  const bool same_bytes = lt::CliRunner::read(cli.path("det/a.ckpt")) ==
                          lt::CliRunner::read(cli.path("det/b.ckpt"));
  std::string reports[2];
  for (int k = 0; k < 2; ++k) {
    const std::string model = k == 0 ? "det/a.ckpt" : "det/b.ckpt";
    must("parse --model " + model + " --input det/test.txt --lexicon det/lex.tsv --output det/p" +
         std::to_string(k) + ".txt");
    reports[k] = must("eval --kv --gold det/test.txt --pred det/p" + std::to_string(k) + ".txt");
  }
  return {same_bytes && reports[0] == reports[1] && !reports[0].empty(),
          std::string("checkpoints ") + (same_bytes ? "byte-equal" : "DIFFER") + ", reports " +
              (reports[0] == reports[1] ? "identical" : "DIFFER")};
}

}  // namespace

int main() {
  lt::CliRunner scratch(LEXPARSE_CLI, "lexparse-acceptance");
  int failed = 0;
  auto report = [&](int id, const char* name, const std::function<Outcome()>& fn) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = fn();
    } catch (const std::exception& e) {
      o = {false, std::string("error: ") + e.what()};
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    failed += !o.pass;
    std::printf("%s  %2d %-24s %s [%.1fs]\n", o.pass ? "PASS" : "FAIL", id, name,
                o.detail.c_str(), secs);
    std::fflush(stdout);
  };

  report(1, "cky-oracle-equivalence", cky_equivalence);
  report(2, "gradient-integrity", gradient_integrity);
  report(3, "loss-augmented-margin", loss_augmented);
  report(4, "tree-machinery", [&] { return tree_machinery(scratch); });
  report(5, "memorization", memorization);

  World world;
  bool fitted = false;
  std::string fit_error;
  try {
    world.fit();
    fitted = true;
  } catch (const std::exception& e) {
    fit_error = e.what();
  }
  auto with_world = [&](const std::function<Outcome()>& fn) {
    return [&, fn] {
      if (!fitted) return Outcome{false, "toy models failed to train: " + fit_error};
      return fn();
    };
  };
  report(6, "disambiguation", with_world([&] { return disambiguation(world); }));
  report(7, "adaptation", with_world([&] { return adaptation(world, scratch); }));
  report(8, "ablation-orderings", with_world([&] { return ablations(world); }));
  report(9, "sweep-stability", with_world([&] { return sweep(world); }));
  report(10, "metrics-fixtures", metrics_fixtures);
  report(11, "determinism", [&] { return determinism(scratch); });

  std::printf("%d of 11 criteria passed\n", 11 - failed);
  return failed == 0 ? 0 : 1;
}
