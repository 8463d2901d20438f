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

#include "lexparse/lexparse.h"

#include <cstring>
#include <new>
#include <string>

#include "lexparse/checkpoint.hpp"
#include "lexparse/config.hpp"
#include "lexparse/datasim.hpp"
#include "lexparse/disambiguator.hpp"
#include "lexparse/error.hpp"
#include "lexparse/lexicon.hpp"
#include "lexparse/metrics.hpp"
#include "lexparse/parser.hpp"
#include "lexparse/pipeline.hpp"
#include "lexparse/toy_corpus.hpp"

struct lp_corpus {
  lexparse::Corpus corpus;
};
struct lp_lexicon {
  lexparse::Lexicon lexicon;
};
struct lp_catalog {
  lexparse::NewValueCatalog catalog;
};
struct lp_parser {
  lexparse::ParserModel model;
};
struct lp_disamb {
  lexparse::Disambiguator model;
};

namespace {

thread_local std::string g_last_error;

lp_status status_of(lexparse::ErrorCode code) {
  switch (code) {
    case lexparse::ErrorCode::kInvalidArgument:
      return LP_ERR_INVALID_ARGUMENT;
    case lexparse::ErrorCode::kIo:
      return LP_ERR_IO;
    case lexparse::ErrorCode::kParse:
      return LP_ERR_PARSE;
    case lexparse::ErrorCode::kContract:
      return LP_ERR_CONTRACT;
    case lexparse::ErrorCode::kNumeric:
      return LP_ERR_NUMERIC;
  }
  return LP_ERR_INTERNAL;
}

template <typename F>
lp_status guarded(F&& body) {
  try {
    body();
    g_last_error.clear();
    return LP_OK;
  } catch (const lexparse::Error& e) {
    g_last_error = e.what();
    return status_of(e.code());
  } catch (const std::bad_alloc&) {
    g_last_error = "out of memory";
    return LP_ERR_INTERNAL;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return LP_ERR_INTERNAL;
  }
}

void require(const void* p, const char* what) {
  if (!p) lexparse::throw_error(lexparse::ErrorCode::kInvalidArgument, std::string(what) + " is null");
}

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.data(), s.size() + 1);
  return out;
}

lexparse::KeyValues options_of(const char* text) {
  return text ? lexparse::parse_key_values(text, "options") : lexparse::KeyValues{};
}

[[noreturn]] void unknown_key(const std::string& key) {
  lexparse::throw_error(lexparse::ErrorCode::kInvalidArgument, "unknown option '" + key + "'");
}

struct FilterOptions {
  lexparse::FilterKind kind = lexparse::FilterKind::kNone;
  double threshold = 0.5;
  bool threshold_set = false;

  bool set(const std::string& key, const std::string& value) {
    if (key == "filter") {
      kind = lexparse::filter_kind_from_string(value);
    } else if (key == "threshold") {
      threshold = lexparse::parse_real(key, value);
      threshold_set = true;
    } else {
      return false;
    }
    return true;
  }

  lexparse::FilterSetup setup(const lp_disamb* disamb) const {
    lexparse::FilterSetup f;
    f.kind = kind;
    if (kind == lexparse::FilterKind::kModel) {
      require(disamb, "disambiguator (needed by filter=model)");
      f.disambiguator = &disamb->model;
      f.threshold = threshold_set ? threshold : disamb->model.config().threshold;
    } else {
      f.threshold = threshold;
    }
    return f;
  }
};

void emit(lp_log_fn log, void* user, const std::string& line) {
  if (log) log(line.c_str(), user);
}

}  // namespace

extern "C" {

const char* lp_version(void) { return "0.1.0"; }

const char* lp_last_error(void) { return g_last_error.c_str(); }

const char* lp_status_name(lp_status status) {
  switch (status) {
    case LP_OK:
      return "ok";
    case LP_ERR_INVALID_ARGUMENT:
      return "invalid argument";
    case LP_ERR_IO:
      return "i/o error";
    case LP_ERR_PARSE:
      return "parse error";
    case LP_ERR_CONTRACT:
      return "contract violation";
    case LP_ERR_NUMERIC:
      return "numeric error";
    case LP_ERR_INTERNAL:
      return "internal error";
  }
  return "unknown status";
}

void lp_string_free(char* s) { std::free(s); }

lp_status lp_corpus_load(const char* path, lp_corpus** out) {
  return guarded([&] {
    require(path, "path");
    require(out, "out");
    *out = new lp_corpus{lexparse::load_corpus(path)};
  });
}

lp_status lp_corpus_from_text(const char* text, lp_corpus** out) {
  return guarded([&] {
    require(text, "text");
    require(out, "out");
    *out = new lp_corpus{lexparse::read_corpus(text)};
  });
}

lp_status lp_corpus_load_input(const char* path, lp_corpus** out) {
  return guarded([&] {
    require(path, "path");
    require(out, "out");
    *out = new lp_corpus{lexparse::read_parse_input(lexparse::read_file(path), path)};
  });
}

lp_status lp_corpus_toy(size_t count, uint64_t seed, lp_corpus** out) {
  return guarded([&] {
    require(out, "out");
    *out = new lp_corpus{lexparse::generate_toy_corpus(count, seed)};
  });
}

lp_status lp_corpus_save(const lp_corpus* corpus, const char* path) {
  return guarded([&] {
    require(corpus, "corpus");
    require(path, "path");
    lexparse::save_corpus(path, corpus->corpus);
  });
}

size_t lp_corpus_size(const lp_corpus* corpus) { return corpus ? corpus->corpus.size() : 0; }

lp_status lp_corpus_line(const lp_corpus* corpus, size_t index, char** out) {
  return guarded([&] {
    require(corpus, "corpus");
    require(out, "out");
    if (index >= corpus->corpus.size()) {
      lexparse::throw_error(lexparse::ErrorCode::kInvalidArgument, "line index out of range");
    }
    const auto& ex = corpus->corpus[index];
    *out = dup_string(lexparse::serialize_top(ex.tree, ex.utterance));
  });
}

void lp_corpus_free(lp_corpus* corpus) { delete corpus; }

lp_status lp_lexicon_build(const lp_corpus* corpus, lp_lexicon** out, size_t* total_values) {
  return guarded([&] {
    require(corpus, "corpus");
    require(out, "out");
    lexparse::LexiconStats stats;
    auto lex = lexparse::Lexicon::build(corpus->corpus, &stats);
    if (total_values) *total_values = stats.total_values;
    *out = new lp_lexicon{std::move(lex)};
  });
}

lp_status lp_lexicon_load(const char* path, lp_lexicon** out) {
  return guarded([&] {
    require(path, "path");
    require(out, "out");
    *out = new lp_lexicon{lexparse::Lexicon::load(path)};
  });
}

lp_status lp_lexicon_save(const lp_lexicon* lexicon, const char* path) {
  return guarded([&] {
    require(lexicon, "lexicon");
    require(path, "path");
    lexicon->lexicon.save(path);
  });
}

lp_status lp_lexicon_add(lp_lexicon* lexicon, const char* category, const char* value) {
  return guarded([&] {
    require(lexicon, "lexicon");
    require(category, "category");
    require(value, "value");
    lexicon->lexicon.add_entries(category, {lexparse::split_tokens(value)});
  });
}

lp_status lp_lexicon_add_catalog(lp_lexicon* lexicon, const lp_catalog* catalog) {
  return guarded([&] {
    require(lexicon, "lexicon");
    require(catalog, "catalog");
    // Copy first so a rejected category leaves the lexicon untouched.
    lexparse::Lexicon updated = lexicon->lexicon;
    for (const auto& [category, values] : catalog->catalog.values) {
      updated.add_entries(category, values);
    }
    lexicon->lexicon = std::move(updated);
  });
}

lp_status lp_lexicon_stats(const lp_lexicon* lexicon, size_t* categories, size_t* unique_values) {
  return guarded([&] {
    require(lexicon, "lexicon");
    auto s = lexicon->lexicon.stats();
    if (categories) *categories = s.categories;
    if (unique_values) *unique_values = s.unique_values;
  });
}

void lp_lexicon_free(lp_lexicon* lexicon) { delete lexicon; }

lp_status lp_catalog_load(const char* path, lp_catalog** out) {
  return guarded([&] {
    require(path, "path");
    require(out, "out");
    *out = new lp_catalog{lexparse::NewValueCatalog::load(path)};
  });
}

lp_status lp_catalog_toy(lp_catalog** out) {
  return guarded([&] {
    require(out, "out");
    *out = new lp_catalog{lexparse::NewValueCatalog::parse_tsv(lexparse::toy_catalog_tsv())};
  });
}

lp_status lp_catalog_save(const lp_catalog* catalog, const char* path) {
  return guarded([&] {
    require(catalog, "catalog");
    require(path, "path");
    lexparse::write_file(path, catalog->catalog.to_tsv());
  });
}

lp_status lp_catalog_validate(const lp_catalog* catalog, const lp_lexicon* base) {
  return guarded([&] {
    require(catalog, "catalog");
    require(base, "lexicon");
    catalog->catalog.validate(base->lexicon);
  });
}

void lp_catalog_free(lp_catalog* catalog) { delete catalog; }

lp_status lp_disamb_train(const lp_corpus* train, const lp_corpus* heldout,
                          const lp_lexicon* lexicon, const char* config, lp_log_fn log,
                          void* user, lp_disamb** out) {
  return guarded([&] {
    require(train, "train corpus");
    require(lexicon, "lexicon");
    require(out, "out");
    lexparse::DisambConfig cfg;
    for (const auto& [k, v] : options_of(config)) {
      if (!lexparse::set_disamb_config_item(cfg, k, v)) unknown_key(k);
    }
    auto train_ex = lexparse::gen_examples(train->corpus, lexicon->lexicon);
    std::vector<lexparse::DisambExample> held;
    if (heldout) held = lexparse::gen_examples(heldout->corpus, lexicon->lexicon);
    emit(log, user, "examples train=" + std::to_string(train_ex.size()) +
                        " heldout=" + std::to_string(held.size()));
    auto model = lexparse::train_disamb(
        train_ex, held, lexicon->lexicon.categories(), cfg, nullptr,
        [&](const lexparse::DisambEpochLog& e) {
          emit(log, user,
               "epoch " + std::to_string(e.epoch) + " loss=" + lexparse::format_double(e.mean_loss) +
                   " heldout_acc=" + lexparse::format_double(e.heldout_accuracy));
        });
    *out = new lp_disamb{std::move(model)};
  });
}

lp_status lp_disamb_load(const char* path, lp_disamb** out) {
  return guarded([&] {
    require(path, "path");
    require(out, "out");
    *out = new lp_disamb{lexparse::Disambiguator::load(path)};
  });
}

lp_status lp_disamb_save(const lp_disamb* model, const char* path) {
  return guarded([&] {
    require(model, "model");
    require(path, "path");
    model->model.save(path);
  });
}

lp_status lp_disamb_eval(const lp_disamb* model, const lp_corpus* corpus,
                         const lp_lexicon* lexicon, double* accuracy, size_t* examples) {
  return guarded([&] {
    require(model, "model");
    require(corpus, "corpus");
    require(lexicon, "lexicon");
    auto ex = lexparse::gen_examples(corpus->corpus, lexicon->lexicon);
    std::vector<bool> labels;
    for (const auto& e : ex) labels.push_back(e.label);
    if (accuracy) {
      *accuracy = lexparse::disamb_accuracy(lexparse::disamb_predictions(model->model, ex), labels);
    }
    if (examples) *examples = ex.size();
  });
}

lp_status lp_disamb_examples(const lp_corpus* corpus, const lp_lexicon* lexicon, char** out_tsv) {
  return guarded([&] {
    require(corpus, "corpus");
    require(lexicon, "lexicon");
    require(out_tsv, "out");
    *out_tsv = dup_string(
        lexparse::examples_to_tsv(lexparse::gen_examples(corpus->corpus, lexicon->lexicon)));
  });
}

lp_status lp_disamb_filter(const lp_disamb* model, const lp_corpus* corpus,
                           const lp_lexicon* lexicon, double threshold, char** out_tsv) {
  return guarded([&] {
    require(model, "model");
    require(corpus, "corpus");
    require(lexicon, "lexicon");
    require(out_tsv, "out");
    std::string text;
    for (const auto& ex : corpus->corpus) {
      auto occs = model->model.filter(ex.utterance, lexparse::match_spans(ex.utterance, lexicon->lexicon),
                                      threshold);
      for (const auto& o : occs) {
        text += o.category + "\t" + std::to_string(o.begin + 1) + ":" + std::to_string(o.end) +
                "\t" + (o.verdict == lexparse::Verdict::kKept ? "Kept" : "Removed") + "\t" +
                lexparse::join_tokens(ex.utterance.tokens, 0, ex.utterance.size()) + "\n";
      }
    }
    *out_tsv = dup_string(text);
  });
}

void lp_disamb_free(lp_disamb* model) { delete model; }

lp_status lp_parser_train(const lp_corpus* train, const lp_corpus* dev, const lp_lexicon* lexicon,
                          const lp_disamb* disamb, const char* config, lp_log_fn log, void* user,
                          lp_parser** out) {
  return guarded([&] {
    require(train, "train corpus");
    require(out, "out");
    lexparse::ParserConfig pcfg;
    lexparse::TrainConfig tcfg;
    FilterOptions fopt;
    for (const auto& [k, v] : options_of(config)) {
      if (!lexparse::set_parser_config_item(pcfg, k, v) &&
          !lexparse::set_train_config_item(tcfg, k, v) && !fopt.set(k, v)) {
        unknown_key(k);
      }
    }
    static const lexparse::Corpus kEmpty;
    const lexparse::Corpus& dev_corpus = dev ? dev->corpus : kEmpty;
    lexparse::OccurrenceTable train_occ, dev_occ;
    std::vector<std::string> categories;
    if (pcfg.uses_lexicon()) {
      require(lexicon, "lexicon (needed by the lexicon modes)");
      lexparse::FilterSetup filter = fopt.setup(disamb);
      train_occ = lexparse::prepare_occurrences(train->corpus, lexicon->lexicon, filter);
      dev_occ = lexparse::prepare_occurrences(dev_corpus, lexicon->lexicon, filter);
      categories = lexicon->lexicon.categories();
    }
    auto model = lexparse::train_parser(
        pcfg, train->corpus, train_occ, dev_corpus, dev_occ, categories, tcfg, nullptr,
        [&](const lexparse::EpochLog& e) {
          std::string line = "epoch " + std::to_string(e.epoch) +
                             " loss=" + lexparse::format_double(e.mean_loss) +
                             " updates=" + std::to_string(e.updates);
          if (e.dev_exact_match >= 0.0) {
            line += " dev_exact_match=" + lexparse::format_double(e.dev_exact_match);
          }
          emit(log, user, line);
        });
    *out = new lp_parser{std::move(model)};
  });
}

lp_status lp_parser_load(const char* path, lp_parser** out) {
  return guarded([&] {
    require(path, "path");
    require(out, "out");
    *out = new lp_parser{lexparse::ParserModel::load(path)};
  });
}

lp_status lp_parser_save(const lp_parser* parser, const char* path) {
  return guarded([&] {
    require(parser, "parser");
    require(path, "path");
    parser->model.save(path);
  });
}

lp_status lp_parser_config(const lp_parser* parser, char** out) {
  return guarded([&] {
    require(parser, "parser");
    require(out, "out");
    *out = dup_string(lexparse::format_key_values(
        lexparse::parser_config_items(parser->model.config())));
  });
}

lp_status lp_parser_parse(const lp_parser* parser, const lp_corpus* input,
                          const lp_lexicon* lexicon, const lp_disamb* disamb,
                          const char* options, lp_corpus** out) {
  return guarded([&] {
    require(parser, "parser");
    require(input, "input");
    require(out, "out");
    FilterOptions fopt;
    for (const auto& [k, v] : options_of(options)) {
      if (!fopt.set(k, v)) unknown_key(k);
    }
    const lexparse::Lexicon* lex = lexicon ? &lexicon->lexicon : nullptr;
    lexparse::FilterSetup filter;
    if (parser->model.config().uses_lexicon()) filter = fopt.setup(disamb);
    *out = new lp_corpus{lexparse::parse_corpus(parser->model, input->corpus, lex, filter)};
  });
}

void lp_parser_free(lp_parser* parser) { delete parser; }

lp_status lp_evaluate(const lp_corpus* predicted, const lp_corpus* gold, double* exact_match,
                      char** report_text, char** report_kv) {
  return guarded([&] {
    require(predicted, "predicted corpus");
    require(gold, "gold corpus");
    auto report = lexparse::evaluate(predicted->corpus, gold->corpus);
    if (exact_match) *exact_match = report.exact_match;
    if (report_text) *report_text = dup_string(lexparse::format_report(report));
    if (report_kv) *report_kv = dup_string(lexparse::format_report_kv(report));
  });
}

lp_status lp_simulate_generate(const lp_corpus* test, const lp_catalog* catalog, double p_replace,
                               uint64_t seed, lp_corpus** out, size_t* modified_utterances,
                               char** log_tsv) {
  return guarded([&] {
    require(test, "test corpus");
    require(catalog, "catalog");
    require(out, "out");
    auto mod = lexparse::generate_modified_test(test->corpus, catalog->catalog, p_replace, seed);
    if (modified_utterances) *modified_utterances = mod.modified_utterances;
    if (log_tsv) *log_tsv = dup_string(lexparse::modifications_to_tsv(mod.log));
    *out = new lp_corpus{std::move(mod.corpus)};
  });
}

lp_status lp_simulate_calibrate(const lp_corpus* test, const lp_catalog* catalog,
                                double target_fraction, uint64_t seed, double* p_replace) {
  return guarded([&] {
    require(test, "test corpus");
    require(catalog, "catalog");
    require(p_replace, "out");
    *p_replace =
        lexparse::calibrate_p_replace(test->corpus, catalog->catalog, target_fraction, seed);
  });
}

namespace {

struct RunOptions {
  std::string name;
  lexparse::Scenario scenario = lexparse::Scenario::kPlain;
  FilterOptions filter;
  std::uint64_t seed = 1;
};

RunOptions parse_run_options(const char* text, bool allow_name) {
  RunOptions r;
  for (const auto& [k, v] : options_of(text)) {
    if (k == "scenario") {
      r.scenario = lexparse::scenario_from_string(v);
    } else if (k == "seed") {
      r.seed = lexparse::parse_seed(k, v);
    } else if (allow_name && k == "name") {
      r.name = v;
    } else if (!r.filter.set(k, v)) {
      unknown_key(k);
    }
  }
  return r;
}

lexparse::ScenarioModel scenario_model(const lp_parser* parser, const lp_disamb* disamb,
                                       const RunOptions& opt) {
  lexparse::ScenarioModel m;
  m.name = opt.name;
  m.parser = &parser->model;
  m.scenario = opt.scenario;
  if (parser->model.config().uses_lexicon()) m.filter = opt.filter.setup(disamb);
  return m;
}

}  // namespace

lp_status lp_simulate_run(const lp_parser* parser, const lp_disamb* disamb,
                          const lp_lexicon* lexicon, const lp_catalog* catalog,
                          const lp_corpus* test, const char* options, double* exact_match,
                          char** report_kv) {
  return guarded([&] {
    require(parser, "parser");
    require(test, "test corpus");
    RunOptions opt = parse_run_options(options, false);
    lexparse::ScenarioData data;
    data.base_lexicon = lexicon ? &lexicon->lexicon : nullptr;
    data.catalog = catalog ? &catalog->catalog : nullptr;
    data.seed = opt.seed;
    auto report = lexparse::run_scenario(scenario_model(parser, disamb, opt), data, test->corpus);
    if (exact_match) *exact_match = report.exact_match;
    if (report_kv) *report_kv = dup_string(lexparse::format_report_kv(report));
  });
}

lp_status lp_simulate_sweep(const lp_corpus* test, const lp_catalog* catalog,
                            const lp_lexicon* lexicon, const lp_disamb* disamb,
                            const double* rates, size_t num_rates, uint64_t seed,
                            const lp_parser* const* parsers, const char* const* specs,
                            size_t num_models, char** out_tsv) {
  return guarded([&] {
    require(test, "test corpus");
    require(catalog, "catalog");
    require(out_tsv, "out");
    if (num_rates && !rates) require(rates, "rates");
    if (num_models && (!parsers || !specs)) require(nullptr, "model list");
    std::vector<lexparse::ScenarioModel> models;
    for (size_t i = 0; i < num_models; ++i) {
      require(parsers[i], "parser");
      RunOptions opt = parse_run_options(specs[i], true);
      if (opt.name.empty()) opt.name = "model" + std::to_string(i + 1);
      models.push_back(scenario_model(parsers[i], disamb, opt));
    }
    lexparse::ScenarioData data;
    data.base_lexicon = lexicon ? &lexicon->lexicon : nullptr;
    data.catalog = &catalog->catalog;
    data.seed = seed;
    std::vector<double> r(rates, rates + num_rates);
    auto rows = lexparse::sweep_modification_rate(test->corpus, catalog->catalog, r, seed, models,
                                                  data);
    *out_tsv = dup_string(lexparse::sweep_to_tsv(rows, models));
  });
}

lp_status lp_file_hash(const char* path, uint64_t* out) {
  return guarded([&] {
    require(path, "path");
    require(out, "out");
    *out = lexparse::file_hash(path);
  });
}

}  // extern "C"
