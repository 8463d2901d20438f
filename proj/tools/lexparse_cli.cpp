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

// lexparse command-line front end. Talks to the library through the C API only.

#include <CLI11.hpp>

#include <cinttypes>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "lexparse/lexparse.h"

namespace {

struct CliError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void check(lp_status status) {
  if (status != LP_OK) {
    throw CliError(std::string(lp_status_name(status)) + ": " + lp_last_error());
  }
}

// unique_ptr aliases for the opaque handles.
template <typename T, void (*Free)(T*)>
struct Deleter {
  void operator()(T* p) const { Free(p); }
};
using Corpus = std::unique_ptr<lp_corpus, Deleter<lp_corpus, lp_corpus_free>>;
using Lexicon = std::unique_ptr<lp_lexicon, Deleter<lp_lexicon, lp_lexicon_free>>;
using Catalog = std::unique_ptr<lp_catalog, Deleter<lp_catalog, lp_catalog_free>>;
using Parser = std::unique_ptr<lp_parser, Deleter<lp_parser, lp_parser_free>>;
using Disamb = std::unique_ptr<lp_disamb, Deleter<lp_disamb, lp_disamb_free>>;

std::string take(char* s) {
  std::string out = s ? s : "";
  lp_string_free(s);
  return out;
}

Corpus load_corpus(const std::string& path) {
  lp_corpus* c = nullptr;
  check(lp_corpus_load(path.c_str(), &c));
  return Corpus(c);
}

Lexicon load_lexicon(const std::string& path) {
  lp_lexicon* l = nullptr;
  check(lp_lexicon_load(path.c_str(), &l));
  return Lexicon(l);
}

Catalog load_catalog(const std::string& path) {
  lp_catalog* c = nullptr;
  check(lp_catalog_load(path.c_str(), &c));
  return Catalog(c);
}

Parser load_parser(const std::string& path) {
  lp_parser* p = nullptr;
  check(lp_parser_load(path.c_str(), &p));
  return Parser(p);
}

Disamb load_disamb(const std::string& path) {
  if (path.empty()) return Disamb();
  lp_disamb* d = nullptr;
  check(lp_disamb_load(path.c_str(), &d));
  return Disamb(d);
}

Lexicon maybe_lexicon(const std::string& path) {
  return path.empty() ? Lexicon() : load_lexicon(path);
}

void write_text(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw CliError("cannot write " + path);
  out << text;
  if (!out) throw CliError("write failed: " + path);
}

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CliError("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void print_log(const char* line, void*) { std::cerr << line << "\n"; }

// key=value settings: config file first, then --set, then dedicated flags.
struct Settings {
  std::string config_path;
  std::vector<std::string> overrides;
  std::vector<std::pair<std::string, std::string*>> flags;

  void add_to(CLI::App* app) {
    app->add_option("--config", config_path, "key=value configuration file")
        ->check(CLI::ExistingFile);
    app->add_option("--set", overrides, "Extra key=value setting (repeatable)");
  }

  void flag(CLI::App* app, const std::string& name, const std::string& key, std::string* target,
            const std::string& help) {
    app->add_option(name, *target, help);
    flags.emplace_back(key, target);
  }

  std::string text() const {
    std::string out;
    if (!config_path.empty()) out += read_text(config_path) + "\n";
    for (const auto& o : overrides) {
      if (o.find('=') == std::string::npos) throw CliError("--set expects key=value, got '" + o + "'");
      out += o + "\n";
    }
    for (const auto& [key, value] : flags) {
      if (!value->empty()) out += key + "=" + *value + "\n";
    }
    return out;
  }
};

// Last value per key, in first-appearance order, for printing.
std::string resolved(const std::string& text) {
  std::vector<std::pair<std::string, std::string>> items;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    auto start = line.find_first_not_of(" \t");
    if (start == std::string::npos || line[start] == '#') continue;
    auto eq = line.find('=');
    if (eq == std::string::npos) continue;
    auto trim = [](std::string s) {
      auto a = s.find_first_not_of(" \t\r");
      auto b = s.find_last_not_of(" \t\r");
      return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
    };
    std::string k = trim(line.substr(0, eq)), v = trim(line.substr(eq + 1));
    bool found = false;
    for (auto& item : items) {
      if (item.first == k) {
        item.second = v;
        found = true;
      }
    }
    if (!found) items.emplace_back(k, v);
  }
  std::string out;
  for (const auto& [k, v] : items) out += "  " + k + "=" + v + "\n";
  return out;
}

void print_config(const std::string& verb, const std::string& text, const std::string& seed) {
  std::cout << "[" << verb << "] resolved config\n" << resolved(text);
  std::cout << "  seed=" << (seed.empty() ? "1" : seed) << "\n";
}

std::string seed_of(const std::string& text) {
  std::string seed;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    auto eq = line.find('=');
    if (eq == std::string::npos) continue;
    std::string k = line.substr(0, eq);
    k.erase(0, k.find_first_not_of(" \t"));
    k.erase(k.find_last_not_of(" \t") + 1);
    if (k == "seed") {
      seed = line.substr(eq + 1);
      seed.erase(0, seed.find_first_not_of(" \t"));
      seed.erase(seed.find_last_not_of(" \t\r") + 1);
    }
  }
  return seed;
}

std::vector<double> parse_rates(const std::string& text) {
  std::vector<double> rates;
  std::stringstream ss(text);
  std::string part;
  while (std::getline(ss, part, ',')) {
    try {
      std::size_t used = 0;
      double r = std::stod(part, &used);
      if (used != part.size()) throw std::invalid_argument(part);
      rates.push_back(r);
    } catch (const std::exception&) {
      throw CliError("bad rate '" + part + "'");
    }
  }
  if (rates.empty()) throw CliError("no rates given");
  return rates;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Lexicon-injected semantic parsing toolkit"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(lp_version()));

  // prep
  auto* prep = app.add_subcommand("prep", "Generate the toy corpus or normalize a corpus file");
  std::string prep_out, prep_in, prep_output;
  std::size_t n_train = 400, n_dev = 100, n_test = 400;
  std::uint64_t prep_seed = 1;
  prep->add_option("--out-dir", prep_out, "Write train/dev/test/catalog toy files here");
  prep->add_option("--input", prep_in, "Corpus to normalize (TSV or bracketed lines)")
      ->check(CLI::ExistingFile);
  prep->add_option("--output", prep_output, "Normalized corpus path");
  prep->add_option("--train-size", n_train, "Toy training utterances")->capture_default_str();
  prep->add_option("--dev-size", n_dev, "Toy development utterances")->capture_default_str();
  prep->add_option("--test-size", n_test, "Toy test utterances")->capture_default_str();
  prep->add_option("--seed", prep_seed, "Generator seed")->capture_default_str();

  // train
  auto* train = app.add_subcommand("train", "Train a parser");
  std::string tr_train, tr_dev, tr_lexicon, tr_disamb, tr_out;
  std::string tr_mode, tr_filter, tr_threshold, tr_epochs, tr_lr, tr_batch, tr_seed, tr_dmodel;
  Settings tr_settings;
  train->add_option("--train", tr_train, "Training corpus")->required()->check(CLI::ExistingFile);
  train->add_option("--dev", tr_dev, "Development corpus")->check(CLI::ExistingFile);
  train->add_option("--lexicon", tr_lexicon, "Slot lexicon TSV")->check(CLI::ExistingFile);
  train->add_option("--disamb", tr_disamb, "Disambiguator checkpoint")->check(CLI::ExistingFile);
  train->add_option("--out", tr_out, "Checkpoint path")->required();
  tr_settings.add_to(train);
  tr_settings.flag(train, "--mode", "mode", &tr_mode, "base | split | lex | lex-gr");
  tr_settings.flag(train, "--filter", "filter", &tr_filter, "none | model | oracle");
  tr_settings.flag(train, "--threshold", "threshold", &tr_threshold, "Disambiguator threshold");
  tr_settings.flag(train, "--epochs", "epochs", &tr_epochs, "Training epochs");
  tr_settings.flag(train, "--lr", "lr", &tr_lr, "Adam learning rate");
  tr_settings.flag(train, "--batch-size", "batch_size", &tr_batch, "Utterances per update");
  tr_settings.flag(train, "--seed", "seed", &tr_seed, "Seed for init and shuffling");
  tr_settings.flag(train, "--d-model", "d_model", &tr_dmodel, "Encoder width");

  // parse
  auto* parse = app.add_subcommand("parse", "Parse utterances with a trained parser");
  std::string pa_model, pa_input, pa_output, pa_lexicon, pa_disamb, pa_filter, pa_threshold;
  Settings pa_settings;
  parse->add_option("--model", pa_model, "Parser checkpoint")->required()->check(CLI::ExistingFile);
  parse->add_option("--input", pa_input, "Trees or tokenized utterances, one per line")
      ->required()
      ->check(CLI::ExistingFile);
  parse->add_option("--output", pa_output, "Predicted trees (default stdout)");
  parse->add_option("--lexicon", pa_lexicon, "Slot lexicon TSV")->check(CLI::ExistingFile);
  parse->add_option("--disamb", pa_disamb, "Disambiguator checkpoint")->check(CLI::ExistingFile);
  pa_settings.add_to(parse);
  pa_settings.flag(parse, "--filter", "filter", &pa_filter, "none | model | oracle");
  pa_settings.flag(parse, "--threshold", "threshold", &pa_threshold, "Disambiguator threshold");

  // eval
  auto* eval = app.add_subcommand("eval", "Compare predicted trees with gold trees");
  std::string ev_pred, ev_gold;
  bool ev_kv = false;
  eval->add_option("--pred", ev_pred, "Predicted corpus")->required()->check(CLI::ExistingFile);
  eval->add_option("--gold", ev_gold, "Gold corpus")->required()->check(CLI::ExistingFile);
  eval->add_flag("--kv", ev_kv, "key=value report");

  // lexicon
  auto* lex = app.add_subcommand("lexicon", "Build, extend and inspect slot lexicons");
  lex->require_subcommand(1);
  auto* lex_build = lex->add_subcommand("build", "Collect slot values from a training corpus");
  std::string lb_train, lb_out;
  lex_build->add_option("--train", lb_train, "Training corpus")->required()->check(CLI::ExistingFile);
  lex_build->add_option("--out", lb_out, "Lexicon TSV")->required();
  auto* lex_add = lex->add_subcommand("add", "Add values to existing categories");
  std::string la_lexicon, la_category, la_value, la_catalog, la_out;
  lex_add->add_option("--lexicon", la_lexicon, "Lexicon TSV")->required()->check(CLI::ExistingFile);
  lex_add->add_option("--category", la_category, "Slot category, e.g. SL:LOCATION");
  lex_add->add_option("--value", la_value, "Space-separated value tokens");
  lex_add->add_option("--catalog", la_catalog, "Catalog TSV of new values")->check(CLI::ExistingFile);
  lex_add->add_option("--out", la_out, "Output lexicon (default: overwrite --lexicon)");
  auto* lex_stats = lex->add_subcommand("stats", "Print category and value counts");
  std::string ls_lexicon;
  lex_stats->add_option("--lexicon", ls_lexicon, "Lexicon TSV")->required()->check(CLI::ExistingFile);

  // disamb
  auto* dis = app.add_subcommand("disamb", "Slot disambiguation classifier");
  dis->require_subcommand(1);
  auto* dis_train = dis->add_subcommand("train", "Train the classifier");
  std::string dt_train, dt_heldout, dt_lexicon, dt_out, dt_epochs, dt_seed, dt_lr, dt_dropout;
  Settings dt_settings;
  dis_train->add_option("--train", dt_train, "Training corpus")->required()->check(CLI::ExistingFile);
  dis_train->add_option("--heldout", dt_heldout, "Held-out corpus")->check(CLI::ExistingFile);
  dis_train->add_option("--lexicon", dt_lexicon, "Lexicon TSV")->required()->check(CLI::ExistingFile);
  dis_train->add_option("--out", dt_out, "Checkpoint path")->required();
  dt_settings.add_to(dis_train);
  dt_settings.flag(dis_train, "--epochs", "epochs", &dt_epochs, "Training epochs");
  dt_settings.flag(dis_train, "--lr", "lr", &dt_lr, "Adam learning rate");
  dt_settings.flag(dis_train, "--seed", "seed", &dt_seed, "Seed");
  dt_settings.flag(dis_train, "--word-dropout", "word_dropout", &dt_dropout, "Word dropout rate");
  auto* dis_eval = dis->add_subcommand("eval", "Accuracy on a corpus's generated examples");
  std::string de_model, de_corpus, de_lexicon;
  dis_eval->add_option("--model", de_model, "Checkpoint")->required()->check(CLI::ExistingFile);
  dis_eval->add_option("--corpus", de_corpus, "Corpus")->required()->check(CLI::ExistingFile);
  dis_eval->add_option("--lexicon", de_lexicon, "Lexicon TSV")->required()->check(CLI::ExistingFile);
  auto* dis_filter = dis->add_subcommand("filter", "Kept/Removed verdicts for every match");
  std::string df_model, df_corpus, df_lexicon, df_out;
  double df_threshold = 0.5;
  dis_filter->add_option("--model", df_model, "Checkpoint")->required()->check(CLI::ExistingFile);
  dis_filter->add_option("--corpus", df_corpus, "Corpus")->required()->check(CLI::ExistingFile);
  dis_filter->add_option("--lexicon", df_lexicon, "Lexicon TSV")->required()->check(CLI::ExistingFile);
  dis_filter->add_option("--threshold", df_threshold, "Keep if P(true) >= threshold")
      ->capture_default_str();
  dis_filter->add_option("--out", df_out, "Output TSV (default stdout)");
  auto* dis_examples = dis->add_subcommand("examples", "Write labeled match examples");
  std::string dx_corpus, dx_lexicon, dx_out;
  dis_examples->add_option("--corpus", dx_corpus, "Corpus")->required()->check(CLI::ExistingFile);
  dis_examples->add_option("--lexicon", dx_lexicon, "Lexicon TSV")->required()->check(CLI::ExistingFile);
  dis_examples->add_option("--out", dx_out, "Output TSV (default stdout)");

  // simulate
  auto* sim = app.add_subcommand("simulate", "Unseen slot value experiments");
  sim->require_subcommand(1);
  auto* sim_gen = sim->add_subcommand("generate", "Write a modified test set");
  std::string sg_test, sg_catalog, sg_out, sg_log;
  double sg_p = -1.0, sg_target = -1.0;
  std::uint64_t sg_seed = 1;
  sim_gen->add_option("--test", sg_test, "Test corpus")->required()->check(CLI::ExistingFile);
  sim_gen->add_option("--catalog", sg_catalog, "New value catalog")->required()->check(CLI::ExistingFile);
  sim_gen->add_option("--p-replace", sg_p, "Replacement probability per eligible slot");
  sim_gen->add_option("--target-fraction", sg_target, "Calibrate p-replace to this modified fraction");
  sim_gen->add_option("--seed", sg_seed, "Seed")->capture_default_str();
  sim_gen->add_option("--out", sg_out, "Modified corpus")->required();
  sim_gen->add_option("--log", sg_log, "Modification log TSV");
  auto* sim_run = sim->add_subcommand("run", "Evaluate one parser under a scenario");
  std::string sr_model, sr_test, sr_lexicon, sr_catalog, sr_disamb, sr_scenario, sr_filter,
      sr_threshold, sr_seed;
  Settings sr_settings;
  sim_run->add_option("--model", sr_model, "Parser checkpoint")->required()->check(CLI::ExistingFile);
  sim_run->add_option("--test", sr_test, "Test corpus")->required()->check(CLI::ExistingFile);
  sim_run->add_option("--lexicon", sr_lexicon, "Base lexicon")->check(CLI::ExistingFile);
  sim_run->add_option("--catalog", sr_catalog, "New value catalog")->check(CLI::ExistingFile);
  sim_run->add_option("--disamb", sr_disamb, "Disambiguator checkpoint")->check(CLI::ExistingFile);
  sr_settings.add_to(sim_run);
  sr_settings.flag(sim_run, "--scenario", "scenario", &sr_scenario, "plain | updated | stale | regex");
  sr_settings.flag(sim_run, "--filter", "filter", &sr_filter, "none | model | oracle");
  sr_settings.flag(sim_run, "--threshold", "threshold", &sr_threshold, "Disambiguator threshold");
  sr_settings.flag(sim_run, "--seed", "seed", &sr_seed, "Seed for substitutions");
  auto* sim_sweep = sim->add_subcommand("sweep", "Exact match across modification rates");
  std::string ss_test, ss_catalog, ss_lexicon, ss_disamb, ss_rates = "0,0.1,0.2,0.3,0.4", ss_out;
  std::vector<std::string> ss_models;
  std::uint64_t ss_seed = 1;
  sim_sweep->add_option("--test", ss_test, "Test corpus")->required()->check(CLI::ExistingFile);
  sim_sweep->add_option("--catalog", ss_catalog, "New value catalog")->required()->check(CLI::ExistingFile);
  sim_sweep->add_option("--lexicon", ss_lexicon, "Base lexicon")->check(CLI::ExistingFile);
  sim_sweep->add_option("--disamb", ss_disamb, "Disambiguator checkpoint")->check(CLI::ExistingFile);
  sim_sweep->add_option("--rates", ss_rates, "Comma-separated p-replace values")->capture_default_str();
  sim_sweep->add_option("--model", ss_models,
                        "path=CKPT,name=N[,scenario=..][,filter=..][,threshold=..] (repeatable)")
      ->required();
  sim_sweep->add_option("--seed", ss_seed, "Seed")->capture_default_str();
  sim_sweep->add_option("--out", ss_out, "Sweep TSV (default stdout)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*prep) {
      if (!prep_out.empty()) {
        std::cout << "[prep] toy corpus seed=" << prep_seed << " train=" << n_train
                  << " dev=" << n_dev << " test=" << n_test << "\n";
        // One generation, split three ways, so no utterance draw depends on split sizes.
        lp_corpus* all_raw = nullptr;
        check(lp_corpus_toy(n_train + n_dev + n_test, prep_seed, &all_raw));
        Corpus all(all_raw);
        std::error_code ec;
        std::filesystem::create_directories(prep_out, ec);
        if (ec) throw CliError("cannot create " + prep_out + ": " + ec.message());
        std::string parts[3];
        for (std::size_t i = 0; i < lp_corpus_size(all.get()); ++i) {
          char* line = nullptr;
          check(lp_corpus_line(all.get(), i, &line));
          int part = i < n_train ? 0 : (i < n_train + n_dev ? 1 : 2);
          parts[part] += take(line) + "\n";
        }
        write_text(prep_out + "/train.txt", parts[0]);
        write_text(prep_out + "/dev.txt", parts[1]);
        write_text(prep_out + "/test.txt", parts[2]);
        lp_catalog* cat = nullptr;
        check(lp_catalog_toy(&cat));
        Catalog catalog(cat);
        check(lp_catalog_save(catalog.get(), (prep_out + "/catalog.tsv").c_str()));
        std::cout << "wrote " << prep_out << "/{train,dev,test}.txt and catalog.tsv\n";
      } else if (!prep_in.empty()) {
        if (prep_output.empty()) throw CliError("--input needs --output");
        Corpus c = load_corpus(prep_in);
        check(lp_corpus_save(c.get(), prep_output.c_str()));
        std::cout << "normalized " << lp_corpus_size(c.get()) << " utterances to " << prep_output
                  << "\n";
      } else {
        throw CliError("prep needs --out-dir or --input");
      }
    } else if (*train) {
      std::string config = tr_settings.text();
      print_config("train", config, seed_of(config));
      Corpus tc = load_corpus(tr_train);
      Corpus dc = tr_dev.empty() ? Corpus() : load_corpus(tr_dev);
      Lexicon lexicon = maybe_lexicon(tr_lexicon);
      Disamb disamb = load_disamb(tr_disamb);
      lp_parser* p = nullptr;
      check(lp_parser_train(tc.get(), dc.get(), lexicon.get(), disamb.get(), config.c_str(),
                            print_log, nullptr, &p));
      Parser parser(p);
      check(lp_parser_save(parser.get(), tr_out.c_str()));
      char* cfg = nullptr;
      check(lp_parser_config(parser.get(), &cfg));
      std::cout << "[train] model config\n" << resolved(take(cfg));
      std::uint64_t hash = 0;
      check(lp_file_hash(tr_out.c_str(), &hash));
      std::printf("saved %s hash=%016" PRIx64 "\n", tr_out.c_str(), hash);
    } else if (*parse) {
      std::string options = pa_settings.text();
      print_config("parse", options, "");
      Parser parser = load_parser(pa_model);
      lp_corpus* in_raw = nullptr;
      check(lp_corpus_load_input(pa_input.c_str(), &in_raw));
      Corpus input(in_raw);
      Lexicon lexicon = maybe_lexicon(pa_lexicon);
      Disamb disamb = load_disamb(pa_disamb);
      lp_corpus* out_raw = nullptr;
      check(lp_parser_parse(parser.get(), input.get(), lexicon.get(), disamb.get(),
                            options.c_str(), &out_raw));
      Corpus out(out_raw);
      if (pa_output.empty()) {
        for (std::size_t i = 0; i < lp_corpus_size(out.get()); ++i) {
          char* line = nullptr;
          check(lp_corpus_line(out.get(), i, &line));
          std::cout << take(line) << "\n";
        }
      } else {
        check(lp_corpus_save(out.get(), pa_output.c_str()));
        std::cout << "parsed " << lp_corpus_size(out.get()) << " utterances to " << pa_output
                  << "\n";
      }
    } else if (*eval) {
      Corpus pred = load_corpus(ev_pred);
      Corpus gold = load_corpus(ev_gold);
      char* text = nullptr;
      char* kv = nullptr;
      check(lp_evaluate(pred.get(), gold.get(), nullptr, &text, &kv));
      std::string t = take(text), k = take(kv);
      std::cout << (ev_kv ? k : t);
    } else if (*lex_build) {
      Corpus c = load_corpus(lb_train);
      lp_lexicon* l = nullptr;
      std::size_t total = 0;
      check(lp_lexicon_build(c.get(), &l, &total));
      Lexicon lexicon(l);
      check(lp_lexicon_save(lexicon.get(), lb_out.c_str()));
      std::size_t cats = 0, unique = 0;
      check(lp_lexicon_stats(lexicon.get(), &cats, &unique));
      std::cout << "categories=" << cats << "\nunique_values=" << unique
                << "\ntotal_values=" << total << "\n";
    } else if (*lex_add) {
      Lexicon lexicon = load_lexicon(la_lexicon);
      if (la_catalog.empty() && (la_category.empty() || la_value.empty())) {
        throw CliError("lexicon add needs --catalog or both --category and --value");
      }
      if (!la_category.empty() || !la_value.empty()) {
        if (la_category.empty() || la_value.empty()) {
          throw CliError("--category and --value go together");
        }
        check(lp_lexicon_add(lexicon.get(), la_category.c_str(), la_value.c_str()));
      }
      if (!la_catalog.empty()) {
        Catalog catalog = load_catalog(la_catalog);
        check(lp_lexicon_add_catalog(lexicon.get(), catalog.get()));
      }
      const std::string& out = la_out.empty() ? la_lexicon : la_out;
      check(lp_lexicon_save(lexicon.get(), out.c_str()));
      std::size_t cats = 0, unique = 0;
      check(lp_lexicon_stats(lexicon.get(), &cats, &unique));
      std::cout << "categories=" << cats << "\nunique_values=" << unique << "\n";
    } else if (*lex_stats) {
      Lexicon lexicon = load_lexicon(ls_lexicon);
      std::size_t cats = 0, unique = 0;
      check(lp_lexicon_stats(lexicon.get(), &cats, &unique));
      std::cout << "categories=" << cats << "\nunique_values=" << unique << "\n";
    } else if (*dis_train) {
      std::string config = dt_settings.text();
      print_config("disamb train", config, seed_of(config));
      Corpus tc = load_corpus(dt_train);
      Corpus hc = dt_heldout.empty() ? Corpus() : load_corpus(dt_heldout);
      Lexicon lexicon = load_lexicon(dt_lexicon);
      lp_disamb* d = nullptr;
      check(lp_disamb_train(tc.get(), hc.get(), lexicon.get(), config.c_str(), print_log, nullptr,
                            &d));
      Disamb model(d);
      check(lp_disamb_save(model.get(), dt_out.c_str()));
      std::uint64_t hash = 0;
      check(lp_file_hash(dt_out.c_str(), &hash));
      std::printf("saved %s hash=%016" PRIx64 "\n", dt_out.c_str(), hash);
    } else if (*dis_eval) {
      Disamb model = load_disamb(de_model);
      Corpus c = load_corpus(de_corpus);
      Lexicon lexicon = load_lexicon(de_lexicon);
      double acc = 0.0;
      std::size_t n = 0;
      check(lp_disamb_eval(model.get(), c.get(), lexicon.get(), &acc, &n));
      std::printf("examples=%zu\naccuracy=%.6f\n", n, acc);
    } else if (*dis_filter) {
      Disamb model = load_disamb(df_model);
      Corpus c = load_corpus(df_corpus);
      Lexicon lexicon = load_lexicon(df_lexicon);
      char* tsv = nullptr;
      check(lp_disamb_filter(model.get(), c.get(), lexicon.get(), df_threshold, &tsv));
      write_text(df_out, take(tsv));
    } else if (*dis_examples) {
      Corpus c = load_corpus(dx_corpus);
      Lexicon lexicon = load_lexicon(dx_lexicon);
      char* tsv = nullptr;
      check(lp_disamb_examples(c.get(), lexicon.get(), &tsv));
      write_text(dx_out, take(tsv));
    } else if (*sim_gen) {
      Corpus test = load_corpus(sg_test);
      Catalog catalog = load_catalog(sg_catalog);
      double p = sg_p;
      if (sg_target >= 0.0) {
        if (sg_p >= 0.0) throw CliError("give --p-replace or --target-fraction, not both");
        check(lp_simulate_calibrate(test.get(), catalog.get(), sg_target, sg_seed, &p));
      } else if (p < 0.0) {
        throw CliError("simulate generate needs --p-replace or --target-fraction");
      }
      lp_corpus* out_raw = nullptr;
      std::size_t modified = 0;
      char* log = nullptr;
      check(lp_simulate_generate(test.get(), catalog.get(), p, sg_seed, &out_raw, &modified, &log));
      Corpus out(out_raw);
      std::string log_text = take(log);
      check(lp_corpus_save(out.get(), sg_out.c_str()));
      if (!sg_log.empty()) write_text(sg_log, log_text);
      std::size_t total = lp_corpus_size(out.get());
      std::printf("seed=%" PRIu64 "\np_replace=%.6f\nmodified_utterances=%zu\nutterances=%zu\n"
                  "modified_fraction=%.6f\n",
                  sg_seed, p, modified, total, total ? double(modified) / double(total) : 0.0);
    } else if (*sim_run) {
      std::string options = sr_settings.text();
      print_config("simulate run", options, seed_of(options));
      Parser parser = load_parser(sr_model);
      Corpus test = load_corpus(sr_test);
      Lexicon lexicon = maybe_lexicon(sr_lexicon);
      Catalog catalog = sr_catalog.empty() ? Catalog() : load_catalog(sr_catalog);
      Disamb disamb = load_disamb(sr_disamb);
      char* kv = nullptr;
      check(lp_simulate_run(parser.get(), disamb.get(), lexicon.get(), catalog.get(), test.get(),
                            options.c_str(), nullptr, &kv));
      std::cout << take(kv);
    } else if (*sim_sweep) {
      std::printf("[simulate sweep] seed=%" PRIu64 " rates=%s\n", ss_seed, ss_rates.c_str());
      Corpus test = load_corpus(ss_test);
      Catalog catalog = load_catalog(ss_catalog);
      Lexicon lexicon = maybe_lexicon(ss_lexicon);
      Disamb disamb = load_disamb(ss_disamb);
      std::vector<double> rates = parse_rates(ss_rates);
      std::vector<Parser> parsers;
      std::vector<std::string> specs;
      for (const auto& m : ss_models) {
        std::string lines, path;
        for (const auto& item : CLI::detail::split(m, ',')) {
          if (item.rfind("path=", 0) == 0) {
            path = item.substr(5);
          } else if (!item.empty()) {
            lines += item + "\n";
          }
        }
        if (path.empty()) throw CliError("--model '" + m + "' lacks path=");
        parsers.push_back(load_parser(path));
        specs.push_back(lines);
      }
      std::vector<const lp_parser*> handles;
      std::vector<const char*> spec_ptrs;
      for (std::size_t i = 0; i < parsers.size(); ++i) {
        handles.push_back(parsers[i].get());
        spec_ptrs.push_back(specs[i].c_str());
      }
      char* tsv = nullptr;
      check(lp_simulate_sweep(test.get(), catalog.get(), lexicon.get(), disamb.get(), rates.data(),
                              rates.size(), ss_seed, handles.data(), spec_ptrs.data(),
                              handles.size(), &tsv));
      write_text(ss_out, take(tsv));
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
