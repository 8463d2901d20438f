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

#include "lexparse/datasim.hpp"

#include <algorithm>
#include <iterator>

#include "lexparse/checkpoint.hpp"
#include "lexparse/error.hpp"

namespace lexparse {

NewValueCatalog NewValueCatalog::parse_tsv(std::string_view text, const std::string& source) {
  NewValueCatalog cat;
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
      std::size_t tab = line.find('\t');
      if (tab == std::string_view::npos) {
        throw_error(ErrorCode::kParse, "expected category<TAB>value");
      }
      std::string category(line.substr(0, tab));
      if (Label::atom(category).kind != LabelKind::kSlot) {
        throw_error(ErrorCode::kParse, "catalog categories must be slots");
      }
      TokenSeq value = split_tokens(line.substr(tab + 1));
      if (value.empty()) throw_error(ErrorCode::kParse, "empty value");
      for (const std::string& tok : value) {
        if (tok.find_first_of("[]") != std::string::npos) {
          throw_error(ErrorCode::kParse, "brackets are not allowed in values");
        }
      }
      auto& list = cat.values[category];
      const TokenSeq lowered = lowercase(value);
      bool dup = std::any_of(list.begin(), list.end(),
                             [&](const TokenSeq& v) { return lowercase(v) == lowered; });
      if (!dup) list.push_back(std::move(value));
    } catch (const Error& e) {
      throw_error(ErrorCode::kParse,
                  source + ": line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return cat;
}

NewValueCatalog NewValueCatalog::load(const std::string& path) {
  return parse_tsv(read_file(path), path);
}

std::string NewValueCatalog::to_tsv() const {
  std::string out;
  for (const auto& [category, list] : values) {
    for (const TokenSeq& v : list) out += category + "\t" + join_tokens(v, 0, v.size()) + "\n";
  }
  return out;
}

void NewValueCatalog::validate(const Lexicon& base) const {
  for (const auto& [category, list] : values) {
    if (!base.has_category(category)) {
      throw_error(ErrorCode::kContract,
                  "catalog category " + category + " is not in the lexicon; new categories "
                  "require retraining");
    }
    for (const TokenSeq& v : list) {
      if (base.contains(category, v)) {
        throw_error(ErrorCode::kContract, "catalog value '" + join_tokens(v, 0, v.size()) +
                                              "' is already a " + category + " value");
      }
    }
  }
}

std::size_t NewValueCatalog::size() const {
  std::size_t n = 0;
  for (const auto& [c, list] : values) n += list.size();
  return n;
}

namespace {

bool is_leaf_slot(const ParseTree& t) {
  if (t.label.kind != LabelKind::kSlot) return false;
  return std::all_of(t.children.begin(), t.children.end(),
                     [](const ParseTree& c) { return c.is_token(); });
}

struct Rewriter {
  const NewValueCatalog& catalog;
  double p;
  Rng& rng;
  const Utterance& source;
  std::size_t line;
  TokenSeq tokens;
  std::vector<Modification> mods;

  ParseTree leaf() {
    ParseTree t;
    t.begin = tokens.size();
    t.end = t.begin + 1;
    return t;
  }

  ParseTree rewrite(const ParseTree& t) {
    if (t.is_token()) {
      ParseTree out = leaf();
      tokens.push_back(source.tokens[t.begin]);
      return out;
    }
    if (is_leaf_slot(t)) {
      auto it = catalog.values.find(t.label.parts[0]);
      if (it != catalog.values.end() && !it->second.empty()) {
        const double u = rng.uniform();
        const std::size_t pick = rng.below(it->second.size());
        if (u < p) {
          const TokenSeq& value = it->second[pick];
          Modification m;
          m.line = line;
          m.begin = t.begin;
          m.end = t.end;
          m.category = it->first;
          m.old_value.assign(source.tokens.begin() + static_cast<std::ptrdiff_t>(t.begin),
                             source.tokens.begin() + static_cast<std::ptrdiff_t>(t.end));
          m.new_value = value;
          mods.push_back(std::move(m));
          ParseTree out;
          out.label = t.label;
          out.begin = tokens.size();
          for (const std::string& tok : value) {
            if (value.size() > 1) out.children.push_back(leaf());
            tokens.push_back(tok);
          }
          out.end = tokens.size();
          return out;
        }
      }
    }
    ParseTree out;
    out.label = t.label;
    out.begin = tokens.size();
    if (t.children.empty()) {
      tokens.push_back(source.tokens[t.begin]);
    } else {
      for (const ParseTree& c : t.children) out.children.push_back(rewrite(c));
    }
    out.end = tokens.size();
    return out;
  }
};

}  // namespace

ModifiedCorpus generate_modified_test(const Corpus& corpus, const NewValueCatalog& catalog,
                                      double p_replace, std::uint64_t seed) {
  if (!(p_replace >= 0.0 && p_replace <= 1.0)) {
    throw_error(ErrorCode::kInvalidArgument, "p_replace must lie in [0, 1]");
  }
  Rng rng(seed);
  ModifiedCorpus out;
  out.corpus.reserve(corpus.size());
  for (std::size_t line = 0; line < corpus.size(); ++line) {
    const Example& ex = corpus[line];
    Rewriter rw{catalog, p_replace, rng, ex.utterance, line, {}, {}};
    ParseTree tree = rw.rewrite(ex.tree);
    if (rw.mods.empty()) {
      out.corpus.push_back(ex);
      continue;
    }
    Example mod;
    mod.utterance.tokens = std::move(rw.tokens);
    mod.tree = std::move(tree);
    mod.utterance.raw = serialize_top(mod.tree, mod.utterance);
    out.corpus.push_back(std::move(mod));
    ++out.modified_utterances;
    out.log.insert(out.log.end(), std::make_move_iterator(rw.mods.begin()),
                   std::make_move_iterator(rw.mods.end()));
  }
  return out;
}

double calibrate_p_replace(const Corpus& corpus, const NewValueCatalog& catalog,
                           double target_fraction, std::uint64_t seed) {
  if (corpus.empty()) throw_error(ErrorCode::kInvalidArgument, "empty corpus");
  auto fraction = [&](double p) {
    return static_cast<double>(
               generate_modified_test(corpus, catalog, p, seed).modified_utterances) /
           static_cast<double>(corpus.size());
  };
  if (target_fraction <= 0.0) return 0.0;
  if (fraction(1.0) < target_fraction) return 1.0;
  double lo = 0.0, hi = 1.0;
  for (int iter = 0; iter < 40; ++iter) {
    const double mid = 0.5 * (lo + hi);
    if (fraction(mid) >= target_fraction) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return hi;
}

std::string modifications_to_tsv(const std::vector<Modification>& log) {
  std::string out = "line\tcategory\told\tnew\n";
  for (const Modification& m : log) {
    out += std::to_string(m.line + 1) + "\t" + m.category + "\t" +
           join_tokens(m.old_value, 0, m.old_value.size()) + "\t" +
           join_tokens(m.new_value, 0, m.new_value.size()) + "\n";
  }
  return out;
}

SubstitutionResult regex_substitute(const Utterance& utterance, const NewValueCatalog& catalog,
                                    const Lexicon& base, Rng& rng) {
  struct Candidate {
    std::size_t begin, end, category_id;
    std::string category;
  };
  const TokenSeq lowered = lowercase(utterance.tokens);
  const std::size_t n = lowered.size();
  std::vector<Candidate> found;
  for (const auto& [category, list] : catalog.values) {
    const std::size_t id = base.category_id(category);
    for (const TokenSeq& value : list) {
      const TokenSeq v = lowercase(value);
      if (v.size() > n) continue;
      for (std::size_t b = 0; b + v.size() <= n; ++b) {
        if (std::equal(v.begin(), v.end(), lowered.begin() + static_cast<std::ptrdiff_t>(b))) {
          found.push_back({b, b + v.size(), id, category});
        }
      }
    }
  }
  std::sort(found.begin(), found.end(), [](const Candidate& a, const Candidate& b) {
    if (a.end - a.begin != b.end - b.begin) return a.end - a.begin > b.end - b.begin;
    if (a.begin != b.begin) return a.begin < b.begin;
    return a.category_id < b.category_id;
  });
  std::vector<bool> taken(n, false);
  std::vector<Candidate> chosen;
  for (const Candidate& c : found) {
    bool free = true;
    for (std::size_t t = c.begin; t < c.end; ++t) free = free && !taken[t];
    if (!free) continue;
    for (std::size_t t = c.begin; t < c.end; ++t) taken[t] = true;
    chosen.push_back(c);
  }
  std::sort(chosen.begin(), chosen.end(),
            [](const Candidate& a, const Candidate& b) { return a.begin < b.begin; });

  SubstitutionResult out;
  std::size_t next = 0;
  for (const Candidate& c : chosen) {
    for (; next < c.begin; ++next) out.utterance.tokens.push_back(utterance.tokens[next]);
    const auto& olds = base.values(c.category);
    if (olds.empty()) {
      throw_error(ErrorCode::kContract, c.category + " has no values to substitute with");
    }
    auto it = olds.begin();
    std::advance(it, static_cast<std::ptrdiff_t>(rng.below(olds.size())));
    Substitution s;
    s.begin = out.utterance.tokens.size();
    out.utterance.tokens.insert(out.utterance.tokens.end(), it->begin(), it->end());
    s.end = out.utterance.tokens.size();
    s.category = c.category;
    s.original.assign(utterance.tokens.begin() + static_cast<std::ptrdiff_t>(c.begin),
                      utterance.tokens.begin() + static_cast<std::ptrdiff_t>(c.end));
    out.mapping.push_back(std::move(s));
    next = c.end;
  }
  for (; next < n; ++next) out.utterance.tokens.push_back(utterance.tokens[next]);
  out.utterance.raw = join_tokens(out.utterance.tokens, 0, out.utterance.size());
  return out;
}

namespace {

struct Item {
  enum Kind { kOpen, kToken, kClose } kind;
  std::string text;
};

void flatten(const ParseTree& t, const Utterance& utt, std::vector<Item>& items,
             std::vector<std::ptrdiff_t>& token_slot) {
  if (t.is_token()) {
    token_slot[t.begin] = static_cast<std::ptrdiff_t>(items.size());
    items.push_back({Item::kToken, utt.tokens[t.begin]});
    return;
  }
  if (t.label.kind == LabelKind::kDummy || t.label.kind == LabelKind::kCollapsedChain) {
    throw_error(ErrorCode::kContract, "undo_substitution expects an original-form tree");
  }
  items.push_back({Item::kOpen, t.label.parts[0]});
  if (t.children.empty()) {
    for (std::size_t p = t.begin; p < t.end; ++p) {
      token_slot[p] = static_cast<std::ptrdiff_t>(items.size());
      items.push_back({Item::kToken, utt.tokens[p]});
    }
  } else {
    for (const ParseTree& c : t.children) flatten(c, utt, items, token_slot);
  }
  items.push_back({Item::kClose, ""});
}

}  // namespace

Example undo_substitution(const ParseTree& tree, const Utterance& substituted,
                          const std::vector<Substitution>& mapping) {
  std::vector<Item> items;
  std::vector<std::ptrdiff_t> slot(substituted.size(), -1);
  flatten(tree, substituted, items, slot);
  std::vector<std::vector<Item>> replacement(items.size());
  std::vector<bool> drop(items.size(), false);
  for (const Substitution& s : mapping) {
    if (s.begin >= s.end || s.end > substituted.size()) {
      throw_error(ErrorCode::kInvalidArgument, "substitution span out of range");
    }
    for (std::size_t p = s.begin; p < s.end; ++p) drop[static_cast<std::size_t>(slot[p])] = true;
    auto first = static_cast<std::size_t>(slot[s.begin]);
    for (const std::string& tok : s.original) replacement[first].push_back({Item::kToken, tok});
  }
  std::vector<Item> rebuilt;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (!replacement[i].empty()) {
      rebuilt.insert(rebuilt.end(), replacement[i].begin(), replacement[i].end());
    } else if (!drop[i]) {
      rebuilt.push_back(items[i]);
    }
  }
  // Remove constituents that lost all their tokens, innermost first.
  for (bool changed = true; changed;) {
    changed = false;
    for (std::size_t i = 0; i + 1 < rebuilt.size(); ++i) {
      if (rebuilt[i].kind == Item::kOpen && rebuilt[i + 1].kind == Item::kClose) {
        rebuilt.erase(rebuilt.begin() + static_cast<std::ptrdiff_t>(i),
                      rebuilt.begin() + static_cast<std::ptrdiff_t>(i + 2));
        changed = true;
        break;
      }
    }
  }
  std::string text;
  for (const Item& it : rebuilt) {
    if (!text.empty()) text += ' ';
    if (it.kind == Item::kOpen) {
      text += "[" + it.text;
    } else if (it.kind == Item::kClose) {
      text += "]";
    } else {
      text += it.text;
    }
  }
  return parse_top(text);
}

std::string to_string(Scenario scenario) {
  switch (scenario) {
    case Scenario::kPlain:
      return "plain";
    case Scenario::kUpdatedLexicon:
      return "updated";
    case Scenario::kStaleLexicon:
      return "stale";
    case Scenario::kRegexBaseline:
      return "regex";
  }
  return "plain";
}

Scenario scenario_from_string(const std::string& text) {
  if (text == "plain") return Scenario::kPlain;
  if (text == "updated") return Scenario::kUpdatedLexicon;
  if (text == "stale") return Scenario::kStaleLexicon;
  if (text == "regex") return Scenario::kRegexBaseline;
  throw_error(ErrorCode::kInvalidArgument,
              "unknown scenario '" + text + "' (expected plain, updated, stale or regex)");
}

EvalReport run_scenario(const ScenarioModel& model, const ScenarioData& data, const Corpus& test) {
  if (!model.parser) throw_error(ErrorCode::kInvalidArgument, "scenario without a parser");
  const bool lex = model.parser->config().uses_lexicon();
  if (lex && !data.base_lexicon) {
    throw_error(ErrorCode::kInvalidArgument, "lexicon parser scenario without a lexicon");
  }
  switch (model.scenario) {
    case Scenario::kPlain:
    case Scenario::kStaleLexicon:
      return evaluate_parser(*model.parser, test, data.base_lexicon, model.filter);
    case Scenario::kUpdatedLexicon: {
      if (!data.catalog || !data.base_lexicon) {
        throw_error(ErrorCode::kInvalidArgument, "the updated scenario needs lexicon and catalog");
      }
      Lexicon updated = *data.base_lexicon;
      for (const auto& [category, list] : data.catalog->values) {
        updated.add_entries(category, list);
      }
      return evaluate_parser(*model.parser, test, &updated, model.filter);
    }
    case Scenario::kRegexBaseline: {
      if (!data.catalog || !data.base_lexicon) {
        throw_error(ErrorCode::kInvalidArgument, "the regex scenario needs lexicon and catalog");
      }
      Rng rng(data.seed);
      Corpus substituted, restored;
      std::vector<std::vector<Substitution>> maps;
      for (const Example& ex : test) {
        SubstitutionResult s = regex_substitute(ex.utterance, *data.catalog,
                                                *data.base_lexicon, rng);
        Example e;
        e.utterance = std::move(s.utterance);
        substituted.push_back(std::move(e));
        maps.push_back(std::move(s.mapping));
      }
      // The oracle filter cannot see gold trees over substituted text.
      FilterSetup filter = model.filter;
      if (filter.kind == FilterKind::kOracle) {
        throw_error(ErrorCode::kInvalidArgument, "the regex baseline has no oracle filter");
      }
      Corpus parsed = parse_corpus(*model.parser, substituted, data.base_lexicon, filter);
      for (std::size_t i = 0; i < parsed.size(); ++i) {
        restored.push_back(undo_substitution(parsed[i].tree, parsed[i].utterance, maps[i]));
      }
      return evaluate(restored, test);
    }
  }
  throw_error(ErrorCode::kInvalidArgument, "unknown scenario");
}

std::vector<SweepRow> sweep_modification_rate(const Corpus& test, const NewValueCatalog& catalog,
                                              const std::vector<double>& rates,
                                              std::uint64_t seed,
                                              const std::vector<ScenarioModel>& models,
                                              const ScenarioData& data) {
  if (!std::is_sorted(rates.begin(), rates.end())) {
    throw_error(ErrorCode::kInvalidArgument, "sweep rates must be sorted ascending");
  }
  std::vector<SweepRow> rows;
  for (double rate : rates) {
    ModifiedCorpus mod = generate_modified_test(test, catalog, rate, seed);
    SweepRow row;
    row.p_replace = rate;
    row.modifications = mod.log.size();
    row.modified_fraction = test.empty() ? 0.0
                                         : static_cast<double>(mod.modified_utterances) /
                                               static_cast<double>(test.size());
    for (const ScenarioModel& m : models) {
      row.exact_match.push_back(run_scenario(m, data, mod.corpus).exact_match);
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

std::string sweep_to_tsv(const std::vector<SweepRow>& rows,
                         const std::vector<ScenarioModel>& models) {
  std::string out = "p_replace\tmodified_fraction\tmodifications";
  for (const ScenarioModel& m : models) out += "\t" + m.name;
  out += "\n";
  for (const SweepRow& r : rows) {
    out += format_double(r.p_replace) + "\t" + format_double(r.modified_fraction) + "\t" +
           std::to_string(r.modifications);
    for (double em : r.exact_match) out += "\t" + format_double(em);
    out += "\n";
  }
  return out;
}

}  // namespace lexparse
