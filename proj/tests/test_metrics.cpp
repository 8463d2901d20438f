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

#include "lexparse/error.hpp"
#include "lexparse/metrics.hpp"
#include "lexparse/toy_corpus.hpp"
#include "support.hpp"

using namespace lexparse;

namespace {

// Ratios such as 2/3 and 0.8 come out of a division chain; the last bit may
// differ from the literal.
constexpr double kRatioTol = 1e-12;

std::vector<ParseTree> trees(const std::vector<std::string>& lines) {
  std::vector<ParseTree> out;
  for (const auto& l : lines) out.push_back(parse_top(l).tree);
  return out;
}

}  // namespace

TEST_CASE("hand-computed bracket fixtures") {
  int index = 0;
  for (const auto& fx : testing::bracket_fixtures()) {
    CAPTURE(index++);
    std::vector<std::string> pred, gold;
    for (const auto& [p, g] : fx.pairs) {
      pred.push_back(p);
      gold.push_back(g);
    }
    BracketScore s = labeled_f1(trees(pred), trees(gold));
    CHECK(s.gold_spans == fx.gold);
    CHECK(s.predicted_spans == fx.predicted);
    CHECK(s.matched_spans == fx.matched);
    CHECK(s.precision == doctest::Approx(fx.precision).epsilon(kRatioTol));
    CHECK(s.recall == doctest::Approx(fx.recall).epsilon(kRatioTol));
    CHECK(s.f1 == doctest::Approx(fx.f1).epsilon(kRatioTol));
  }
}

TEST_CASE("identical corpora score one") {
  Corpus c = generate_toy_corpus(50, 2);
  EvalReport r = evaluate(c, c);
  CHECK(r.exact_match == 1.0);
  CHECK(r.brackets.f1 == 1.0);
  CHECK(r.failures.empty());
  CHECK(format_report_kv(r).find("exact_match=1.0\n") != std::string::npos);
}

TEST_CASE("chart-form predictions are normalized before comparison") {
  Example ex = parse_top(testing::kTrafficTree);
  std::vector<ParseTree> gold{ex.tree};
  std::vector<ParseTree> pred{to_chart_form(ex.tree)};
  CHECK(exact_match(pred, gold) == 1.0);
  CHECK(labeled_f1(pred, gold).f1 == 1.0);
}

TEST_CASE("exact match counts whole trees") {
  auto gold = trees({"[IN:A x [SL:B y ] ]", "[IN:A x y ]", "[IN:C x ]", "[IN:A x y ]"});
  auto pred = trees({"[IN:A x [SL:B y ] ]", "[IN:A [SL:B x ] y ]", "[IN:C x ]", "[IN:B x y ]"});
  EvalReport r = evaluate(pred, gold);
  CHECK(r.exact_match == 0.5);
  CHECK(r.failures == std::vector<std::size_t>{1, 3});
  CHECK(format_report_kv(r).find("failures=2,4") != std::string::npos);
}

TEST_CASE("misaligned inputs are rejected") {
  auto a = trees({"[IN:A x ]"});
  auto b = trees({"[IN:A x ]", "[IN:A y ]"});
  CHECK_THROWS_AS(evaluate(a, b), Error);
  Corpus c1 = read_corpus("[IN:A x ]\n");
  Corpus c2 = read_corpus("[IN:A y ]\n");
  CHECK_THROWS_AS(evaluate(c1, c2), Error);
  CHECK(disamb_accuracy({true, false, true, true}, {true, true, true, true}) == 0.75);
}
