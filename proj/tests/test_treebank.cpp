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

#include <string>

#include "lexparse/error.hpp"
#include "lexparse/toy_corpus.hpp"
#include "lexparse/treebank.hpp"
#include "support.hpp"

using namespace lexparse;

TEST_CASE("traffic tree spans") {
  Example ex = parse_top(testing::kTrafficTree);
  REQUIRE(ex.utterance.size() == 8);
  CHECK(ex.utterance.tokens[5] == "Dad");
  const ParseTree& dest = ex.tree.children.back();
  CHECK(dest.label.str() == "SL:DESTINATION");
  CHECK(dest.begin == 5);
  CHECK(dest.end == 8);
  CHECK(serialize_top(ex.tree, ex.utterance) == testing::kTrafficTree);
}

TEST_CASE("unary chain collapses into one composite node") {
  Example ex = parse_top(testing::kTrafficTree);
  ParseTree collapsed = collapse_unary(ex.tree);
  const ParseTree& dest = collapsed.children.back();
  CHECK(dest.label.kind == LabelKind::kCollapsedChain);
  CHECK(dest.label.parts ==
        std::vector<std::string>{"SL:DESTINATION", "IN:GET_LOCATION_HOME"});
  CHECK(dest.label.str() == "SL:DESTINATION+IN:GET_LOCATION_HOME");
  CHECK(Label::from_string(dest.label.str()) == dest.label);
  CHECK(expand_unary(collapsed) == ex.tree);
}

TEST_CASE("pre-terminal over one token has no children") {
  Example ex = parse_top("[IN:A [SL:B x ] y ]");
  REQUIRE(ex.tree.children.size() == 2);
  CHECK(ex.tree.children[0].children.empty());
  CHECK(ex.tree.children[1].is_token());
  Example chain = parse_top("[IN:A [SL:B [IN:C x ] ] ]");
  ParseTree c = collapse_unary(chain.tree);
  CHECK(c.label.parts.size() == 3);
  CHECK(c.children.empty());
}

TEST_CASE("binarization is right branching with dummy nodes") {
  Example ex = parse_top("[IN:A a b c d ]");
  ParseTree bin = binarize(ex.tree);
  REQUIRE(bin.children.size() == 2);
  CHECK(bin.children[0].is_token());
  const ParseTree& d1 = bin.children[1];
  CHECK(d1.label.is_dummy());
  CHECK(d1.begin == 1);
  CHECK(d1.end == 4);
  CHECK(d1.children[1].label.is_dummy());
  CHECK(debinarize(bin) == ex.tree);
  CHECK(labeled_spans(bin) == labeled_spans(ex.tree));
}

TEST_CASE("labeled spans flatten chains and skip dummies") {
  Example ex = parse_top(testing::kTrafficTree);
  auto spans = labeled_spans(to_chart_form(ex.tree));
  CHECK(spans == labeled_spans(ex.tree));
  CHECK(spans.size() == 4);
  CHECK(std::count(spans.begin(), spans.end(),
                   LabeledSpan{5, 8, "IN:GET_LOCATION_HOME"}) == 1);
}

TEST_CASE("random trees survive every transform") {
  Rng rng(2024);
  for (int t = 0; t < 300; ++t) {
    std::string text = testing::random_top(rng);
    CAPTURE(text);
    Example ex = parse_top(text);
    validate_tree(ex.tree, ex.utterance.size());
    CHECK(serialize_top(ex.tree, ex.utterance) == text);
    CHECK(debinarize(binarize(ex.tree)) == ex.tree);
    CHECK(expand_unary(collapse_unary(ex.tree)) == ex.tree);
    ParseTree chart = to_chart_form(ex.tree);
    CHECK(from_chart_form(chart) == ex.tree);
    CHECK(labeled_spans(chart) == labeled_spans(ex.tree));
    std::function<void(const ParseTree&)> binary = [&](const ParseTree& n) {
      CHECK((n.children.empty() || n.children.size() == 2));
      for (const auto& c : n.children) binary(c);
    };
    binary(chart);
  }
}

TEST_CASE("malformed input is rejected with line numbers") {
  CHECK_THROWS_AS(parse_top("[IN:A x"), Error);
  CHECK_THROWS_AS(parse_top("[IN:A x ] ]"), Error);
  CHECK_THROWS_AS(parse_top("[XX:A x ]"), Error);
  CHECK_THROWS_AS(parse_top("[IN:A ]"), Error);
  CHECK_THROWS_AS(parse_top("x [IN:A y ]"), Error);
  std::string text;
  for (int i = 1; i <= 20; ++i) text += i == 17 ? "[IN:A x\n" : "[IN:A x ]\n";
  try {
    read_corpus(text, "c.txt");
    FAIL("expected a parse error");
  } catch (const Error& e) {
    CHECK(std::string(e.what()).find("17") != std::string::npos);
    CHECK(e.code() == ErrorCode::kParse);
  }
}

TEST_CASE("tsv rows use the last column") {
  Corpus c = read_corpus("how far\tfoo\t[IN:A how [SL:B far ] ]\n\n[IN:C x ]\n");
  REQUIRE(c.size() == 2);
  CHECK(c[0].utterance.size() == 2);
  CHECK(c[0].tree.children[1].label.str() == "SL:B");
}

TEST_CASE("reindex recomputes spans from leaves") {
  Example ex = parse_top("[IN:A a [SL:B b c ] d ]");
  ex.tree.children[1].children.pop_back();
  reindex_spans(ex.tree);
  CHECK(ex.tree.end == 3);
  CHECK(ex.tree.children[1].end == 2);
  CHECK(ex.tree.children[2].begin == 2);
}

TEST_CASE("toy corpus round trips and is deterministic") {
  Corpus a = generate_toy_corpus(200, 5);
  Corpus b = generate_toy_corpus(200, 5);
  CHECK(write_corpus(a) == write_corpus(b));
  Corpus back = read_corpus(write_corpus(a));
  REQUIRE(back.size() == a.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(back[i].tree == a[i].tree);
    CHECK(back[i].utterance.tokens == a[i].utterance.tokens);
  }
}
