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

#include "lexparse/chart.hpp"
#include "lexparse/error.hpp"
#include "support.hpp"

using namespace lexparse;
using testing::LabelScore;

namespace {

TableScorer random_table(Rng& rng, std::size_t n, std::size_t num_labels, bool integer) {
  TableScorer t(n, num_labels);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j <= n; ++j) {
      for (std::size_t l = 1; l < num_labels; ++l) {
        t.at(i, j, l) = integer ? static_cast<double>(rng.below(5)) - 2.0 : testing::dyadic(rng);
      }
    }
  }
  return t;
}

LabelScore from_table(const TableScorer& t, const SpanCost* cost = nullptr) {
  return [&t, cost](std::size_t i, std::size_t j, std::size_t, std::size_t l) {
    double s = t.at(i, j, l);
    if (cost) s += (*cost)(i, j, l);
    return s;
  };
}

}  // namespace

TEST_CASE("shape counts are catalan numbers") {
  const std::size_t catalan[] = {1, 1, 2, 5, 14, 42};
  for (std::size_t n = 1; n <= 6; ++n) CHECK(testing::all_shapes(0, n).size() == catalan[n - 1]);
}

TEST_CASE("per-node labeling oracle agrees with full labeled enumeration") {
  Rng rng(8);
  for (int trial = 0; trial < 60; ++trial) {
    std::size_t n = 1 + rng.below(3);
    std::size_t num_labels = 2 + rng.below(2);
    LabelVocab labels = testing::numbered_labels(num_labels - 1);
    TableScorer t = random_table(rng, n, num_labels, trial % 2 == 0);
    LabelScore score = from_table(t);
    double best = -1e300;
    for (const ParseTree& tree : testing::all_labeled_trees(0, n, labels)) {
      best = std::max(best, testing::sum_tree(tree, score, labels));
    }
    CHECK(testing::oracle_decode(score, labels, n).score == best);
  }
}

TEST_CASE("cky equals the exhaustive oracle") {
  Rng rng(1);
  for (int trial = 0; trial < 200; ++trial) {
    std::size_t n = 1 + rng.below(6);
    std::size_t num_labels = 2 + rng.below(4);
    LabelVocab labels = testing::numbered_labels(num_labels - 1);
    const bool integer = trial % 3 == 0;
    TableScorer t = random_table(rng, n, num_labels, integer);
    DecodeResult got = cky_decode(t, labels, n);
    testing::OracleResult want = testing::oracle_decode(from_table(t), labels, n);
    CAPTURE(trial);
    CHECK(got.score == want.score);
    CHECK(got.tree == want.tree);
    CHECK(tree_score(t, labels, got.tree, false) == got.score);
  }
}

TEST_CASE("ties go to the lowest fence and lowest label") {
  TableScorer t(3, 3);
  LabelVocab labels = testing::numbered_labels(2);
  DecodeResult r = cky_decode(t, labels, 3);
  CHECK(r.score == 0.0);
  CHECK(r.tree.label.is_dummy());
  CHECK(r.tree.children[0].end == 1);
  CHECK(r.tree.children[1].children[0].end == 2);
  t.at(0, 3, 1) = 1.0;
  t.at(0, 3, 2) = 1.0;
  r = cky_decode(t, labels, 3);
  CHECK(r.tree.label.str() == "IN:L1");
}

TEST_CASE("forced root label") {
  TableScorer t(2, 2);
  LabelVocab labels = testing::numbered_labels(1);
  t.at(0, 2, 1) = -5.0;
  DecodeOptions opt;
  opt.force_root_label = true;
  DecodeResult r = cky_decode(t, labels, 2, opt);
  CHECK(r.tree.label.str() == "IN:L1");
  CHECK(r.score == -5.0);
  CHECK(testing::oracle_decode(from_table(t), labels, 2, true).score == -5.0);
}

TEST_CASE("dummy scores are fixed at zero") {
  TableScorer t(2, 3);
  CHECK_THROWS_AS(t.at(0, 1, 0) = 1.0, Error);
  std::vector<double> out;
  t.score(0, 1, kNoSplit, out);
  CHECK(out[0] == 0.0);
}

TEST_CASE("hamming cost and loss-augmented decode") {
  Rng rng(33);
  for (int trial = 0; trial < 100; ++trial) {
    std::size_t n = 1 + rng.below(5);
    std::size_t num_labels = 2 + rng.below(3);
    LabelVocab labels = testing::numbered_labels(num_labels - 1);
    TableScorer t = random_table(rng, n, num_labels, false);
    const ParseTree gold = testing::random_chart_tree(rng, 0, n, labels, true);
    HammingCost hamming(gold, labels);
    SpanCost cost = hamming.as_function();
    CHECK(hamming.distance(gold) == 0.0);
    DecodeOptions opt;
    opt.force_root_label = true;
    opt.cost = &cost;
    MarginResult m = margin_value(t, labels, gold, opt);
    double gold_score = testing::sum_tree(gold, from_table(t), labels);
    double aug = testing::oracle_decode(from_table(t, &cost), labels, n, true).score;
    CHECK(m.gold_score == gold_score);
    CHECK(m.loss == std::max(0.0, aug - gold_score));
    CHECK(m.loss >= 0.0);
  }
}
