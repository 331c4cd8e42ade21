// Copyright 2026 The spanparser Authors.
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

#include "topdown_decoder.h"

#include <algorithm>
#include <set>

#include "doctest.h"
#include "error.h"
#include "verify/suites.h"
#include "verify/synthetic.h"

using namespace spanparser;

namespace {

std::vector<Span> Visited(const std::vector<DecisionRecord> &records) {
  std::vector<Span> spans;
  for (const DecisionRecord &r : records) spans.push_back(r.span);
  return spans;
}

// Uniform random scores over the gold tree's labels plus one distractor.
TableScores RandomScoresFor(const ParseTree &gold, nn::Rng &rng) {
  std::set<CompositeLabel> seen;
  gold.ForEachConstituent([&](const ParseTree &node) { seen.insert(node.label()); });
  std::vector<CompositeLabel> labels = {CompositeLabel{}};
  labels.insert(labels.end(), seen.begin(), seen.end());
  labels.push_back(CompositeLabel{"ZZ"});
  TableScores table(gold.length(), labels);
  std::uniform_real_distribution<double> u(-1, 1);
  const int n = gold.length();
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j <= n; ++j) {
      for (int l = 0; l < static_cast<int>(labels.size()); ++l) table.label_score({i, j}, l) = u(rng);
      for (int k = i + 1; k < j; ++k) table.split_score(i, k, j) = u(rng);
    }
  }
  return table;
}

const char *kSevenWords =
    "(S (A a) (B (C c) (D d)) (E (F f) (G g) (H h)) (I i))";

}  // namespace

TEST_CASE("greedy decoding builds the example tree") {
  TreebankEntry entry = verify::ExampleEntry();
  TableScores table = verify::ExampleScores();
  TopdownResult result = GreedyDecode(table);
  CHECK(result.tree == entry.tree);
  CHECK(WriteBracketed(entry.sentence, result.tree) == verify::kExampleBracketing);
  // Nine labels and four splits, each scoring 1.
  CHECK(result.score == 13.0);
  CHECK(Visited(result.records) == std::vector<Span>{{0, 5}, {0, 1}, {1, 5}, {1, 4}, {1, 2},
                                                     {2, 4}, {2, 3}, {3, 4}, {4, 5}});
  CHECK(result.decisions.splits.at({1, 5}) == 4);
  CHECK(result.decisions.labels.at({1, 5}).label.empty());
}

TEST_CASE("single word sentences") {
  TableScores table(1, {CompositeLabel{}, CompositeLabel{"X"}, CompositeLabel{"Y"}});
  table.label_score({0, 1}, 0) = 3;
  table.label_score({0, 1}, 2) = 1;
  TopdownResult result = GreedyDecode(table);
  CHECK(result.tree == ParseTree::Node({"Y"}, {ParseTree::Leaf(0)}));
  CHECK(result.split_evals == 0);
  CHECK(result.records.size() == 1);
  CHECK(result.records[0].predicted_split == -1);
}

TEST_CASE("greedy and chart decoding agree when the gold tree dominates") {
  nn::Rng rng(41);
  for (int instance = 0; instance < 30; ++instance) {
    verify::RandomTreeOptions options;
    options.max_children = 2;
    TreebankEntry entry = verify::RandomTree(1 + instance % 8, rng, options);
    TableScores table = RandomScoresFor(entry.tree, rng);
    GoldIndex gold(entry.tree);
    const int n = entry.tree.length();
    for (int i = 0; i < n; ++i) {
      for (int j = i + 1; j <= n; ++j) {
        const auto &labels = table.labels();
        int l = static_cast<int>(std::find(labels.begin(), labels.end(), OracleLabel({i, j}, gold)) -
                                 labels.begin());
        table.label_score({i, j}, l) += 10;
      }
    }
    entry.tree.ForEachConstituent([&](const ParseTree &node) {
      if (node.children().size() == 2) {
        const Span s = node.span();
        table.split_score(s.left, node.children()[0].span().right, s.right) += 10;
      }
    });
    ParseTree greedy = GreedyDecode(table).tree;
    CHECK(greedy == entry.tree);
    CHECK(greedy == CkyDecode(table).tree);
  }
}

TEST_CASE("oracle labels") {
  GoldIndex gold(verify::ExampleEntry().tree);
  CHECK(OracleLabel({2, 4}, gold) == CompositeLabel{"S", "VP"});
  CHECK(OracleLabel({1, 3}, gold).empty());
  CHECK(OracleLabel({0, 5}, gold) == CompositeLabel{"S"});
  CHECK(OracleLabel({4, 5}, gold).empty());
}

TEST_CASE("oracle splits come from the smallest enclosing constituent") {
  GoldIndex gold(ReadBracketed(kSevenWords)[0].tree);
  CHECK(OracleSplits({1, 7}, gold) == std::vector<int>{3, 6});
  CHECK(OracleSplits({2, 7}, gold) == std::vector<int>{3, 6});
  CHECK(OracleSplits({0, 7}, gold) == std::vector<int>{1, 3, 6});
  CHECK(OracleSplits({1, 3}, gold) == std::vector<int>{2});
  CHECK(OracleSplits({4, 6}, gold) == std::vector<int>{5});
  CHECK_THROWS_AS(OracleSplits({2, 3}, gold), StructureError);
}

TEST_CASE("gold rollout visits the binarized gold spans") {
  TreebankEntry entry = verify::ExampleEntry();
  TableScores table(5, {CompositeLabel{}, CompositeLabel{"S"}, CompositeLabel{"NP"},
                        CompositeLabel{"VP"}, CompositeLabel{"S", "VP"}});
  auto records = GoldRollout(table, GoldIndex(entry.tree));
  CHECK(Visited(records) == std::vector<Span>{{0, 5}, {0, 1}, {1, 5}, {1, 4}, {1, 2}, {2, 4},
                                              {2, 3}, {3, 4}, {4, 5}});
  for (const DecisionRecord &r : records) {
    CHECK(r.continuation == r.oracle_split);
    if (r.span.length() >= 2) CHECK(r.oracle_split == r.oracle_splits.front());
  }
}

TEST_CASE("best-scoring oracle split stays inside the oracle set") {
  nn::Rng rng(42);
  for (int instance = 0; instance < 40; ++instance) {
    TreebankEntry entry = verify::RandomTree(2 + instance % 7, rng);
    TableScores table = RandomScoresFor(entry.tree, rng);
    GoldIndex gold(entry.tree);
    RolloutOptions options;
    options.mode = RolloutMode::kExplore;
    options.oracle_split = OracleSplitChoice::kBestScoring;
    for (const DecisionRecord &r : Rollout(table, gold, options)) {
      if (r.span.length() < 2) continue;
      REQUIRE_FALSE(r.oracle_splits.empty());
      const auto &set = r.oracle_splits;
      CHECK(std::find(set.begin(), set.end(), r.oracle_split) != set.end());
      // No oracle split scores higher than the chosen one.
      for (int k : set) {
        CHECK(table.split_score(r.span.left, k, r.span.right) <=
              table.split_score(r.span.left, r.oracle_split, r.span.right));
      }
      CHECK(r.continuation == r.predicted_split);
    }
  }
}

TEST_CASE("exploration follows the model's splits off the gold path") {
  const int n = 6;
  auto entry = ReadBracketed("(S (NP (A a) (B b)) (VP (C c) (D d) (E e) (F f)))")[0];
  TableScores table(n, {CompositeLabel{}, CompositeLabel{"S"}, CompositeLabel{"NP"},
                        CompositeLabel{"VP"}});
  // Always peel off the first word.
  for (int i = 0; i < n; ++i) {
    for (int j = i + 2; j <= n; ++j) table.split_score(i, i + 1, j) = 1;
  }
  GoldIndex gold(entry.tree);
  auto records = ExploreRollout(table, gold);
  std::vector<Span> expected;
  for (int i = 0; i < n - 1; ++i) {
    expected.push_back({i, n});
    expected.push_back({i, i + 1});
  }
  expected.push_back({n - 1, n});
  CHECK(Visited(records) == expected);
  // (1,6) is off the gold path: the only completion keeps the NP/VP boundary.
  CHECK(records[2].oracle_splits == std::vector<int>{2});
  CHECK(records[2].oracle_label.label.empty());
  // (2,6) is the VP itself.
  CHECK(records[4].oracle_splits == std::vector<int>{3, 4, 5});
  CHECK(records[4].oracle_label.label == CompositeLabel{"VP"});
}

TEST_CASE("rollouts reject mismatched or unproducible gold trees") {
  TableScores table(2, {CompositeLabel{}, CompositeLabel{"S"}});
  CHECK_THROWS_AS(GoldRollout(table, GoldIndex(ReadBracketed("(S (A a) (B b) (C c))")[0].tree)),
                  StructureError);
  CHECK_THROWS_AS(GoldRollout(table, GoldIndex(ReadBracketed("(X (A a) (B b))")[0].tree)),
                  DataError);
  CHECK_THROWS_AS(TableScores(0, {CompositeLabel{}}), ShapeError);
}
