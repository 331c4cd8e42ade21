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

#include "chart_decoder.h"

#include <algorithm>
#include <set>

#include "doctest.h"
#include "error.h"
#include "verify/brute_force.h"
#include "verify/synthetic.h"

using namespace spanparser;

namespace {

int IndexOf(const TableScores &table, const CompositeLabel &label) {
  const auto &labels = table.labels();
  return static_cast<int>(std::find(labels.begin(), labels.end(), label) - labels.begin());
}

// Every label appearing in the tree, after the empty label.
std::vector<CompositeLabel> Inventory(const ParseTree &tree) {
  std::set<CompositeLabel> seen;
  tree.ForEachConstituent([&](const ParseTree &node) { seen.insert(node.label()); });
  std::vector<CompositeLabel> labels = {CompositeLabel{}};
  labels.insert(labels.end(), seen.begin(), seen.end());
  labels.push_back(CompositeLabel{"ZZ"});
  return labels;
}

// Sum of label and split scores over a binary tree, walked directly.
double HandScore(const TableScores &table, const ParseTree &node) {
  if (node.is_leaf()) return table.label_score(node.span(), 0);
  double total = table.label_score(node.span(), IndexOf(table, node.label()));
  if (node.children().size() == 2) {
    const Span s = node.span();
    total += table.split_score(s.left, node.children()[0].span().right, s.right);
    for (const ParseTree &child : node.children()) total += HandScore(table, child);
  }
  return total;
}

TreebankEntry RandomBinaryTree(int length, nn::Rng &rng) {
  verify::RandomTreeOptions options;
  options.max_children = 2;
  return verify::RandomTree(length, rng, options);
}

// Gold labels and splits score 10, everything else 0.
TableScores Dominant(const ParseTree &gold) {
  TableScores table(gold.length(), Inventory(gold));
  GoldIndex index(gold);
  const int n = gold.length();
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j <= n; ++j) {
      table.label_score({i, j}, IndexOf(table, index.labeling().Get({i, j}))) = 10;
    }
  }
  gold.ForEachConstituent([&](const ParseTree &node) {
    if (node.children().size() == 2) {
      const Span s = node.span();
      table.split_score(s.left, node.children()[0].span().right, s.right) = 10;
    }
  });
  return table;
}

}  // namespace

TEST_CASE("single word") {
  TableScores table(1, {CompositeLabel{}, CompositeLabel{"A"}, CompositeLabel{"B"}});
  table.label_score({0, 1}, 0) = 5;
  table.label_score({0, 1}, 1) = -1;
  table.label_score({0, 1}, 2) = 0.5;
  ChartResult result = CkyDecode(table);
  CHECK(result.tree == ParseTree::Node({"B"}, {ParseTree::Leaf(0)}));
  CHECK(result.score == 0.5);
  CHECK(TreeScore(table, result.tree) == 0.5);
}

TEST_CASE("matches exhaustive search on random scores") {
  nn::Rng rng(31);
  for (int instance = 0; instance < 60; ++instance) {
    const int n = 2 + instance % 6;
    TableScores table = verify::RandomTableScores(n, 1 + instance % 4, rng);
    ChartResult result = CkyDecode(table);
    CHECK(std::abs(result.score - verify::BruteForceBest(table)) <= 1e-9);
    // Self-consistency: the tree's own score is the reported one.
    CHECK(TreeScore(table, result.tree) == result.score);
    CHECK(result.split_evals == n * (n * n - 1) / 6);
  }
}

TEST_CASE("loss-augmented decoding matches exhaustive search") {
  nn::Rng rng(32);
  for (int instance = 0; instance < 40; ++instance) {
    const int n = 2 + instance % 5;
    TableScores table = verify::RandomTableScores(n, 3, rng);
    TreebankEntry gold_entry = verify::RandomTree(n, rng);
    // Gold labels outside the table's inventory still get a delta.
    SpanLabeling gold = GoldLabeling(gold_entry.tree);
    for (LabelLossKind loss : {LabelLossKind::kZeroOne, LabelLossKind::kHamming}) {
      ChartResult result = LossAugmentedBest(table, gold, loss);
      verify::BruteForceOptions options;
      options.augment_gold = &gold;
      options.loss = loss;
      CHECK(std::abs(result.augmented_score - verify::BruteForceBest(table, options)) <= 1e-9);
      CHECK(result.augmented_score - result.score ==
            doctest::Approx(DecisionsDelta(result.decisions, gold, loss)));
    }
  }
}

TEST_CASE("tree score sums a binary tree's decisions") {
  nn::Rng rng(33);
  for (int instance = 0; instance < 50; ++instance) {
    TreebankEntry entry = RandomBinaryTree(1 + instance % 6, rng);
    TableScores table(entry.tree.length(), Inventory(entry.tree));
    std::uniform_real_distribution<double> u(-1, 1);
    const int n = entry.tree.length();
    for (int i = 0; i < n; ++i) {
      for (int j = i + 1; j <= n; ++j) {
        for (int l = 0; l < static_cast<int>(table.labels().size()); ++l) {
          table.label_score({i, j}, l) = u(rng);
        }
        for (int k = i + 1; k < j; ++k) table.split_score(i, k, j) = u(rng);
      }
    }
    const double hand = HandScore(table, entry.tree);
    CHECK(TreeScore(table, entry.tree) == doctest::Approx(hand).epsilon(1e-12));
    Decisions decisions = RightBranchingDecisions(table, entry.tree);
    CHECK(DecisionsScore(table, decisions) == doctest::Approx(hand).epsilon(1e-12));
  }
}

TEST_CASE("n-ary trees score their best binarization") {
  auto entry = ReadBracketed("(S (A a) (B b) (C c) (D d))")[0];
  TableScores table(4, {CompositeLabel{}, CompositeLabel{"S"}});
  table.label_score({0, 4}, 1) = 1.0;
  // Left-branching ((a b) c) d is rewarded; right-branching is the default.
  table.split_score(0, 3, 4) = 2.0;
  table.split_score(0, 2, 3) = 1.5;
  CHECK(TreeScore(table, entry.tree) == 4.5);
  CHECK(DecisionsScore(table, RightBranchingDecisions(table, entry.tree)) == 1.0);

  ChartResult best = BestGoldBinarization(table, GoldIndex(entry.tree));
  CHECK(best.tree == entry.tree);
  CHECK(best.decisions.splits.at({0, 4}) == 3);
}

TEST_CASE("the root never takes the empty label") {
  TableScores table(2, {CompositeLabel{}, CompositeLabel{"S"}});
  table.label_score({0, 2}, 0) = 100;
  table.label_score({0, 2}, 1) = -100;
  ChartResult result = CkyDecode(table);
  CHECK(result.tree.label() == CompositeLabel{"S"});
  CHECK(result.score == -100);
}

TEST_CASE("zero scores maximize the loss") {
  auto gold = ReadBracketed("(S (NP (D a) (N b)) (V c))")[0].tree;
  TableScores table(3, {CompositeLabel{}, CompositeLabel{"S"}, CompositeLabel{"NP"}});
  SpanLabeling labeling = GoldLabeling(gold);
  ChartResult result = LossAugmentedBest(table, labeling, LabelLossKind::kZeroOne);
  // Five binarized spans, each free to take a wrong label (the root picks NP).
  CHECK(result.augmented_score == 5.0);
  CHECK(result.score == 0.0);
  CHECK(DecisionsDelta(result.decisions, labeling, LabelLossKind::kZeroOne) == 5.0);
}

TEST_CASE("augmented minus plain score counts wrong labels") {
  auto gold = ReadBracketed("(S (NP (D a) (N b)) (V c))")[0].tree;
  TableScores table(3, {CompositeLabel{}, CompositeLabel{"S"}, CompositeLabel{"NP"}});
  // Prefer the gold structure but make the label of (0,2) wrong.
  table.label_score({0, 3}, 1) = 5;
  table.label_score({0, 2}, 1) = 5;  // S instead of NP
  table.label_score({0, 2}, 2) = 1;
  table.split_score(0, 2, 3) = 5;
  table.split_score(0, 1, 2) = 5;
  SpanLabeling labeling = GoldLabeling(gold);
  ChartResult result = LossAugmentedBest(table, labeling, LabelLossKind::kZeroOne);
  CHECK(result.decisions.splits.at({0, 3}) == 2);
  const int wrong = static_cast<int>(DecisionsDelta(result.decisions, labeling,
                                                    LabelLossKind::kZeroOne));
  // Three single words take a nonempty label and (0,2) keeps S.
  CHECK(wrong == 4);
  CHECK(result.augmented_score - result.score == wrong);
}

TEST_CASE("dominant gold scores recover the gold tree") {
  nn::Rng rng(34);
  for (int instance = 0; instance < 30; ++instance) {
    TreebankEntry entry = RandomBinaryTree(1 + instance % 8, rng);
    TableScores table = Dominant(entry.tree);
    CHECK(CkyDecode(table).tree == entry.tree);
    // Even with augmentation the margins of 10 keep the gold tree, whose
    // augmented and plain scores coincide.
    ChartResult augmented =
        LossAugmentedBest(table, GoldLabeling(entry.tree), LabelLossKind::kHamming);
    CHECK(augmented.tree == entry.tree);
    CHECK(augmented.augmented_score == augmented.score);
  }
}

TEST_CASE("constrained decoding needs producible gold labels") {
  auto gold = ReadBracketed("(S (X (A a)) (B b))")[0].tree;
  TableScores table(2, {CompositeLabel{}, CompositeLabel{"S"}});
  CHECK_THROWS_AS(BestGoldBinarization(table, GoldIndex(gold)), StructureError);
  CHECK_THROWS_AS(TreeScore(table, ReadBracketed("(S (A a))")[0].tree), StructureError);
}
