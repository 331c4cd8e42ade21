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

#include <limits>
#include <vector>

#include "error.h"

namespace spanparser {

namespace {

constexpr double kImpossible = -std::numeric_limits<double>::infinity();

struct Cell {
  double augmented = kImpossible;
  double plain = kImpossible;
  int split = -1;
  LabelChoice label;
};

void Collect(const std::vector<Cell> &chart, int n, Span span, Decisions &decisions) {
  const Cell &cell = chart[span.left * (n + 1) + span.right];
  decisions.labels[span] = cell.label;
  if (span.length() >= 2) {
    decisions.splits[span] = cell.split;
    Collect(chart, n, {span.left, cell.split}, decisions);
    Collect(chart, n, {cell.split, span.right}, decisions);
  }
}

std::map<Span, CompositeLabel> LabelsOf(const Decisions &decisions) {
  std::map<Span, CompositeLabel> labels;
  for (const auto &[span, choice] : decisions.labels) labels[span] = choice.label;
  return labels;
}

}  // namespace

ChartResult CkyDecode(ScoreSource &scores, const ChartOptions &options) {
  const int n = scores.length();
  if (n < 1) throw StructureError("cannot decode an empty sentence");
  if (options.constrain && options.constrain->length() != n) {
    throw StructureError("gold tree length does not match the sentence");
  }
  std::vector<Cell> chart(static_cast<size_t>(n + 1) * (n + 1));
  auto at = [&](int i, int j) -> Cell & { return chart[i * (n + 1) + j]; };
  const int64_t evals_before = scores.split_evals();

  for (int length = 1; length <= n; ++length) {
    for (int i = 0; i + length <= n; ++i) {
      const int j = i + length;
      const Span span{i, j};
      Cell &cell = at(i, j);
      if (options.constrain) {
        if (!options.constrain->InSomeBinarization(span)) continue;
        auto choice = scores.ScoreLabel(span, options.constrain->labeling().Get(span));
        if (!choice) continue;
        cell.label = *choice;
      } else {
        LabelAugment augment;
        if (options.augment_gold) {
          augment.gold = &options.augment_gold->Get(span);
          augment.kind = options.loss;
        }
        cell.label = scores.BestLabel(span, /*allow_empty=*/length < n,
                                      options.augment_gold ? &augment : nullptr);
      }
      if (length == 1) {
        cell.augmented = cell.label.augmented;
        cell.plain = cell.label.score;
        continue;
      }
      double best = kImpossible;
      double best_plain = kImpossible;
      for (int k = i + 1; k < j; ++k) {
        const Cell &left = at(i, k);
        const Cell &right = at(k, j);
        if (left.augmented == kImpossible || right.augmented == kImpossible) continue;
        const double split = scores.SplitScore(i, k, j);
        const double total = split + left.augmented + right.augmented;
        if (total > best) {
          best = total;
          best_plain = split + left.plain + right.plain;
          cell.split = k;
        }
      }
      if (cell.split < 0) continue;
      cell.augmented = cell.label.augmented + best;
      cell.plain = cell.label.score + best_plain;
    }
  }

  const Cell &root = at(0, n);
  if (root.augmented == kImpossible) {
    throw StructureError("no tree satisfies the chart constraints");
  }
  ChartResult result;
  Collect(chart, n, {0, n}, result.decisions);
  result.tree = Reconstruct(n, LabelsOf(result.decisions), result.decisions.splits);
  result.score = root.plain;
  result.augmented_score = root.augmented;
  result.split_evals = scores.split_evals() - evals_before;
  return result;
}

ChartResult LossAugmentedBest(ScoreSource &scores, const SpanLabeling &gold,
                              LabelLossKind loss) {
  ChartOptions options;
  options.augment_gold = &gold;
  options.loss = loss;
  return CkyDecode(scores, options);
}

ChartResult BestGoldBinarization(ScoreSource &scores, const GoldIndex &gold) {
  ChartOptions options;
  options.constrain = &gold;
  return CkyDecode(scores, options);
}

double TreeScore(ScoreSource &scores, const ParseTree &tree) {
  if (tree.length() != scores.length()) {
    throw StructureError("tree covers " + std::to_string(tree.length()) +
                         " words but the sentence has " + std::to_string(scores.length()));
  }
  GoldIndex gold(tree);
  return BestGoldBinarization(scores, gold).score;
}

double DecisionsScore(ScoreSource &scores, const Decisions &decisions) {
  double total = 0.0;
  for (const auto &[span, choice] : decisions.labels) total += choice.score;
  for (const auto &[span, k] : decisions.splits) {
    total += scores.SplitScore(span.left, k, span.right);
  }
  return total;
}

namespace {

void RightBranching(ScoreSource &scores, const GoldIndex &gold, Span span,
                    Decisions &decisions) {
  auto choice = scores.ScoreLabel(span, OracleLabel(span, gold));
  if (!choice) {
    throw StructureError("the scorer cannot produce the label " +
                         OracleLabel(span, gold).ToString());
  }
  decisions.labels[span] = *choice;
  if (span.length() < 2) return;
  const int k = OracleSplits(span, gold).front();
  decisions.splits[span] = k;
  RightBranching(scores, gold, {span.left, k}, decisions);
  RightBranching(scores, gold, {k, span.right}, decisions);
}

}  // namespace

Decisions RightBranchingDecisions(ScoreSource &scores, const ParseTree &tree) {
  GoldIndex gold(tree);
  Decisions decisions;
  RightBranching(scores, gold, {0, tree.length()}, decisions);
  return decisions;
}

double DecisionsDelta(const Decisions &decisions, const SpanLabeling &gold,
                      LabelLossKind loss) {
  double total = 0.0;
  for (const auto &[span, choice] : decisions.labels) {
    total += LabelDelta(loss, choice.label, gold.Get(span));
  }
  return total;
}

}  // namespace spanparser
