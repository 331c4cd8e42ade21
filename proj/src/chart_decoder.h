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

#ifndef SPANPARSER_CHART_DECODER_H_
#define SPANPARSER_CHART_DECODER_H_

#include <cstdint>
#include <map>

#include "label_loss.h"
#include "oracle.h"
#include "scorers.h"
#include "treebank.h"

namespace spanparser {

// The labeling and split decisions of one binarized tree.
struct Decisions {
  std::map<Span, LabelChoice> labels;
  std::map<Span, int> splits;
};

struct ChartOptions {
  // Loss augmentation: every label score is raised by delta(label, gold label
  // of the span).
  const SpanLabeling *augment_gold = nullptr;
  LabelLossKind loss = LabelLossKind::kZeroOne;
  // Restricts the search to binarizations of this gold tree.
  const GoldIndex *constrain = nullptr;
};

struct ChartResult {
  ParseTree tree;
  Decisions decisions;
  // Unaugmented score of the returned tree.
  double score = 0.0;
  // Score including augmentation; equals `score` without augmentation.
  double augmented_score = 0.0;
  // Split scores consulted while filling the chart.
  int64_t split_evals = 0;
};

// Exact CKY maximization of the tree score. The root never takes the empty
// label. Ties prefer the lowest label index and the smallest split point.
// Throws StructureError if the sentence is empty or the constraint admits no
// tree (a gold label the scorer cannot produce).
ChartResult CkyDecode(ScoreSource &scores, const ChartOptions &options = {});

ChartResult LossAugmentedBest(ScoreSource &scores, const SpanLabeling &gold,
                              LabelLossKind loss);

// Highest-scoring binarization of a gold tree.
ChartResult BestGoldBinarization(ScoreSource &scores, const GoldIndex &gold);

// Score of a tree: label scores of its binarized spans plus split scores of
// its binary splits, maximized over the binarizations of n-ary nodes.
double TreeScore(ScoreSource &scores, const ParseTree &tree);

// Sum of the label and split scores of an explicit decision list.
double DecisionsScore(ScoreSource &scores, const Decisions &decisions);

// Decisions of the right-branching binarization of a tree, labeled with the
// scorer's scores.
Decisions RightBranchingDecisions(ScoreSource &scores, const ParseTree &tree);

// Sum of delta(label, gold label) over the decided spans.
double DecisionsDelta(const Decisions &decisions, const SpanLabeling &gold,
                      LabelLossKind loss);

}  // namespace spanparser

#endif  // SPANPARSER_CHART_DECODER_H_
