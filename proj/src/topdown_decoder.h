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

#ifndef SPANPARSER_TOPDOWN_DECODER_H_
#define SPANPARSER_TOPDOWN_DECODER_H_

#include <cstdint>
#include <vector>

#include "chart_decoder.h"
#include "label_loss.h"
#include "oracle.h"
#include "scorers.h"

namespace spanparser {

// One visited span of a top-down run. Oracle and augmented fields are only
// filled during training rollouts; split fields stay -1 for single words.
struct DecisionRecord {
  Span span;
  LabelChoice predicted_label;
  // argmax of label score + delta(label, oracle label).
  LabelChoice augmented_label;
  LabelChoice oracle_label;
  int predicted_split = -1;
  // argmax of split score + 1 for splits outside the oracle set.
  int augmented_split = -1;
  std::vector<int> oracle_splits;
  // The oracle split the loss compares against.
  int oracle_split = -1;
  // The split the rollout recursed on.
  int continuation = -1;
};

struct TopdownResult {
  ParseTree tree;
  Decisions decisions;
  // Sum of the chosen label and split scores.
  double score = 0.0;
  std::vector<DecisionRecord> records;
  int64_t split_evals = 0;
};

// Greedy recursive partitioning from (0, n): independent label and split
// argmaxes per span, the root excluding the empty label.
TopdownResult GreedyDecode(ScoreSource &scores);

enum class RolloutMode { kGold, kExplore };

enum class OracleSplitChoice { kLeftmost, kBestScoring };

struct RolloutOptions {
  RolloutMode mode = RolloutMode::kGold;
  OracleSplitChoice oracle_split = OracleSplitChoice::kLeftmost;
  LabelLossKind loss = LabelLossKind::kZeroOne;
};

// Training-time run that records predictions next to dynamic-oracle targets
// at every visited span. Gold mode recurses on the oracle split; explore mode
// recurses on the model's predicted split.
std::vector<DecisionRecord> Rollout(ScoreSource &scores, const GoldIndex &gold,
                                    const RolloutOptions &options);

std::vector<DecisionRecord> GoldRollout(ScoreSource &scores, const GoldIndex &gold);
std::vector<DecisionRecord> ExploreRollout(ScoreSource &scores, const GoldIndex &gold);

}  // namespace spanparser

#endif  // SPANPARSER_TOPDOWN_DECODER_H_
