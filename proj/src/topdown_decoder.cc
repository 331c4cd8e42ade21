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
#include <limits>

#include "error.h"

namespace spanparser {

namespace {

struct SplitCandidate {
  int k;
  double score;
};

std::vector<SplitCandidate> ScoreSplits(ScoreSource &scores, Span span) {
  std::vector<SplitCandidate> candidates;
  for (int k = span.left + 1; k < span.right; ++k) {
    candidates.push_back({k, scores.SplitScore(span.left, k, span.right)});
  }
  return candidates;
}

// Smallest k among the maxima of score(k) + bonus(k).
template <typename Bonus>
int ArgmaxSplit(const std::vector<SplitCandidate> &candidates, Bonus bonus) {
  int best = -1;
  double best_value = -std::numeric_limits<double>::infinity();
  for (const SplitCandidate &c : candidates) {
    double value = c.score + bonus(c.k);
    if (value > best_value) {
      best_value = value;
      best = c.k;
    }
  }
  return best;
}

void Greedy(ScoreSource &scores, Span span, TopdownResult &result) {
  DecisionRecord record;
  record.span = span;
  record.predicted_label = scores.BestLabel(span, span.left != 0 || span.right != scores.length());
  result.decisions.labels[span] = record.predicted_label;
  result.score += record.predicted_label.score;
  if (span.length() >= 2) {
    auto candidates = ScoreSplits(scores, span);
    record.predicted_split = ArgmaxSplit(candidates, [](int) { return 0.0; });
    record.continuation = record.predicted_split;
    result.decisions.splits[span] = record.predicted_split;
    result.score += candidates[record.predicted_split - span.left - 1].score;
  }
  result.records.push_back(record);
  if (record.continuation >= 0) {
    Greedy(scores, {span.left, record.continuation}, result);
    Greedy(scores, {record.continuation, span.right}, result);
  }
}

void Roll(ScoreSource &scores, const GoldIndex &gold, const RolloutOptions &options, Span span,
          std::vector<DecisionRecord> &records) {
  const bool allow_empty = span.left != 0 || span.right != scores.length();
  DecisionRecord record;
  record.span = span;
  record.predicted_label = scores.BestLabel(span, allow_empty);
  const CompositeLabel target = OracleLabel(span, gold);
  auto oracle = scores.ScoreLabel(span, target);
  if (!oracle) {
    throw DataError("gold label " + target.ToString() + " is not in the label inventory");
  }
  record.oracle_label = *oracle;
  LabelAugment augment{&target, options.loss};
  record.augmented_label = scores.BestLabel(span, allow_empty, &augment);

  if (span.length() >= 2) {
    auto candidates = ScoreSplits(scores, span);
    record.oracle_splits = OracleSplits(span, gold);
    const auto &oracle_splits = record.oracle_splits;
    auto is_oracle = [&](int k) {
      return std::find(oracle_splits.begin(), oracle_splits.end(), k) != oracle_splits.end();
    };
    record.predicted_split = ArgmaxSplit(candidates, [](int) { return 0.0; });
    record.augmented_split =
        ArgmaxSplit(candidates, [&](int k) { return is_oracle(k) ? 0.0 : 1.0; });
    if (options.oracle_split == OracleSplitChoice::kLeftmost) {
      record.oracle_split = oracle_splits.front();
    } else {
      constexpr double kExcluded = -std::numeric_limits<double>::infinity();
      record.oracle_split =
          ArgmaxSplit(candidates, [&](int k) { return is_oracle(k) ? 0.0 : kExcluded; });
    }
    record.continuation =
        options.mode == RolloutMode::kGold ? record.oracle_split : record.predicted_split;
  }
  records.push_back(record);
  if (record.continuation >= 0) {
    Roll(scores, gold, options, {span.left, record.continuation}, records);
    Roll(scores, gold, options, {record.continuation, span.right}, records);
  }
}

}  // namespace

TopdownResult GreedyDecode(ScoreSource &scores) {
  const int n = scores.length();
  if (n < 1) throw StructureError("cannot decode an empty sentence");
  TopdownResult result;
  const int64_t evals_before = scores.split_evals();
  Greedy(scores, {0, n}, result);
  std::map<Span, CompositeLabel> labels;
  for (const auto &[span, choice] : result.decisions.labels) labels[span] = choice.label;
  result.tree = Reconstruct(n, labels, result.decisions.splits);
  result.split_evals = scores.split_evals() - evals_before;
  return result;
}

std::vector<DecisionRecord> Rollout(ScoreSource &scores, const GoldIndex &gold,
                                    const RolloutOptions &options) {
  if (gold.length() != scores.length()) {
    throw StructureError("gold tree length does not match the sentence");
  }
  std::vector<DecisionRecord> records;
  Roll(scores, gold, options, {0, scores.length()}, records);
  return records;
}

std::vector<DecisionRecord> GoldRollout(ScoreSource &scores, const GoldIndex &gold) {
  return Rollout(scores, gold, {RolloutMode::kGold, OracleSplitChoice::kLeftmost, {}});
}

std::vector<DecisionRecord> ExploreRollout(ScoreSource &scores, const GoldIndex &gold) {
  return Rollout(scores, gold, {RolloutMode::kExplore, OracleSplitChoice::kLeftmost, {}});
}

}  // namespace spanparser
