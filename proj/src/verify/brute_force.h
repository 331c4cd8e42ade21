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

#ifndef SPANPARSER_VERIFY_BRUTE_FORCE_H_
#define SPANPARSER_VERIFY_BRUTE_FORCE_H_

#include <array>
#include <map>
#include <vector>

#include "label_loss.h"
#include "oracle.h"
#include "scorers.h"
#include "treebank.h"

namespace spanparser::verify {

// A binary bracketing of (0, n): one (i, k, j) triple per span, k = -1 for
// single words.
using BinaryStructure = std::vector<std::array<int, 3>>;

// Every binary bracketing of an n-word sentence (Catalan(n - 1) of them).
std::vector<BinaryStructure> EnumerateBinaryStructures(int length);

struct BruteForceOptions {
  const SpanLabeling *augment_gold = nullptr;
  LabelLossKind loss = LabelLossKind::kZeroOne;
  // Enumerate complete labelings of each structure instead of maximizing the
  // label of every span separately.
  bool joint_labelings = false;
};

// Maximum of sum(label scores) + sum(split scores) over every binary
// structure and labeling, with a nonempty root label.
double BruteForceBest(const TableScores &scores, const BruteForceOptions &options = {});

struct CompletionCheck {
  bool optimal = true;
  double oracle_f1 = 0.0;
  double best_f1 = 0.0;
};

// Compares every completion of `state` that follows the dynamic oracle
// against the best labeled F1 achievable by any completion, given the
// labeled spans already predicted outside the state's span.
CompletionCheck CheckOracleCompletion(const GoldIndex &gold,
                                      const std::map<Span, CompositeLabel> &outside, Span state);

}  // namespace spanparser::verify

#endif  // SPANPARSER_VERIFY_BRUTE_FORCE_H_
