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

#include "verify/brute_force.h"

#include <algorithm>
#include <functional>
#include <limits>
#include <set>

#include "error.h"

namespace spanparser::verify {

namespace {

std::vector<BinaryStructure> Enumerate(int i, int j) {
  if (j - i == 1) return {BinaryStructure{{i, -1, j}}};
  std::vector<BinaryStructure> result;
  for (int k = i + 1; k < j; ++k) {
    auto lefts = Enumerate(i, k);
    auto rights = Enumerate(k, j);
    for (const auto &left : lefts) {
      for (const auto &right : rights) {
        BinaryStructure structure = {{i, k, j}};
        structure.insert(structure.end(), left.begin(), left.end());
        structure.insert(structure.end(), right.begin(), right.end());
        result.push_back(std::move(structure));
      }
    }
  }
  return result;
}

double Augmented(const TableScores &scores, const BruteForceOptions &options, Span span,
                 int label) {
  double value = scores.label_score(span, label);
  if (options.augment_gold) {
    value += LabelDelta(options.loss, scores.labels()[label], options.augment_gold->Get(span));
  }
  return value;
}

}  // namespace

std::vector<BinaryStructure> EnumerateBinaryStructures(int length) {
  if (length < 1) throw StructureError("no structures for an empty sentence");
  return Enumerate(0, length);
}

double BruteForceBest(const TableScores &scores, const BruteForceOptions &options) {
  const int n = scores.length();
  const int labels = static_cast<int>(scores.labels().size());
  double best = -std::numeric_limits<double>::infinity();
  for (const BinaryStructure &structure : EnumerateBinaryStructures(n)) {
    double splits = 0.0;
    for (const auto &[i, k, j] : structure) {
      if (k >= 0) splits += scores.split_score(i, k, j);
    }
    // structure[0] is always the root span.
    if (!options.joint_labelings) {
      double total = splits;
      for (const auto &[i, k, j] : structure) {
        double label_best = -std::numeric_limits<double>::infinity();
        for (int l = (i == 0 && j == n) ? 1 : 0; l < labels; ++l) {
          label_best = std::max(label_best, Augmented(scores, options, {i, j}, l));
        }
        total += label_best;
      }
      best = std::max(best, total);
      continue;
    }
    std::vector<int> assignment(structure.size(), 0);
    assignment[0] = 1;
    while (true) {
      double total = splits;
      for (size_t s = 0; s < structure.size(); ++s) {
        total += Augmented(scores, options, {structure[s][0], structure[s][2]}, assignment[s]);
      }
      best = std::max(best, total);
      size_t s = 0;
      while (s < structure.size()) {
        if (++assignment[s] < labels) break;
        assignment[s] = s == 0 ? 1 : 0;
        ++s;
      }
      if (s == structure.size()) break;
    }
  }
  return best;
}

namespace {

// (matched, predicted) counts of labeled nonterminals.
using Counts = std::pair<int, int>;

int Matched(const CompositeLabel &predicted, const CompositeLabel &gold) {
  std::multiset<std::string> remaining(gold.chain().begin(), gold.chain().end());
  int matched = 0;
  for (const std::string &symbol : predicted.chain()) {
    auto it = remaining.find(symbol);
    if (it != remaining.end()) {
      remaining.erase(it);
      ++matched;
    }
  }
  return matched;
}

std::set<Counts> Combine(const std::set<Counts> &a, const std::set<Counts> &b) {
  std::set<Counts> result;
  for (const Counts &x : a) {
    for (const Counts &y : b) result.insert({x.first + y.first, x.second + y.second});
  }
  return result;
}

// Label choices that matter for F1: empty, the gold chain and its prefixes,
// and one wrong nonterminal.
std::set<Counts> LabelOptions(const GoldIndex &gold, Span span) {
  std::set<Counts> options = {{0, 1}};
  const bool root = span.left == 0 && span.right == gold.length();
  if (!root) options.insert({0, 0});
  const CompositeLabel &label = gold.labeling().Get(span);
  for (int size = 1; size <= label.size(); ++size) options.insert({size, size});
  return options;
}

std::set<Counts> AllCompletions(const GoldIndex &gold, Span span,
                                std::map<Span, std::set<Counts>> &memo) {
  auto it = memo.find(span);
  if (it != memo.end()) return it->second;
  std::set<Counts> structures;
  if (span.length() == 1) {
    structures = {{0, 0}};
  } else {
    for (int k = span.left + 1; k < span.right; ++k) {
      auto sub = Combine(AllCompletions(gold, {span.left, k}, memo),
                         AllCompletions(gold, {k, span.right}, memo));
      structures.insert(sub.begin(), sub.end());
    }
  }
  auto result = Combine(LabelOptions(gold, span), structures);
  memo[span] = result;
  return result;
}

std::set<Counts> OracleCompletions(const GoldIndex &gold, Span span) {
  const CompositeLabel label = OracleLabel(span, gold);
  std::set<Counts> own = {{label.size(), label.size()}};
  if (span.length() == 1) return own;
  std::set<Counts> structures;
  for (int k : OracleSplits(span, gold)) {
    auto sub = Combine(OracleCompletions(gold, {span.left, k}),
                       OracleCompletions(gold, {k, span.right}));
    structures.insert(sub.begin(), sub.end());
  }
  return Combine(own, structures);
}

}  // namespace

CompletionCheck CheckOracleCompletion(const GoldIndex &gold,
                                      const std::map<Span, CompositeLabel> &outside, Span state) {
  int gold_count = 0;
  for (const auto &[span, label] : gold.labeling().entries()) gold_count += label.size();
  int outside_matched = 0, outside_predicted = 0;
  for (const auto &[span, label] : outside) {
    if (state.contains(span)) throw StructureError("outside span lies inside the state");
    outside_matched += Matched(label, gold.labeling().Get(span));
    outside_predicted += label.size();
  }
  auto f1 = [&](const Counts &inside) {
    double matched = outside_matched + inside.first;
    double predicted = outside_predicted + inside.second;
    return 2.0 * matched / (predicted + gold_count);
  };
  std::map<Span, std::set<Counts>> memo;
  CompletionCheck check;
  check.best_f1 = -1.0;
  for (const Counts &counts : AllCompletions(gold, state, memo)) {
    check.best_f1 = std::max(check.best_f1, f1(counts));
  }
  check.oracle_f1 = std::numeric_limits<double>::infinity();
  for (const Counts &counts : OracleCompletions(gold, state)) {
    check.oracle_f1 = std::min(check.oracle_f1, f1(counts));
  }
  check.optimal = check.oracle_f1 >= check.best_f1 - 1e-12;
  return check;
}

}  // namespace spanparser::verify
