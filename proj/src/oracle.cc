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

#include "oracle.h"

#include <algorithm>
#include <string>

#include "error.h"

namespace spanparser {

GoldIndex::GoldIndex(const ParseTree &tree)
    : length_(tree.length()), labeling_(GoldLabeling(tree)) {
  tree.ForEachConstituent([&](const ParseTree &node) {
    std::vector<int> &points = boundaries_[node.span()];
    for (const ParseTree &child : node.children()) points.push_back(child.span().left);
    points.push_back(node.span().right);
  });
}

const std::vector<int> &GoldIndex::Boundaries(Span constituent) const {
  auto it = boundaries_.find(constituent);
  if (it == boundaries_.end()) {
    throw StructureError("(" + std::to_string(constituent.left) + ", " +
                         std::to_string(constituent.right) + ") is not a gold constituent");
  }
  return it->second;
}

Span GoldIndex::SmallestEnclosing(Span span) const {
  if (span.left < 0 || span.right > length_ || span.left >= span.right) {
    throw StructureError("span out of range for the gold tree");
  }
  Span best{0, length_};
  for (const auto &[constituent, points] : boundaries_) {
    if (constituent.contains(span) && constituent.length() < best.length()) best = constituent;
  }
  return best;
}

bool GoldIndex::InSomeBinarization(Span span) const {
  if (IsConstituent(span)) return true;
  const std::vector<int> &points = Boundaries(SmallestEnclosing(span));
  return std::binary_search(points.begin(), points.end(), span.left) &&
         std::binary_search(points.begin(), points.end(), span.right);
}

CompositeLabel OracleLabel(Span span, const GoldIndex &gold) {
  return gold.labeling().Get(span);
}

std::vector<int> OracleSplits(Span span, const GoldIndex &gold) {
  if (span.length() < 2) {
    throw StructureError("oracle splits need a span of at least two words");
  }
  std::vector<int> splits;
  for (int k : gold.Boundaries(gold.SmallestEnclosing(span))) {
    if (span.left < k && k < span.right) splits.push_back(k);
  }
  return splits;
}

}  // namespace spanparser
