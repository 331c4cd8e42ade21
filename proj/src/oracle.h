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

#ifndef SPANPARSER_ORACLE_H_
#define SPANPARSER_ORACLE_H_

#include <map>
#include <vector>

#include "treebank.h"

namespace spanparser {

// Constituent lookup over a gold tree.
class GoldIndex {
 public:
  explicit GoldIndex(const ParseTree &tree);

  int length() const { return length_; }
  const SpanLabeling &labeling() const { return labeling_; }
  bool IsConstituent(Span span) const { return boundaries_.count(span) > 0; }

  // Left edge, interior child boundaries and right edge of a constituent.
  const std::vector<int> &Boundaries(Span constituent) const;

  // The shortest constituent containing `span` (possibly `span` itself).
  // Unique because constituents form a laminar family.
  Span SmallestEnclosing(Span span) const;

  // True when some binarization of the gold tree contains `span`: the span is
  // a constituent, or both of its ends are boundaries of the smallest
  // constituent enclosing it.
  bool InSomeBinarization(Span span) const;

 private:
  int length_;
  SpanLabeling labeling_;
  std::map<Span, std::vector<int>> boundaries_;
};

// The gold label of the span, or the empty label for non-constituents.
CompositeLabel OracleLabel(Span span, const GoldIndex &gold);

// Split points from which the gold tree (or, off the gold path, the best
// reachable tree) can still be completed: the interior boundaries of the
// smallest enclosing gold constituent that fall strictly inside the span.
// Throws StructureError for spans shorter than 2.
std::vector<int> OracleSplits(Span span, const GoldIndex &gold);

}  // namespace spanparser

#endif  // SPANPARSER_ORACLE_H_
