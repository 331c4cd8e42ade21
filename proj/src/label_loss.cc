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

#include "label_loss.h"

#include <map>

#include "error.h"

namespace spanparser {

std::string ToString(LabelLossKind kind) {
  return kind == LabelLossKind::kZeroOne ? "zero_one" : "hamming";
}

LabelLossKind ParseLabelLoss(const std::string &name) {
  if (name == "zero_one") return LabelLossKind::kZeroOne;
  if (name == "hamming") return LabelLossKind::kHamming;
  throw ConfigError("unknown label loss '" + name + "' (expected zero_one or hamming)");
}

double LabelDelta(LabelLossKind kind, const CompositeLabel &predicted,
                  const CompositeLabel &gold) {
  if (kind == LabelLossKind::kZeroOne) return predicted == gold ? 0.0 : 1.0;
  std::map<std::string, int> balance;
  for (const std::string &symbol : predicted.chain()) ++balance[symbol];
  for (const std::string &symbol : gold.chain()) --balance[symbol];
  int distance = 0;
  for (const auto &[symbol, count] : balance) distance += count < 0 ? -count : count;
  return distance;
}

}  // namespace spanparser
