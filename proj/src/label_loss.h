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

#ifndef SPANPARSER_LABEL_LOSS_H_
#define SPANPARSER_LABEL_LOSS_H_

#include <string>

#include "treebank.h"

namespace spanparser {

enum class LabelLossKind { kZeroOne, kHamming };

std::string ToString(LabelLossKind kind);
// Throws ConfigError on unknown names ("zero_one", "hamming").
LabelLossKind ParseLabelLoss(const std::string &name);

// zero_one: 1 if the labels differ. hamming: |a \ b| + |b \ a| with each label
// read as a multiset of nonterminals.
double LabelDelta(LabelLossKind kind, const CompositeLabel &predicted,
                  const CompositeLabel &gold);

}  // namespace spanparser

#endif  // SPANPARSER_LABEL_LOSS_H_
