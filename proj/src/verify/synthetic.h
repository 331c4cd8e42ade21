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

#ifndef SPANPARSER_VERIFY_SYNTHETIC_H_
#define SPANPARSER_VERIFY_SYNTHETIC_H_

#include <string>
#include <vector>

#include "nn/tensor.h"
#include "scorers.h"
#include "treebank.h"

namespace spanparser::verify {

struct RandomTreeOptions {
  std::vector<std::string> nonterminals = {"S", "NP", "VP", "PP", "ADJP"};
  int max_children = 4;
  // Probability that a single word gets its own constituent.
  double word_constituent = 0.3;
  // Probability that a constituent carries a two-element unary chain.
  double chain = 0.2;
};

// A random n-ary tree over words w0..w{n-1}, in collapsed form.
TreebankEntry RandomTree(int length, nn::Rng &rng, const RandomTreeOptions &options = {});

// Sentences drawn from a small English-like grammar with unary S-VP chains,
// lengths 3 to 10.
std::vector<TreebankEntry> SyntheticCorpus(int count, uint64_t seed);

// Uniform [-1, 1] label and split scores over an inventory of `labels`
// nonempty labels plus the empty label. Some labels are chains.
TableScores RandomTableScores(int length, int labels, nn::Rng &rng);

}  // namespace spanparser::verify

#endif  // SPANPARSER_VERIFY_SYNTHETIC_H_
