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

#ifndef SPANPARSER_ENCODER_H_
#define SPANPARSER_ENCODER_H_

#include <vector>

#include "model.h"
#include "nn/tape.h"
#include "treebank.h"

namespace spanparser {

// Fencepost states of the top recurrent layer: forward[i] summarizes words
// 1..i and backward[i] summarizes words i+1..n, for i in 0..n.
struct SentenceEncoding {
  int length = 0;
  std::vector<nn::Expr> forward;
  std::vector<nn::Expr> backward;
};

// Word index for the embedding lookup. During training a word with
// training frequency f is replaced by <UNK> with probability 1 / (1 + f);
// otherwise only out-of-vocabulary words map to <UNK>.
int UnkReplace(const std::string &word, const Vocabulary &vocab, nn::Rng &rng, bool training);

// Runs the stacked bidirectional LSTM over <START> w_1 .. w_n <STOP>.
// Throws ParseError on an empty sentence and DataError when the sentence and
// the model disagree about morphological tags.
SentenceEncoding Encode(nn::Tape &tape, Model &model, const Sentence &sentence, bool training,
                        nn::Rng &rng);

// concat(f_j - f_i, b_i - b_j).
nn::Expr SpanRep(nn::Tape &tape, const SentenceEncoding &encoding, int i, int j);

}  // namespace spanparser

#endif  // SPANPARSER_ENCODER_H_
