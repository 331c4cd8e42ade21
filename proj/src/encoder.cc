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

#include "encoder.h"

#include <random>

#include "error.h"
#include "nn/layers.h"

namespace spanparser {

int UnkReplace(const std::string &word, const Vocabulary &vocab, nn::Rng &rng, bool training) {
  int index = vocab.words.Find(word);
  if (index < 0) return Vocabulary::kUnknown;
  if (training) {
    const double keep = 1.0 - 1.0 / (1.0 + static_cast<double>(vocab.words.Count(index)));
    if (std::uniform_real_distribution<double>(0.0, 1.0)(rng) >= keep) {
      return Vocabulary::kUnknown;
    }
  }
  return index;
}

namespace {

int LookupOrUnknown(const Indexer &indexer, const std::string &symbol) {
  int index = indexer.Find(symbol);
  return index < 0 ? Vocabulary::kUnknown : index;
}

// Runs one direction over `inputs`, returning the hidden state after every
// input in processing order.
std::vector<nn::Expr> RunDirection(nn::Tape &tape, const nn::LstmWeights &weights,
                                   const std::vector<nn::Expr> &inputs, bool reverse) {
  const int steps = static_cast<int>(inputs.size());
  std::vector<nn::Expr> outputs(steps);
  nn::LstmState state = nn::InitialState(tape, weights.hidden());
  for (int t = 0; t < steps; ++t) {
    int position = reverse ? steps - 1 - t : t;
    state = nn::LstmStep(tape, weights, state, inputs[position]);
    outputs[position] = state.h;
  }
  return outputs;
}

}  // namespace

SentenceEncoding Encode(nn::Tape &tape, Model &model, const Sentence &sentence, bool training,
                        nn::Rng &rng) {
  sentence.Validate();
  const Vocabulary &vocab = model.vocab();
  if (vocab.use_morph && !sentence.has_morph()) {
    throw DataError("the model uses morphological tags but the input has none");
  }
  const int n = sentence.size();
  const double dropout = training ? model.config().dropout : 0.0;

  std::vector<nn::Expr> inputs;
  inputs.reserve(n + 2);
  for (int position = 0; position < n + 2; ++position) {
    int word, tag, morph;
    if (position == 0 || position == n + 1) {
      word = tag = morph = position == 0 ? Vocabulary::kStart : Vocabulary::kStop;
    } else {
      word = UnkReplace(sentence.words[position - 1], vocab, rng, training);
      tag = LookupOrUnknown(vocab.tags, sentence.tags[position - 1]);
      morph = vocab.use_morph ? LookupOrUnknown(vocab.morphs, sentence.morphs[position - 1]) : 0;
    }
    std::vector<nn::Expr> parts = {tape.Lookup(model.word_embeddings(), word),
                                   tape.Lookup(model.tag_embeddings(), tag)};
    if (vocab.use_morph) parts.push_back(tape.Lookup(*model.morph_embeddings(), morph));
    inputs.push_back(tape.Dropout(tape.Concat(parts), dropout, training, rng));
  }

  std::vector<nn::Expr> forward, backward;
  for (int layer = 0; layer < model.config().lstm_layers; ++layer) {
    forward = RunDirection(tape, model.lstm(layer, 0), inputs, false);
    backward = RunDirection(tape, model.lstm(layer, 1), inputs, true);
    for (int t = 0; t < n + 2; ++t) {
      forward[t] = tape.Dropout(forward[t], dropout, training, rng);
      backward[t] = tape.Dropout(backward[t], dropout, training, rng);
    }
    if (layer + 1 < model.config().lstm_layers) {
      for (int t = 0; t < n + 2; ++t) inputs[t] = tape.Concat({forward[t], backward[t]});
    }
  }

  // Sequence position 0 is <START> and n + 1 is <STOP>: f_i is the forward
  // state at position i and b_i the backward state at position i + 1.
  SentenceEncoding encoding;
  encoding.length = n;
  for (int i = 0; i <= n; ++i) {
    encoding.forward.push_back(forward[i]);
    encoding.backward.push_back(backward[i + 1]);
  }
  return encoding;
}

nn::Expr SpanRep(nn::Tape &tape, const SentenceEncoding &encoding, int i, int j) {
  if (i < 0 || j > encoding.length || i >= j) {
    throw ShapeError("span (" + std::to_string(i) + ", " + std::to_string(j) +
                     ") is not a valid span of a " + std::to_string(encoding.length) +
                     "-word sentence");
  }
  return tape.Concat({tape.Sub(encoding.forward[j], encoding.forward[i]),
                      tape.Sub(encoding.backward[i], encoding.backward[j])});
}

}  // namespace spanparser
