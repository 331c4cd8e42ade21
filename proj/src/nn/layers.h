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

#ifndef SPANPARSER_NN_LAYERS_H_
#define SPANPARSER_NN_LAYERS_H_

#include "nn/tape.h"

namespace spanparser::nn {

// Weights of one LSTM direction: a single (4H x (input + H)) matrix applied
// to [x; h] and a 4H bias. Gate blocks are ordered input, forget, output,
// candidate.
struct LstmWeights {
  Tensor *weight = nullptr;
  Tensor *bias = nullptr;

  int hidden() const { return bias->rows() / 4; }
  int input() const { return weight->cols() - hidden(); }
};

struct LstmState {
  Expr h;
  Expr c;
};

// Zero hidden and cell state.
LstmState InitialState(Tape &tape, int hidden);

// One step of a standard LSTM cell:
//   i, f, o = sigmoid(...), g = tanh(...)
//   c' = f * c + i * g,  h' = o * tanh(c')
LstmState LstmStep(Tape &tape, const LstmWeights &weights, const LstmState &state,
                   Expr input);

// One hidden layer followed by a linear read-out without bias:
//   output = V g(W x + b)
struct FeedForward {
  Tensor *hidden_weight = nullptr;
  Tensor *hidden_bias = nullptr;
  Tensor *output_weight = nullptr;
};

Expr Hidden(Tape &tape, const FeedForward &net, Expr x, Activation activation);
Expr Apply(Tape &tape, const FeedForward &net, Expr x, Activation activation);

}  // namespace spanparser::nn

#endif  // SPANPARSER_NN_LAYERS_H_
