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

#include "nn/layers.h"

#include <vector>

#include "error.h"

namespace spanparser::nn {

LstmState InitialState(Tape &tape, int hidden) {
  std::vector<double> zeros(hidden, 0.0);
  return {tape.Constant(zeros), tape.Constant(zeros)};
}

LstmState LstmStep(Tape &tape, const LstmWeights &weights, const LstmState &state,
                   Expr input) {
  const int hidden = weights.hidden();
  if (tape.Dim(input) != weights.input()) {
    throw ShapeError("lstm input has dimension " + std::to_string(tape.Dim(input)) +
                     ", expected " + std::to_string(weights.input()));
  }
  if (tape.Dim(state.h) != hidden || tape.Dim(state.c) != hidden) {
    throw ShapeError("lstm state has the wrong dimension");
  }
  Expr gates = tape.Affine(tape.Parameter(*weights.weight),
                           tape.Concat({input, state.h}),
                           tape.Parameter(*weights.bias));
  Expr in_gate = tape.Sigmoid(tape.Slice(gates, 0, hidden));
  Expr forget_gate = tape.Sigmoid(tape.Slice(gates, hidden, hidden));
  Expr out_gate = tape.Sigmoid(tape.Slice(gates, 2 * hidden, hidden));
  Expr candidate = tape.Tanh(tape.Slice(gates, 3 * hidden, hidden));
  Expr cell = tape.Add(tape.CwiseMul(forget_gate, state.c),
                       tape.CwiseMul(in_gate, candidate));
  Expr h = tape.CwiseMul(out_gate, tape.Tanh(cell));
  return {h, cell};
}

Expr Hidden(Tape &tape, const FeedForward &net, Expr x, Activation activation) {
  return tape.Nonlinearity(
      tape.Affine(tape.Parameter(*net.hidden_weight), x, tape.Parameter(*net.hidden_bias)),
      activation);
}

Expr Apply(Tape &tape, const FeedForward &net, Expr x, Activation activation) {
  return tape.MatVec(tape.Parameter(*net.output_weight), Hidden(tape, net, x, activation));
}

}  // namespace spanparser::nn
