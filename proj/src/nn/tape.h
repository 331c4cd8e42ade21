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

#ifndef SPANPARSER_NN_TAPE_H_
#define SPANPARSER_NN_TAPE_H_

#include <cstdint>
#include <initializer_list>
#include <optional>
#include <span>
#include <vector>

#include "nn/tensor.h"

namespace spanparser::nn {

// Handle to a value recorded on a Tape.
struct Expr {
  int id = -1;
  bool valid() const { return id >= 0; }
};

enum class Activation { kRelu, kTanh };

enum class Op : uint8_t {
  kConstant,
  kParameter,
  kLookup,
  kMatVec,
  kAffine,
  kAdd,
  kSub,
  kSum,
  kConcat,
  kSlice,
  kRelu,
  kTanh,
  kSigmoid,
  kCwiseMul,
  kDot,
  kBilinear,
  kPick,
  kHinge,
  kAddConstant,
  kDropout,
};

// Records operations in execution order and runs reverse-mode
// differentiation over them. Matrices are row-major; every non-parameter
// value is a column vector. Parameter gradients accumulate directly into the
// owning Tensor until the optimizer clears them.
class Tape {
 public:
  // With record_gradients == false no gradient bookkeeping is done; used for
  // pure inference.
  explicit Tape(bool record_gradients = true);

  Tape(const Tape &) = delete;
  Tape &operator=(const Tape &) = delete;

  Expr Constant(std::span<const double> values);
  Expr Constant(std::initializer_list<double> values);
  Expr Scalar(double value) { return Constant({value}); }

  Expr Parameter(Tensor &tensor);
  // Row `row` of an embedding table, as a column vector.
  Expr Lookup(Tensor &table, int row);

  Expr MatVec(Expr matrix, Expr x);
  // matrix * x + bias
  Expr Affine(Expr matrix, Expr x, Expr bias);
  Expr Add(Expr a, Expr b);
  Expr Sub(Expr a, Expr b);
  Expr Sum(std::span<const Expr> terms);
  Expr Concat(std::span<const Expr> parts);
  Expr Concat(std::initializer_list<Expr> parts);
  Expr Slice(Expr x, int offset, int length);

  Expr Relu(Expr x);
  Expr Tanh(Expr x);
  Expr Sigmoid(Expr x);
  Expr Nonlinearity(Expr x, Activation activation);

  Expr CwiseMul(Expr a, Expr b);
  Expr Dot(Expr a, Expr b);
  // x^T matrix y
  Expr Bilinear(Expr x, Expr matrix, Expr y);
  Expr Pick(Expr x, int index);
  // max(0, x) for a scalar.
  Expr Hinge(Expr x);
  Expr AddConstant(Expr x, double constant);

  // Inverted dropout: in training mode each element is zeroed with
  // probability `ratio` and survivors are scaled by 1 / (1 - ratio).
  // Identity otherwise.
  Expr Dropout(Expr x, double ratio, bool training, Rng &rng);

  std::span<const double> Value(Expr x) const;
  double ScalarValue(Expr x) const;
  int Dim(Expr x) const { return nodes_[x.id].rows; }

  // Gradient of the last backward pass w.r.t. a non-parameter value.
  std::span<const double> Gradient(Expr x) const;

  // Seeds d(loss)/d(loss) = 1 and propagates in reverse recording order.
  void Backward(Expr loss);

  int size() const { return static_cast<int>(nodes_.size()); }
  bool record_gradients() const { return record_gradients_; }

  // Fingerprint of every nondifferentiable choice that influences `loss`:
  // ReLU and hinge activity patterns, picked indices and dropout masks.
  uint64_t KinkSignature(Expr loss) const;
  // Smallest |preactivation| over ReLUs and hinges feeding `loss`.
  double KinkDistance(Expr loss) const;

 private:
  struct Node {
    Op op;
    int rows = 0;
    int cols = 1;
    int in0 = -1, in1 = -1, in2 = -1;
    std::vector<int> inputs;  // kSum, kConcat
    int aux = 0;              // pick index, slice offset, lookup row
    std::vector<double> value_storage;
    std::vector<double> grad_storage;
    std::vector<double> mask;  // dropout
    const double *value = nullptr;
    double *external_grad = nullptr;  // parameters and lookups
    bool needs_grad = false;
  };

  int Push(Node node);
  Node MakeNode(Op op, int rows, int cols = 1);
  const Node &Checked(Expr x) const;
  double *GradBuffer(int id);
  void BackwardNode(int id);
  std::vector<bool> Ancestors(Expr loss) const;

  bool record_gradients_;
  std::vector<Node> nodes_;
};

// Test hook: corrupts the backward rule of one operation kind so that
// verification suites can demonstrate they catch broken gradients.
void SetGradientFault(std::optional<Op> op);
std::optional<Op> GradientFault();

}  // namespace spanparser::nn

#endif  // SPANPARSER_NN_TAPE_H_
