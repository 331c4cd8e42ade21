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

#include "nn/tape.h"

#include <Eigen/Core>
#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <string>

#include "error.h"

namespace spanparser::nn {

namespace {

using RowMajorMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using ConstMatrixMap = Eigen::Map<const RowMajorMatrix>;
using MatrixMap = Eigen::Map<RowMajorMatrix>;
using ConstVectorMap = Eigen::Map<const Eigen::VectorXd>;
using VectorMap = Eigen::Map<Eigen::VectorXd>;

std::atomic<int> g_fault_op{-1};

std::string Describe(Op op) {
  return "op#" + std::to_string(static_cast<int>(op));
}

constexpr uint64_t kFnvOffset = 1469598103934665603ull;
constexpr uint64_t kFnvPrime = 1099511628211ull;

void Mix(uint64_t &hash, uint64_t value) {
  hash ^= value;
  hash *= kFnvPrime;
}

}  // namespace

void SetGradientFault(std::optional<Op> op) {
  g_fault_op.store(op ? static_cast<int>(*op) : -1);
}

std::optional<Op> GradientFault() {
  int op = g_fault_op.load();
  if (op < 0) return std::nullopt;
  return static_cast<Op>(op);
}

Tape::Tape(bool record_gradients) : record_gradients_(record_gradients) {
  nodes_.reserve(256);
}

Tape::Node Tape::MakeNode(Op op, int rows, int cols) {
  Node node;
  node.op = op;
  node.rows = rows;
  node.cols = cols;
  node.value_storage.assign(static_cast<size_t>(rows) * cols, 0.0);
  return node;
}

int Tape::Push(Node node) {
  if (node.value == nullptr) node.value = node.value_storage.data();
  if (record_gradients_ && node.op != Op::kParameter && node.op != Op::kLookup &&
      node.op != Op::kConstant) {
    auto flag = [&](int id) { return id >= 0 && nodes_[id].needs_grad; };
    node.needs_grad = flag(node.in0) || flag(node.in1) || flag(node.in2);
    for (int id : node.inputs) node.needs_grad = node.needs_grad || flag(id);
  }
  nodes_.push_back(std::move(node));
  return static_cast<int>(nodes_.size()) - 1;
}

const Tape::Node &Tape::Checked(Expr x) const {
  if (x.id < 0 || x.id >= size()) throw ShapeError("invalid expression handle");
  return nodes_[x.id];
}

Expr Tape::Constant(std::span<const double> values) {
  if (values.empty()) throw ShapeError("constant must be nonempty");
  Node node = MakeNode(Op::kConstant, static_cast<int>(values.size()));
  std::copy(values.begin(), values.end(), node.value_storage.begin());
  return {Push(std::move(node))};
}

Expr Tape::Constant(std::initializer_list<double> values) {
  return Constant(std::span<const double>(values.begin(), values.size()));
}

Expr Tape::Parameter(Tensor &tensor) {
  Node node;
  node.op = Op::kParameter;
  node.rows = tensor.rows();
  node.cols = tensor.cols();
  node.value = tensor.values().data();
  node.external_grad = tensor.grads().data();
  node.needs_grad = record_gradients_;
  return {Push(std::move(node))};
}

Expr Tape::Lookup(Tensor &table, int row) {
  if (row < 0 || row >= table.rows()) {
    throw ShapeError("lookup row " + std::to_string(row) + " out of range for " +
                     table.name());
  }
  Node node;
  node.op = Op::kLookup;
  node.rows = table.cols();
  node.cols = 1;
  node.aux = row;
  node.value = table.values().data() + static_cast<size_t>(row) * table.cols();
  node.external_grad = table.grads().data() + static_cast<size_t>(row) * table.cols();
  node.needs_grad = record_gradients_;
  return {Push(std::move(node))};
}

Expr Tape::MatVec(Expr matrix, Expr x) {
  const Node &w = Checked(matrix);
  const Node &v = Checked(x);
  if (v.cols != 1 || w.cols != v.rows) {
    throw ShapeError("matvec: " + std::to_string(w.rows) + "x" + std::to_string(w.cols) +
                     " times " + std::to_string(v.rows) + "x" + std::to_string(v.cols));
  }
  Node node = MakeNode(Op::kMatVec, w.rows);
  node.in0 = matrix.id;
  node.in1 = x.id;
  VectorMap(node.value_storage.data(), w.rows) =
      ConstMatrixMap(w.value, w.rows, w.cols) * ConstVectorMap(v.value, v.rows);
  return {Push(std::move(node))};
}

Expr Tape::Affine(Expr matrix, Expr x, Expr bias) {
  const Node &w = Checked(matrix);
  const Node &v = Checked(x);
  const Node &b = Checked(bias);
  if (v.cols != 1 || w.cols != v.rows || b.rows * b.cols != w.rows) {
    throw ShapeError("affine: " + std::to_string(w.rows) + "x" + std::to_string(w.cols) +
                     " times " + std::to_string(v.rows) + " plus " +
                     std::to_string(b.rows * b.cols));
  }
  Node node = MakeNode(Op::kAffine, w.rows);
  node.in0 = matrix.id;
  node.in1 = x.id;
  node.in2 = bias.id;
  VectorMap(node.value_storage.data(), w.rows) =
      ConstMatrixMap(w.value, w.rows, w.cols) * ConstVectorMap(v.value, v.rows) +
      ConstVectorMap(b.value, w.rows);
  return {Push(std::move(node))};
}

Expr Tape::Add(Expr a, Expr b) {
  const Node &x = Checked(a);
  const Node &y = Checked(b);
  if (x.rows != y.rows || x.cols != 1 || y.cols != 1) throw ShapeError("add: shape mismatch");
  Node node = MakeNode(Op::kAdd, x.rows);
  node.in0 = a.id;
  node.in1 = b.id;
  for (int i = 0; i < x.rows; ++i) node.value_storage[i] = x.value[i] + y.value[i];
  return {Push(std::move(node))};
}

Expr Tape::Sub(Expr a, Expr b) {
  const Node &x = Checked(a);
  const Node &y = Checked(b);
  if (x.rows != y.rows || x.cols != 1 || y.cols != 1) throw ShapeError("sub: shape mismatch");
  Node node = MakeNode(Op::kSub, x.rows);
  node.in0 = a.id;
  node.in1 = b.id;
  for (int i = 0; i < x.rows; ++i) node.value_storage[i] = x.value[i] - y.value[i];
  return {Push(std::move(node))};
}

Expr Tape::Sum(std::span<const Expr> terms) {
  if (terms.empty()) return Scalar(0.0);
  int rows = Checked(terms[0]).rows;
  Node node = MakeNode(Op::kSum, rows);
  for (Expr term : terms) {
    const Node &t = Checked(term);
    if (t.rows != rows || t.cols != 1) throw ShapeError("sum: shape mismatch");
    for (int i = 0; i < rows; ++i) node.value_storage[i] += t.value[i];
    node.inputs.push_back(term.id);
  }
  return {Push(std::move(node))};
}

Expr Tape::Concat(std::span<const Expr> parts) {
  if (parts.empty()) throw ShapeError("concat: no inputs");
  int rows = 0;
  for (Expr part : parts) {
    const Node &p = Checked(part);
    if (p.cols != 1) throw ShapeError("concat: inputs must be vectors");
    rows += p.rows;
  }
  Node node = MakeNode(Op::kConcat, rows);
  int offset = 0;
  for (Expr part : parts) {
    const Node &p = nodes_[part.id];
    std::copy(p.value, p.value + p.rows, node.value_storage.begin() + offset);
    offset += p.rows;
    node.inputs.push_back(part.id);
  }
  return {Push(std::move(node))};
}

Expr Tape::Concat(std::initializer_list<Expr> parts) {
  return Concat(std::span<const Expr>(parts.begin(), parts.size()));
}

Expr Tape::Slice(Expr x, int offset, int length) {
  const Node &v = Checked(x);
  if (v.cols != 1 || offset < 0 || length <= 0 || offset + length > v.rows) {
    throw ShapeError("slice out of range");
  }
  Node node = MakeNode(Op::kSlice, length);
  node.in0 = x.id;
  node.aux = offset;
  std::copy(v.value + offset, v.value + offset + length, node.value_storage.begin());
  return {Push(std::move(node))};
}

Expr Tape::Relu(Expr x) {
  const Node &v = Checked(x);
  Node node = MakeNode(Op::kRelu, v.rows * v.cols);
  node.in0 = x.id;
  for (size_t i = 0; i < node.value_storage.size(); ++i) {
    node.value_storage[i] = v.value[i] > 0.0 ? v.value[i] : 0.0;
  }
  return {Push(std::move(node))};
}

Expr Tape::Tanh(Expr x) {
  const Node &v = Checked(x);
  Node node = MakeNode(Op::kTanh, v.rows * v.cols);
  node.in0 = x.id;
  for (size_t i = 0; i < node.value_storage.size(); ++i) {
    node.value_storage[i] = std::tanh(v.value[i]);
  }
  return {Push(std::move(node))};
}

Expr Tape::Sigmoid(Expr x) {
  const Node &v = Checked(x);
  Node node = MakeNode(Op::kSigmoid, v.rows * v.cols);
  node.in0 = x.id;
  for (size_t i = 0; i < node.value_storage.size(); ++i) {
    node.value_storage[i] = 1.0 / (1.0 + std::exp(-v.value[i]));
  }
  return {Push(std::move(node))};
}

Expr Tape::Nonlinearity(Expr x, Activation activation) {
  return activation == Activation::kRelu ? Relu(x) : Tanh(x);
}

Expr Tape::CwiseMul(Expr a, Expr b) {
  const Node &x = Checked(a);
  const Node &y = Checked(b);
  if (x.rows != y.rows || x.cols != 1 || y.cols != 1) throw ShapeError("cwise_mul: shape mismatch");
  Node node = MakeNode(Op::kCwiseMul, x.rows);
  node.in0 = a.id;
  node.in1 = b.id;
  for (int i = 0; i < x.rows; ++i) node.value_storage[i] = x.value[i] * y.value[i];
  return {Push(std::move(node))};
}

Expr Tape::Dot(Expr a, Expr b) {
  const Node &x = Checked(a);
  const Node &y = Checked(b);
  if (x.rows * x.cols != y.rows * y.cols) throw ShapeError("dot: shape mismatch");
  Node node = MakeNode(Op::kDot, 1);
  node.in0 = a.id;
  node.in1 = b.id;
  node.value_storage[0] =
      ConstVectorMap(x.value, x.rows * x.cols).dot(ConstVectorMap(y.value, y.rows * y.cols));
  return {Push(std::move(node))};
}

Expr Tape::Bilinear(Expr x, Expr matrix, Expr y) {
  const Node &u = Checked(x);
  const Node &w = Checked(matrix);
  const Node &v = Checked(y);
  if (u.cols != 1 || v.cols != 1 || w.rows != u.rows || w.cols != v.rows) {
    throw ShapeError("bilinear: shape mismatch");
  }
  Node node = MakeNode(Op::kBilinear, 1);
  node.in0 = x.id;
  node.in1 = matrix.id;
  node.in2 = y.id;
  node.value_storage[0] = ConstVectorMap(u.value, u.rows).dot(
      ConstMatrixMap(w.value, w.rows, w.cols) * ConstVectorMap(v.value, v.rows));
  return {Push(std::move(node))};
}

Expr Tape::Pick(Expr x, int index) {
  const Node &v = Checked(x);
  if (index < 0 || index >= v.rows * v.cols) {
    throw ShapeError("pick index " + std::to_string(index) + " out of range");
  }
  Node node = MakeNode(Op::kPick, 1);
  node.in0 = x.id;
  node.aux = index;
  node.value_storage[0] = v.value[index];
  return {Push(std::move(node))};
}

Expr Tape::Hinge(Expr x) {
  const Node &v = Checked(x);
  if (v.rows * v.cols != 1) throw ShapeError("hinge expects a scalar");
  Node node = MakeNode(Op::kHinge, 1);
  node.in0 = x.id;
  node.value_storage[0] = std::max(0.0, v.value[0]);
  return {Push(std::move(node))};
}

Expr Tape::AddConstant(Expr x, double constant) {
  const Node &v = Checked(x);
  Node node = MakeNode(Op::kAddConstant, v.rows * v.cols);
  node.in0 = x.id;
  for (size_t i = 0; i < node.value_storage.size(); ++i) {
    node.value_storage[i] = v.value[i] + constant;
  }
  return {Push(std::move(node))};
}

Expr Tape::Dropout(Expr x, double ratio, bool training, Rng &rng) {
  if (!(ratio >= 0.0 && ratio < 1.0)) {
    throw ShapeError("dropout ratio must lie in [0, 1), got " + std::to_string(ratio));
  }
  if (!training || ratio == 0.0) return x;
  const Node &v = Checked(x);
  Node node = MakeNode(Op::kDropout, v.rows * v.cols);
  node.in0 = x.id;
  node.mask.resize(node.value_storage.size());
  std::bernoulli_distribution keep(1.0 - ratio);
  const double scale = 1.0 / (1.0 - ratio);
  for (size_t i = 0; i < node.mask.size(); ++i) {
    node.mask[i] = keep(rng) ? scale : 0.0;
    node.value_storage[i] = v.value[i] * node.mask[i];
  }
  return {Push(std::move(node))};
}

std::span<const double> Tape::Value(Expr x) const {
  const Node &node = Checked(x);
  return {node.value, static_cast<size_t>(node.rows) * node.cols};
}

double Tape::ScalarValue(Expr x) const {
  const Node &node = Checked(x);
  if (node.rows * node.cols != 1) throw ShapeError("expression is not a scalar");
  return node.value[0];
}

std::span<const double> Tape::Gradient(Expr x) const {
  const Node &node = Checked(x);
  if (node.external_grad != nullptr) {
    return {node.external_grad, static_cast<size_t>(node.rows) * node.cols};
  }
  return node.grad_storage;
}

double *Tape::GradBuffer(int id) {
  Node &node = nodes_[id];
  if (node.external_grad != nullptr) return node.external_grad;
  if (node.grad_storage.empty()) {
    node.grad_storage.assign(static_cast<size_t>(node.rows) * node.cols, 0.0);
  }
  return node.grad_storage.data();
}

void Tape::Backward(Expr loss) {
  const Node &root = Checked(loss);
  if (!record_gradients_) throw ShapeError("backward on a tape without gradients");
  if (root.rows * root.cols != 1) throw ShapeError("backward requires a scalar loss");
  for (Node &node : nodes_) node.grad_storage.clear();
  if (!root.needs_grad) return;
  GradBuffer(loss.id)[0] = 1.0;
  for (int id = loss.id; id >= 0; --id) BackwardNode(id);
}

void Tape::BackwardNode(int id) {
  Node &node = nodes_[id];
  if (!node.needs_grad || node.external_grad != nullptr || node.grad_storage.empty()) {
    return;
  }
  const int n = node.rows * node.cols;
  std::vector<double> dy(node.grad_storage.begin(), node.grad_storage.end());
  if (static_cast<int>(node.op) == g_fault_op.load()) {
    for (double &g : dy) g *= 1.5;
  }
  auto wants = [&](int input) { return input >= 0 && nodes_[input].needs_grad; };
  ConstVectorMap dy_vec(dy.data(), n);

  switch (node.op) {
    case Op::kConstant:
    case Op::kParameter:
    case Op::kLookup:
      break;
    case Op::kMatVec:
    case Op::kAffine: {
      const Node &w = nodes_[node.in0];
      const Node &x = nodes_[node.in1];
      if (wants(node.in0)) {
        MatrixMap(GradBuffer(node.in0), w.rows, w.cols).noalias() +=
            dy_vec * ConstVectorMap(x.value, x.rows).transpose();
      }
      if (wants(node.in1)) {
        VectorMap(GradBuffer(node.in1), x.rows).noalias() +=
            ConstMatrixMap(w.value, w.rows, w.cols).transpose() * dy_vec;
      }
      if (node.op == Op::kAffine && wants(node.in2)) {
        VectorMap(GradBuffer(node.in2), n) += dy_vec;
      }
      break;
    }
    case Op::kAdd:
    case Op::kSub: {
      if (wants(node.in0)) VectorMap(GradBuffer(node.in0), n) += dy_vec;
      if (wants(node.in1)) {
        if (node.op == Op::kAdd) {
          VectorMap(GradBuffer(node.in1), n) += dy_vec;
        } else {
          VectorMap(GradBuffer(node.in1), n) -= dy_vec;
        }
      }
      break;
    }
    case Op::kSum:
      for (int input : node.inputs) {
        if (wants(input)) VectorMap(GradBuffer(input), n) += dy_vec;
      }
      break;
    case Op::kConcat: {
      int offset = 0;
      for (int input : node.inputs) {
        int rows = nodes_[input].rows;
        if (wants(input)) {
          VectorMap(GradBuffer(input), rows) += dy_vec.segment(offset, rows);
        }
        offset += rows;
      }
      break;
    }
    case Op::kSlice:
      if (wants(node.in0)) {
        double *dx = GradBuffer(node.in0) + node.aux;
        for (int i = 0; i < n; ++i) dx[i] += dy[i];
      }
      break;
    case Op::kRelu:
      if (wants(node.in0)) {
        const double *x = nodes_[node.in0].value;
        double *dx = GradBuffer(node.in0);
        for (int i = 0; i < n; ++i) {
          if (x[i] > 0.0) dx[i] += dy[i];
        }
      }
      break;
    case Op::kTanh:
      if (wants(node.in0)) {
        double *dx = GradBuffer(node.in0);
        for (int i = 0; i < n; ++i) dx[i] += dy[i] * (1.0 - node.value[i] * node.value[i]);
      }
      break;
    case Op::kSigmoid:
      if (wants(node.in0)) {
        double *dx = GradBuffer(node.in0);
        for (int i = 0; i < n; ++i) dx[i] += dy[i] * node.value[i] * (1.0 - node.value[i]);
      }
      break;
    case Op::kCwiseMul: {
      const double *a = nodes_[node.in0].value;
      const double *b = nodes_[node.in1].value;
      if (wants(node.in0)) {
        double *da = GradBuffer(node.in0);
        for (int i = 0; i < n; ++i) da[i] += dy[i] * b[i];
      }
      if (wants(node.in1)) {
        double *db = GradBuffer(node.in1);
        for (int i = 0; i < n; ++i) db[i] += dy[i] * a[i];
      }
      break;
    }
    case Op::kDot: {
      const Node &a = nodes_[node.in0];
      const Node &b = nodes_[node.in1];
      int len = a.rows * a.cols;
      if (wants(node.in0)) {
        VectorMap(GradBuffer(node.in0), len) += dy[0] * ConstVectorMap(b.value, len);
      }
      if (wants(node.in1)) {
        VectorMap(GradBuffer(node.in1), len) += dy[0] * ConstVectorMap(a.value, len);
      }
      break;
    }
    case Op::kBilinear: {
      const Node &x = nodes_[node.in0];
      const Node &w = nodes_[node.in1];
      const Node &y = nodes_[node.in2];
      ConstMatrixMap wm(w.value, w.rows, w.cols);
      ConstVectorMap xv(x.value, x.rows);
      ConstVectorMap yv(y.value, y.rows);
      if (wants(node.in0)) VectorMap(GradBuffer(node.in0), x.rows) += dy[0] * (wm * yv);
      if (wants(node.in1)) {
        MatrixMap(GradBuffer(node.in1), w.rows, w.cols).noalias() += dy[0] * xv * yv.transpose();
      }
      if (wants(node.in2)) {
        VectorMap(GradBuffer(node.in2), y.rows) += dy[0] * (wm.transpose() * xv);
      }
      break;
    }
    case Op::kPick:
      if (wants(node.in0)) GradBuffer(node.in0)[node.aux] += dy[0];
      break;
    case Op::kHinge:
      if (wants(node.in0) && nodes_[node.in0].value[0] > 0.0) {
        GradBuffer(node.in0)[0] += dy[0];
      }
      break;
    case Op::kAddConstant:
      if (wants(node.in0)) VectorMap(GradBuffer(node.in0), n) += dy_vec;
      break;
    case Op::kDropout:
      if (wants(node.in0)) {
        double *dx = GradBuffer(node.in0);
        for (int i = 0; i < n; ++i) dx[i] += dy[i] * node.mask[i];
      }
      break;
    default:
      throw ShapeError("no backward rule for " + Describe(node.op));
  }
}

std::vector<bool> Tape::Ancestors(Expr loss) const {
  Checked(loss);
  std::vector<bool> marked(nodes_.size(), false);
  marked[loss.id] = true;
  for (int id = loss.id; id >= 0; --id) {
    if (!marked[id]) continue;
    const Node &node = nodes_[id];
    for (int input : {node.in0, node.in1, node.in2}) {
      if (input >= 0) marked[input] = true;
    }
    for (int input : node.inputs) marked[input] = true;
  }
  return marked;
}

uint64_t Tape::KinkSignature(Expr loss) const {
  std::vector<bool> marked = Ancestors(loss);
  uint64_t hash = kFnvOffset;
  for (int id = 0; id <= loss.id; ++id) {
    if (!marked[id]) continue;
    const Node &node = nodes_[id];
    Mix(hash, static_cast<uint64_t>(node.op));
    Mix(hash, static_cast<uint64_t>(node.aux));
    for (int input : {node.in0, node.in1, node.in2}) Mix(hash, static_cast<uint64_t>(input + 1));
    for (int input : node.inputs) Mix(hash, static_cast<uint64_t>(input + 1));
    switch (node.op) {
      case Op::kRelu:
      case Op::kHinge: {
        const Node &in = nodes_[node.in0];
        for (int i = 0; i < in.rows * in.cols; ++i) Mix(hash, in.value[i] > 0.0);
        break;
      }
      case Op::kDropout:
        for (double m : node.mask) Mix(hash, m != 0.0);
        break;
      default:
        break;
    }
  }
  return hash;
}

double Tape::KinkDistance(Expr loss) const {
  std::vector<bool> marked = Ancestors(loss);
  double distance = std::numeric_limits<double>::infinity();
  for (int id = 0; id <= loss.id; ++id) {
    if (!marked[id]) continue;
    const Node &node = nodes_[id];
    if (node.op == Op::kRelu || node.op == Op::kHinge) {
      const Node &in = nodes_[node.in0];
      for (int i = 0; i < in.rows * in.cols; ++i) {
        distance = std::min(distance, std::abs(in.value[i]));
      }
    }
  }
  return distance;
}

}  // namespace spanparser::nn
