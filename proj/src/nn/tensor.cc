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

#include "nn/tensor.h"

#include <algorithm>
#include <cmath>

#include "error.h"

namespace spanparser::nn {

Tensor::Tensor(std::string name, int rows, int cols)
    : name_(std::move(name)), rows_(rows), cols_(cols) {
  if (rows <= 0 || cols <= 0) {
    throw ShapeError("tensor " + name_ + " must have a nonempty shape");
  }
  values_.assign(static_cast<size_t>(rows) * cols, 0.0);
  grads_.assign(values_.size(), 0.0);
}

void Tensor::ZeroGrad() { std::fill(grads_.begin(), grads_.end(), 0.0); }

void Tensor::Fill(double value) { std::fill(values_.begin(), values_.end(), value); }

Tensor &ParameterSet::Add(const std::string &name, int rows, int cols) {
  if (Has(name)) throw ShapeError("duplicate parameter " + name);
  index_[name] = size();
  tensors_.push_back(std::make_unique<Tensor>(name, rows, cols));
  return *tensors_.back();
}

Tensor &ParameterSet::Get(const std::string &name) {
  auto it = index_.find(name);
  if (it == index_.end()) throw ShapeError("unknown parameter " + name);
  return *tensors_[it->second];
}

const Tensor &ParameterSet::Get(const std::string &name) const {
  auto it = index_.find(name);
  if (it == index_.end()) throw ShapeError("unknown parameter " + name);
  return *tensors_[it->second];
}

void ParameterSet::ZeroGrad() {
  for (auto &tensor : tensors_) tensor->ZeroGrad();
}

int64_t ParameterSet::ParameterCount() const {
  int64_t count = 0;
  for (const auto &tensor : tensors_) count += tensor->size();
  return count;
}

namespace {

void FillUniform(std::span<double> values, double bound, Rng &rng) {
  std::uniform_real_distribution<double> dist(-bound, bound);
  for (double &v : values) v = dist(rng);
}

}  // namespace

void GlorotInit(Tensor &tensor, Rng &rng) {
  double bound = std::sqrt(6.0 / (tensor.rows() + tensor.cols()));
  FillUniform(tensor.values(), bound, rng);
}

void GlorotInitEmbedding(Tensor &table, Rng &rng) {
  double bound = std::sqrt(6.0 / (2.0 * table.cols()));
  FillUniform(table.values(), bound, rng);
}

Adam::Adam(ParameterSet &params, AdamConfig config)
    : params_(params), config_(config) {
  for (int i = 0; i < params_.size(); ++i) {
    first_moment_.emplace_back(params_.at(i).size(), 0.0);
    second_moment_.emplace_back(params_.at(i).size(), 0.0);
  }
}

void Adam::Step() {
  ++step_;
  const double b1 = config_.beta1, b2 = config_.beta2;
  const double correction1 = 1.0 - std::pow(b1, static_cast<double>(step_));
  const double correction2 = 1.0 - std::pow(b2, static_cast<double>(step_));
  for (int t = 0; t < params_.size(); ++t) {
    Tensor &tensor = params_.at(t);
    auto values = tensor.values();
    auto grads = tensor.grads();
    auto &m = first_moment_[t];
    auto &v = second_moment_[t];
    for (size_t i = 0; i < values.size(); ++i) {
      double g = grads[i];
      m[i] = b1 * m[i] + (1.0 - b1) * g;
      v[i] = b2 * v[i] + (1.0 - b2) * g * g;
      double m_hat = m[i] / correction1;
      double v_hat = v[i] / correction2;
      values[i] -= config_.learning_rate * m_hat / (std::sqrt(v_hat) + config_.epsilon);
    }
    tensor.ZeroGrad();
  }
}

}  // namespace spanparser::nn
