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

#ifndef SPANPARSER_NN_TENSOR_H_
#define SPANPARSER_NN_TENSOR_H_

#include <map>
#include <memory>
#include <random>
#include <span>
#include <string>
#include <vector>

namespace spanparser::nn {

// All randomness in the library flows from one of these, seeded once.
using Rng = std::mt19937_64;

// A named, trainable row-major matrix (vectors have cols == 1) with a gradient
// buffer of the same shape.
class Tensor {
 public:
  Tensor(std::string name, int rows, int cols);

  const std::string &name() const { return name_; }
  int rows() const { return rows_; }
  int cols() const { return cols_; }
  int size() const { return rows_ * cols_; }

  std::span<double> values() { return values_; }
  std::span<const double> values() const { return values_; }
  std::span<double> grads() { return grads_; }
  std::span<const double> grads() const { return grads_; }

  double &at(int row, int col) { return values_[row * cols_ + col]; }
  double at(int row, int col) const { return values_[row * cols_ + col]; }

  void ZeroGrad();
  void Fill(double value);

 private:
  std::string name_;
  int rows_;
  int cols_;
  std::vector<double> values_;
  std::vector<double> grads_;
};

// Owns the parameters of a model. Tensor addresses are stable.
class ParameterSet {
 public:
  Tensor &Add(const std::string &name, int rows, int cols);
  Tensor &Get(const std::string &name);
  const Tensor &Get(const std::string &name) const;
  bool Has(const std::string &name) const { return index_.count(name) > 0; }

  int size() const { return static_cast<int>(tensors_.size()); }
  Tensor &at(int i) { return *tensors_[i]; }
  const Tensor &at(int i) const { return *tensors_[i]; }

  void ZeroGrad();
  int64_t ParameterCount() const;

 private:
  std::vector<std::unique_ptr<Tensor>> tensors_;
  std::map<std::string, int> index_;
};

// Uniform on [-sqrt(6 / (fan_in + fan_out)), +sqrt(...)], with
// fan_out = rows and fan_in = cols.
void GlorotInit(Tensor &tensor, Rng &rng);

// Embedding tables initialize each row as a vector of its own dimension,
// i.e. fan_in = fan_out = cols.
void GlorotInitEmbedding(Tensor &table, Rng &rng);

struct AdamConfig {
  double learning_rate = 0.001;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

// Bias-corrected Adam over every tensor of a parameter set.
class Adam {
 public:
  explicit Adam(ParameterSet &params, AdamConfig config = {});

  // Applies one update from the accumulated gradients, then clears them.
  void Step();

  int64_t step_count() const { return step_; }
  const AdamConfig &config() const { return config_; }

 private:
  ParameterSet &params_;
  AdamConfig config_;
  std::vector<std::vector<double>> first_moment_;
  std::vector<std::vector<double>> second_moment_;
  int64_t step_ = 0;
};

}  // namespace spanparser::nn

#endif  // SPANPARSER_NN_TENSOR_H_
