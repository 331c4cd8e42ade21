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

#include "nn/gradient_check.h"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace spanparser::nn {

namespace {

struct Evaluation {
  double value;
  uint64_t signature;
};

Evaluation Evaluate(const LossBuilder &build) {
  Tape tape(/*record_gradients=*/false);
  Expr loss = build(tape);
  return {tape.ScalarValue(loss), tape.KinkSignature(loss)};
}

}  // namespace

GradientCheckResult GradientCheck(const LossBuilder &build,
                                  const std::vector<Tensor *> &params,
                                  const GradientCheckOptions &options) {
  GradientCheckResult result;
  for (Tensor *tensor : params) tensor->ZeroGrad();

  uint64_t base_signature;
  {
    Tape tape;
    Expr loss = build(tape);
    result.loss = tape.ScalarValue(loss);
    base_signature = tape.KinkSignature(loss);
    tape.Backward(loss);
  }
  std::vector<std::vector<double>> analytic;
  for (Tensor *tensor : params) {
    analytic.emplace_back(tensor->grads().begin(), tensor->grads().end());
    tensor->ZeroGrad();
  }

  Rng rng(options.coordinate_seed);
  for (size_t t = 0; t < params.size(); ++t) {
    Tensor &tensor = *params[t];
    std::vector<int> coordinates(tensor.size());
    std::iota(coordinates.begin(), coordinates.end(), 0);
    if (options.max_coordinates_per_tensor > 0 &&
        static_cast<int>(coordinates.size()) > options.max_coordinates_per_tensor) {
      std::shuffle(coordinates.begin(), coordinates.end(), rng);
      coordinates.resize(options.max_coordinates_per_tensor);
    }
    for (int c : coordinates) {
      double &theta = tensor.values()[c];
      const double saved = theta;
      theta = saved + options.step;
      Evaluation plus = Evaluate(build);
      theta = saved - options.step;
      Evaluation minus = Evaluate(build);
      theta = saved;
      if (plus.signature != base_signature || minus.signature != base_signature) {
        result.kink_free = false;
        result.worst_coordinate = tensor.name() + "[" + std::to_string(c) + "] crosses a kink";
        return result;
      }
      double numeric = (plus.value - minus.value) / (2.0 * options.step);
      double exact = analytic[t][c];
      double denom = std::max({std::abs(exact), std::abs(numeric), options.denominator_floor});
      double error = std::abs(exact - numeric) / denom;
      ++result.coordinates_checked;
      result.max_absolute_error = std::max(result.max_absolute_error, std::abs(exact - numeric));
      if (error > options.report_above) {
        result.violations.push_back({static_cast<int>(t), c, exact, numeric, error});
      }
      if (error > result.max_relative_error) {
        result.max_relative_error = error;
        result.worst_coordinate = tensor.name() + "[" + std::to_string(c) +
                                  "] analytic=" + std::to_string(exact) +
                                  " numeric=" + std::to_string(numeric);
      }
    }
  }
  return result;
}

double CentralDifference(const LossBuilder &build, Tensor &tensor, int coordinate, double step) {
  double &theta = tensor.values()[coordinate];
  const double saved = theta;
  theta = saved + step;
  const double plus = Evaluate(build).value;
  theta = saved - step;
  const double minus = Evaluate(build).value;
  theta = saved;
  return (plus - minus) / (2.0 * step);
}

}  // namespace spanparser::nn
