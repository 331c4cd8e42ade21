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

#ifndef SPANPARSER_NN_GRADIENT_CHECK_H_
#define SPANPARSER_NN_GRADIENT_CHECK_H_

#include <functional>
#include <string>
#include <vector>

#include "nn/tape.h"

namespace spanparser::nn {

// Builds a scalar loss on a fresh tape. Must be deterministic: any randomness
// has to be re-seeded on every call.
using LossBuilder = std::function<Expr(Tape &)>;

struct GradientCheckOptions {
  double step = 1e-3;
  // Relative errors are |analytic - numeric| / max(|analytic|, |numeric|,
  // denominator_floor).
  double denominator_floor = 1e-6;
  // Coordinates per tensor; 0 checks every coordinate.
  int max_coordinates_per_tensor = 0;
  uint64_t coordinate_seed = 7;
  // Coordinates whose relative error exceeds this are listed in the result.
  double report_above = 1e-4;
};

struct GradientViolation {
  int tensor;  // index into the params passed to GradientCheck
  int coordinate;
  double analytic;
  double numeric;
  double relative_error;
};

struct GradientCheckResult {
  double max_relative_error = 0.0;
  double max_absolute_error = 0.0;
  int coordinates_checked = 0;
  // False when some perturbation crossed a ReLU, hinge or argmax boundary;
  // the error is meaningless then and the point should be resampled.
  bool kink_free = true;
  double loss = 0.0;
  std::string worst_coordinate;
  std::vector<GradientViolation> violations;
};

// Compares reverse-mode gradients against central differences
// (f(x + h) - f(x - h)) / 2h coordinatewise.
GradientCheckResult GradientCheck(const LossBuilder &build,
                                  const std::vector<Tensor *> &params,
                                  const GradientCheckOptions &options = {});

// (f(x + h) - f(x - h)) / 2h for one coordinate; the value is restored.
double CentralDifference(const LossBuilder &build, Tensor &tensor, int coordinate, double step);

}  // namespace spanparser::nn

#endif  // SPANPARSER_NN_GRADIENT_CHECK_H_
