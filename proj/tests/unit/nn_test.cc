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

#include <cmath>
#include <functional>
#include <random>

#include "doctest.h"
#include "error.h"
#include "nn/gradient_check.h"
#include "nn/layers.h"
#include "nn/tape.h"
#include "nn/tensor.h"

using namespace spanparser;
using namespace spanparser::nn;

namespace {

double Sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

// Uniform values whose magnitude stays at least 0.1 so that ReLU and hinge
// checks never straddle a kink.
void FillAwayFromZero(Tensor &t, Rng &rng) {
  std::uniform_real_distribution<double> magnitude(0.1, 1.0);
  std::bernoulli_distribution sign(0.5);
  for (double &v : t.values()) v = sign(rng) ? magnitude(rng) : -magnitude(rng);
}

std::vector<double> Values(const Tape &tape, Expr x) {
  auto v = tape.Value(x);
  return {v.begin(), v.end()};
}

// Projects a vector expression onto fixed weights, giving a scalar loss.
Expr Project(Tape &tape, Expr x, const std::vector<double> &weights) {
  return tape.Dot(x, tape.Constant(weights));
}

struct OpCase {
  const char *name;
  std::function<Expr(Tape &, Tensor &, Tensor &, Tensor &)> build;
};

}  // namespace

TEST_CASE("affine arithmetic") {
  Tape tape(false);
  // W = 0, b = c gives c.
  Tensor w("w", 3, 2), b("b", 3, 1);
  b.values()[0] = 1.5;
  b.values()[1] = -2;
  b.values()[2] = 0.25;
  Expr out = tape.Affine(tape.Parameter(w), tape.Constant({4, 5}), tape.Parameter(b));
  CHECK(Values(tape, out) == std::vector<double>{1.5, -2, 0.25});

  // Identity.
  Tensor eye("eye", 2, 2), zero("zero", 2, 1);
  eye.at(0, 0) = eye.at(1, 1) = 1;
  Expr id = tape.Affine(tape.Parameter(eye), tape.Constant({3, -7}), tape.Parameter(zero));
  CHECK(Values(tape, id) == std::vector<double>{3, -7});

  // Random 3x2 against a hand loop.
  Rng rng(3);
  GlorotInit(w, rng);
  GlorotInit(b, rng);
  std::vector<double> x = {0.3, -1.2};
  Expr r = tape.Affine(tape.Parameter(w), tape.Constant(x), tape.Parameter(b));
  for (int i = 0; i < 3; ++i) {
    double expected = w.at(i, 0) * x[0] + w.at(i, 1) * x[1] + b.values()[i];
    CHECK(tape.Value(r)[i] == doctest::Approx(expected).epsilon(1e-15));
  }

  CHECK_THROWS_AS(tape.Affine(tape.Parameter(w), tape.Constant({1, 2, 3}), tape.Parameter(b)),
                  ShapeError);
}

TEST_CASE("nonlinearities") {
  Tape tape(false);
  CHECK(Values(tape, tape.Relu(tape.Constant({-1, 0, 2}))) == std::vector<double>{0, 0, 2});
  CHECK(tape.Value(tape.Tanh(tape.Scalar(0)))[0] == 0.0);
  CHECK(tape.Value(tape.Sigmoid(tape.Scalar(0)))[0] == 0.5);
  CHECK(tape.ScalarValue(tape.Hinge(tape.Scalar(-0.5))) == 0.0);
  CHECK(tape.ScalarValue(tape.Hinge(tape.Scalar(1.5))) == 1.5);
}

TEST_CASE("every operation matches central differences") {
  const std::vector<double> p3 = {0.7, -0.4, 1.1};
  const std::vector<OpCase> cases = {
      {"matvec", [&](Tape &t, Tensor &m, Tensor &a, Tensor &) {
         return Project(t, t.MatVec(t.Parameter(m), t.Parameter(a)), p3);
       }},
      {"affine", [&](Tape &t, Tensor &m, Tensor &a, Tensor &b) {
         return Project(t, t.Affine(t.Parameter(m), t.Parameter(a), t.Parameter(b)), p3);
       }},
      {"add/sub", [&](Tape &t, Tensor &, Tensor &, Tensor &b) {
         Expr x = t.Parameter(b);
         return Project(t, t.Sub(t.Add(x, x), t.CwiseMul(x, x)), p3);
       }},
      {"sum", [&](Tape &t, Tensor &, Tensor &, Tensor &b) {
         Expr x = t.Parameter(b);
         std::vector<Expr> terms = {x, t.Tanh(x), x};
         return Project(t, t.Sum(terms), p3);
       }},
      {"concat/slice", [&](Tape &t, Tensor &, Tensor &a, Tensor &b) {
         Expr c = t.Concat({t.Parameter(a), t.Parameter(b)});
         return Project(t, t.Slice(c, 1, 3), p3);
       }},
      {"relu", [&](Tape &t, Tensor &, Tensor &, Tensor &b) {
         return Project(t, t.Relu(t.Parameter(b)), p3);
       }},
      {"tanh", [&](Tape &t, Tensor &, Tensor &, Tensor &b) {
         return Project(t, t.Tanh(t.Parameter(b)), p3);
       }},
      {"sigmoid", [&](Tape &t, Tensor &, Tensor &, Tensor &b) {
         return Project(t, t.Sigmoid(t.Parameter(b)), p3);
       }},
      {"cwise_mul", [&](Tape &t, Tensor &, Tensor &, Tensor &b) {
         Expr x = t.Parameter(b);
         return Project(t, t.CwiseMul(x, t.Tanh(x)), p3);
       }},
      {"dot", [&](Tape &t, Tensor &, Tensor &, Tensor &b) {
         Expr x = t.Parameter(b);
         return t.Dot(x, t.Sigmoid(x));
       }},
      {"bilinear", [&](Tape &t, Tensor &m, Tensor &a, Tensor &b) {
         return t.Bilinear(t.Parameter(b), t.Parameter(m), t.Parameter(a));
       }},
      {"pick/hinge/add_constant", [&](Tape &t, Tensor &, Tensor &, Tensor &b) {
         Expr x = t.Parameter(b);
         Expr margin = t.Sub(t.Pick(x, 2), t.Pick(x, 0));
         return t.Hinge(t.AddConstant(margin, 3.0));
       }},
      {"lookup", [&](Tape &t, Tensor &m, Tensor &, Tensor &) {
         return t.Dot(t.Lookup(m, 1), t.Lookup(m, 2));
       }},
      {"dropout", [&](Tape &t, Tensor &, Tensor &, Tensor &b) {
         Rng rng(4);
         return Project(t, t.Dropout(t.Tanh(t.Parameter(b)), 0.3, true, rng), p3);
       }},
  };
  Rng rng(17);
  for (const OpCase &c : cases) {
    CAPTURE(c.name);
    Tensor m("m", 3, 2), a("a", 2, 1), b("b", 3, 1);
    FillAwayFromZero(m, rng);
    FillAwayFromZero(a, rng);
    FillAwayFromZero(b, rng);
    LossBuilder build = [&](Tape &t) { return c.build(t, m, a, b); };
    GradientCheckResult result = GradientCheck(build, {&m, &a, &b});
    CHECK(result.kink_free);
    CHECK(result.max_relative_error <= 1e-4);
  }
}

TEST_CASE("gradient check of a linear function is exact") {
  Tensor w("w", 4, 1);
  Rng rng(1);
  GlorotInit(w, rng);
  LossBuilder build = [&](Tape &t) { return t.Dot(t.Parameter(w), t.Constant({1, -2, 3, 0.5})); };
  GradientCheckResult result = GradientCheck(build, {&w});
  CHECK(result.max_relative_error < 1e-9);
}

TEST_CASE("corrupted backward rule is detected") {
  Tensor m("m", 3, 2), a("a", 2, 1), b("b", 3, 1);
  Rng rng(2);
  FillAwayFromZero(m, rng);
  FillAwayFromZero(a, rng);
  FillAwayFromZero(b, rng);
  LossBuilder build = [&](Tape &t) {
    return t.Dot(t.Tanh(t.Affine(t.Parameter(m), t.Parameter(a), t.Parameter(b))),
                 t.Constant({1, 2, 3}));
  };
  SetGradientFault(Op::kAffine);
  GradientCheckResult broken = GradientCheck(build, {&m, &a, &b});
  SetGradientFault(std::nullopt);
  CHECK(broken.max_relative_error > 1e-2);
  CHECK(GradientCheck(build, {&m, &a, &b}).max_relative_error <= 1e-4);
}

TEST_CASE("lstm cell") {
  Tensor weight("w", 4, 2), bias("b", 4, 1);
  LstmWeights lstm{&weight, &bias};
  {
    Tape tape(false);
    LstmState s = LstmStep(tape, lstm, InitialState(tape, 1), tape.Scalar(3.0));
    CHECK(tape.Value(s.h)[0] == 0.0);
  }

  // Hidden size 1, input size 1: rows are the i, f, o, g gates over [x; h].
  const double wx[4] = {0.5, -0.3, 0.8, 1.2}, wh[4] = {0.1, 0.4, -0.2, 0.6};
  const double bb[4] = {0.05, 1.0, -0.1, 0.2};
  for (int g = 0; g < 4; ++g) {
    weight.at(g, 0) = wx[g];
    weight.at(g, 1) = wh[g];
    bias.values()[g] = bb[g];
  }
  const double x = 0.7, h0 = -0.4, c0 = 0.9;
  Tape tape(false);
  LstmState s = LstmStep(tape, lstm, {tape.Scalar(h0), tape.Scalar(c0)}, tape.Scalar(x));
  const double i = Sigmoid(wx[0] * x + wh[0] * h0 + bb[0]);
  const double f = Sigmoid(wx[1] * x + wh[1] * h0 + bb[1]);
  const double o = Sigmoid(wx[2] * x + wh[2] * h0 + bb[2]);
  const double g = std::tanh(wx[3] * x + wh[3] * h0 + bb[3]);
  const double c = f * c0 + i * g;
  CHECK(tape.Value(s.c)[0] == doctest::Approx(c).epsilon(1e-14));
  CHECK(tape.Value(s.h)[0] == doctest::Approx(o * std::tanh(c)).epsilon(1e-14));

  CHECK_THROWS_AS(LstmStep(tape, lstm, InitialState(tape, 1), tape.Constant({1, 2})), ShapeError);
}

TEST_CASE("two-step lstm gradient") {
  Tensor weight("w", 12, 5), bias("b", 12, 1);
  Rng rng(8);
  GlorotInit(weight, rng);
  GlorotInit(bias, rng);
  LstmWeights lstm{&weight, &bias};
  LossBuilder build = [&](Tape &t) {
    LstmState s = InitialState(t, 3);
    s = LstmStep(t, lstm, s, t.Constant({0.5, -1.0}));
    s = LstmStep(t, lstm, s, t.Constant({0.2, 0.9}));
    return t.Dot(t.Add(s.h, s.c), t.Constant({1.0, -0.5, 2.0}));
  };
  GradientCheckResult result = GradientCheck(build, {&weight, &bias});
  CHECK(result.kink_free);
  CHECK(result.max_relative_error <= 1e-4);
}

TEST_CASE("dropout") {
  Rng rng(9);
  Tape tape(false);
  Expr x = tape.Constant({1, 2, 3});
  CHECK(Values(tape, tape.Dropout(x, 0.0, true, rng)) == std::vector<double>{1, 2, 3});
  CHECK(Values(tape, tape.Dropout(x, 0.7, false, rng)) == std::vector<double>{1, 2, 3});
  CHECK_THROWS_AS(tape.Dropout(x, 1.0, true, rng), ShapeError);
  CHECK_THROWS_AS(tape.Dropout(x, -0.1, true, rng), ShapeError);

  const int n = 100000;
  std::vector<double> input(n);
  std::uniform_real_distribution<double> u(0.5, 1.5);
  for (double &v : input) v = u(rng);
  Expr big = tape.Dropout(tape.Constant(input), 0.4, true, rng);
  auto out = tape.Value(big);
  int zeros = 0;
  double in_mean = 0, out_mean = 0;
  for (int k = 0; k < n; ++k) {
    zeros += out[k] == 0.0;
    in_mean += input[k] / n;
    out_mean += out[k] / n;
    if (out[k] != 0.0) CHECK(out[k] == doctest::Approx(input[k] / 0.6));
  }
  CHECK(std::abs(zeros / double(n) - 0.4) < 0.01);
  CHECK(std::abs(out_mean / in_mean - 1.0) < 0.02);
}

TEST_CASE("glorot initialization") {
  Rng rng(21);
  Tensor one("one", 1, 1);
  for (int k = 0; k < 100; ++k) {
    GlorotInit(one, rng);
    CHECK(std::abs(one.values()[0]) <= std::sqrt(3.0));
  }
  Tensor big("big", 100, 100);
  GlorotInit(big, rng);
  double mean = 0, var = 0;
  for (double v : big.values()) mean += v / big.size();
  for (double v : big.values()) var += (v - mean) * (v - mean) / big.size();
  const double expected = 2.0 / 200;
  CHECK(std::abs(var / expected - 1.0) < 0.1);

  Rng a(5), b(5);
  Tensor t1("t", 7, 3), t2("t", 7, 3);
  GlorotInit(t1, a);
  GlorotInit(t2, b);
  CHECK(std::equal(t1.values().begin(), t1.values().end(), t2.values().begin()));
}

TEST_CASE("adam single steps") {
  ParameterSet params;
  Tensor &x = params.Add("x", 2, 1);
  Tensor &y = params.Add("y", 1, 1);
  x.values()[0] = 1.0;
  x.values()[1] = -2.0;
  y.values()[0] = 0.5;
  Adam adam(params);

  // Zero gradient: nothing moves.
  adam.Step();
  CHECK(x.values()[0] == 1.0);
  CHECK(x.values()[1] == -2.0);
  CHECK(y.values()[0] == 0.5);

  ParameterSet fresh;
  Tensor &p = fresh.Add("p", 3, 1);
  Adam first(fresh);
  // Proportional gradients move by the same magnitude, -lr * sign(g) up to
  // epsilon.
  p.grads()[0] = 0.3;
  p.grads()[1] = 30.0;
  p.grads()[2] = -4.0;
  first.Step();
  const double lr = 0.001;
  CHECK(p.values()[0] == doctest::Approx(-lr * 0.3 / (0.3 + 1e-8)).epsilon(1e-12));
  CHECK(p.values()[1] == doctest::Approx(-lr).epsilon(1e-9));
  CHECK(p.values()[2] == doctest::Approx(lr).epsilon(1e-9));
  CHECK(std::abs(std::abs(p.values()[0]) - std::abs(p.values()[1])) < 1e-10);
  CHECK(p.grads()[0] == 0.0);
  CHECK(first.step_count() == 1);
}

TEST_CASE("parameter set bookkeeping") {
  ParameterSet params;
  params.Add("a", 2, 3);
  params.Add("b", 4, 1);
  CHECK(params.ParameterCount() == 10);
  CHECK(params.Get("b").rows() == 4);
  CHECK_THROWS_AS(params.Add("a", 1, 1), ShapeError);
  CHECK_THROWS_AS(params.Get("missing"), ShapeError);
}

TEST_CASE("backward accumulates into shared parameters") {
  Tensor w("w", 2, 1);
  w.values()[0] = 2.0;
  w.values()[1] = -1.0;
  Tape tape;
  Expr x = tape.Parameter(w);
  // loss = x.x + sum(x) -> gradient 2x + 1.
  Expr loss = tape.Add(tape.Dot(x, x), tape.Dot(x, tape.Constant({1, 1})));
  tape.Backward(loss);
  CHECK(w.grads()[0] == 5.0);
  CHECK(w.grads()[1] == -1.0);
  CHECK_THROWS_AS(tape.Backward(x), ShapeError);
}
