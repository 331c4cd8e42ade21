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

#ifndef SPANPARSER_TRAINER_H_
#define SPANPARSER_TRAINER_H_

#include <functional>
#include <memory>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "label_loss.h"
#include "model.h"
#include "nn/tape.h"
#include "nn/tensor.h"
#include "scorers.h"
#include "topdown_decoder.h"
#include "treebank.h"

namespace spanparser {

enum class DecoderKind { kChart, kTopdown };

std::string ToString(DecoderKind kind);
// Throws ConfigError on names other than "chart" and "topdown".
DecoderKind ParseDecoder(const std::string &name);

struct TrainConfig {
  ModelConfig model;
  nn::AdamConfig adam;
  DecoderKind decoder = DecoderKind::kChart;
  LabelLossKind label_loss = LabelLossKind::kZeroOne;
  int batch_size = 10;
  int epochs = 10;
  // Dev evaluation every this many epochs (and after the last one).
  int eval_every = 1;
  uint64_t seed = 1;
  // Top-down training follows the model's own splits after this many
  // gold-rollout epochs.
  bool explore = true;
  int warmup_epochs = 0;
  OracleSplitChoice oracle_split = OracleSplitChoice::kLeftmost;
  // When positive, training F1 is measured after every epoch and training
  // stops once it reaches this value.
  double stop_at_train_f1 = 0.0;

  void Validate() const;
};

// Loss-augmented structured hinge of the chart parser: zero when the
// augmented argmax equals the gold tree, otherwise
//   max(0, delta(T^, T*) + s(T^) - s(T*))
// with s(T*) taken over the best binarization of the gold tree.
nn::Expr ChartLoss(NeuralScores &scores, const ParseTree &gold, LabelLossKind loss);

// Sum of local hinges over the rollout's decision points. Labels use the
// loss-augmented argmax with margin delta(label, gold label); splits use the
// argmax with a +1 bonus for non-oracle splits and margin 1.
nn::Expr TopdownLoss(NeuralScores &scores, const ParseTree &gold,
                     const RolloutOptions &options);

struct ParseOutput {
  ParseTree tree;
  double score = 0.0;
};

// Inference on a fresh gradient-free tape. Safe to call concurrently.
ParseOutput Parse(Model &model, const Sentence &sentence, DecoderKind decoder);

std::vector<ParseTree> ParseCorpus(Model &model, const std::vector<TreebankEntry> &corpus,
                                   DecoderKind decoder);

F1Score EvaluateCorpus(Model &model, const std::vector<TreebankEntry> &corpus,
                       DecoderKind decoder);

struct EpochMetrics {
  int epoch = 0;
  double train_loss = 0.0;
  std::optional<F1Score> dev;
  std::optional<F1Score> train;
  double seconds = 0.0;
};

struct TrainResult {
  std::unique_ptr<Model> model;
  std::vector<EpochMetrics> history;
  int best_epoch = 0;
  double best_dev_f1 = -1.0;
};

// Trains a model from scratch. Every random choice flows from config.seed.
// Metrics go to `metrics` as tab-separated lines:
//   epoch  train_loss  dev_precision  dev_recall  dev_f1  seconds
// The returned model holds the parameters of the best dev evaluation (the
// final ones when `dev` is empty). Throws DataError on an empty corpus.
TrainResult Train(const std::vector<TreebankEntry> &train,
                  const std::vector<TreebankEntry> &dev, const TrainConfig &config,
                  std::ostream *metrics = nullptr,
                  const std::function<void(const EpochMetrics &)> &on_epoch = {});

// One optimization pass over a corpus for an existing model.
double TrainEpoch(Model &model, nn::Adam &optimizer, const std::vector<TreebankEntry> &corpus,
                  const TrainConfig &config, int epoch, nn::Rng &rng);

// Sentence loss for the configured decoder on the given tape.
nn::Expr SentenceLoss(nn::Tape &tape, Model &model, const TreebankEntry &entry,
                      const TrainConfig &config, int epoch, bool training, nn::Rng &rng);

}  // namespace spanparser

#endif  // SPANPARSER_TRAINER_H_
