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

#include "trainer.h"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <numeric>

#include "chart_decoder.h"
#include "encoder.h"
#include "error.h"
#include "oracle.h"

namespace spanparser {

std::string ToString(DecoderKind kind) {
  return kind == DecoderKind::kChart ? "chart" : "topdown";
}

DecoderKind ParseDecoder(const std::string &name) {
  if (name == "chart") return DecoderKind::kChart;
  if (name == "topdown") return DecoderKind::kTopdown;
  throw ConfigError("unknown decoder '" + name + "' (expected chart or topdown)");
}

void TrainConfig::Validate() const {
  model.Validate();
  if (batch_size < 1) throw ConfigError("batch_size must be positive");
  if (epochs < 0) throw ConfigError("epochs must not be negative");
  if (eval_every < 1) throw ConfigError("eval_every must be positive");
  if (warmup_epochs < 0) throw ConfigError("warmup_epochs must not be negative");
  if (!(adam.learning_rate > 0.0)) throw ConfigError("learning_rate must be positive");
  if (stop_at_train_f1 < 0.0 || stop_at_train_f1 > 1.0) {
    throw ConfigError("stop_at_train_f1 must lie in [0, 1]");
  }
}

namespace {

nn::Expr DecisionsExpr(NeuralScores &scores, const Decisions &decisions) {
  std::vector<nn::Expr> terms;
  for (const auto &[span, choice] : decisions.labels) {
    terms.push_back(scores.LabelExpr(span, choice.key));
  }
  for (const auto &[span, k] : decisions.splits) {
    terms.push_back(scores.SplitExpr(span.left, k, span.right));
  }
  return scores.tape().Sum(terms);
}

}  // namespace

nn::Expr ChartLoss(NeuralScores &scores, const ParseTree &gold, LabelLossKind loss) {
  nn::Tape &tape = scores.tape();
  GoldIndex index(gold);
  ChartResult predicted = LossAugmentedBest(scores, index.labeling(), loss);
  if (predicted.tree == gold) return tape.Scalar(0.0);
  ChartResult reference = BestGoldBinarization(scores, index);
  const double delta = DecisionsDelta(predicted.decisions, index.labeling(), loss);
  nn::Expr margin = tape.Sub(DecisionsExpr(scores, predicted.decisions),
                             DecisionsExpr(scores, reference.decisions));
  return tape.Hinge(tape.AddConstant(margin, delta));
}

nn::Expr TopdownLoss(NeuralScores &scores, const ParseTree &gold,
                     const RolloutOptions &options) {
  nn::Tape &tape = scores.tape();
  GoldIndex index(gold);
  std::vector<nn::Expr> terms;
  for (const DecisionRecord &record : Rollout(scores, index, options)) {
    const Span span = record.span;
    if (record.augmented_label.label != record.oracle_label.label) {
      const double delta =
          LabelDelta(options.loss, record.augmented_label.label, record.oracle_label.label);
      nn::Expr margin = tape.Sub(scores.LabelExpr(span, record.augmented_label.key),
                                 scores.LabelExpr(span, record.oracle_label.key));
      terms.push_back(tape.Hinge(tape.AddConstant(margin, delta)));
    }
    if (record.augmented_split >= 0 &&
        std::find(record.oracle_splits.begin(), record.oracle_splits.end(),
                  record.augmented_split) == record.oracle_splits.end()) {
      nn::Expr margin =
          tape.Sub(scores.SplitExpr(span.left, record.augmented_split, span.right),
                   scores.SplitExpr(span.left, record.oracle_split, span.right));
      terms.push_back(tape.Hinge(tape.AddConstant(margin, 1.0)));
    }
  }
  return tape.Sum(terms);
}

ParseOutput Parse(Model &model, const Sentence &sentence, DecoderKind decoder) {
  nn::Tape tape(/*record_gradients=*/false);
  nn::Rng unused(0);
  SentenceEncoding encoding = Encode(tape, model, sentence, /*training=*/false, unused);
  NeuralScores scores(tape, model, encoding);
  if (decoder == DecoderKind::kChart) {
    ChartResult result = CkyDecode(scores);
    return {std::move(result.tree), result.score};
  }
  TopdownResult result = GreedyDecode(scores);
  return {std::move(result.tree), result.score};
}

std::vector<ParseTree> ParseCorpus(Model &model, const std::vector<TreebankEntry> &corpus,
                                   DecoderKind decoder) {
  std::vector<ParseTree> trees;
  trees.reserve(corpus.size());
  for (const TreebankEntry &entry : corpus) {
    trees.push_back(Parse(model, entry.sentence, decoder).tree);
  }
  return trees;
}

F1Score EvaluateCorpus(Model &model, const std::vector<TreebankEntry> &corpus,
                       DecoderKind decoder) {
  std::vector<ParseTree> gold;
  for (const TreebankEntry &entry : corpus) gold.push_back(entry.tree);
  return LabeledF1(gold, ParseCorpus(model, corpus, decoder));
}

nn::Expr SentenceLoss(nn::Tape &tape, Model &model, const TreebankEntry &entry,
                      const TrainConfig &config, int epoch, bool training, nn::Rng &rng) {
  SentenceEncoding encoding = Encode(tape, model, entry.sentence, training, rng);
  NeuralScores scores(tape, model, encoding);
  if (config.decoder == DecoderKind::kChart) {
    return ChartLoss(scores, entry.tree, config.label_loss);
  }
  RolloutOptions options;
  options.mode = config.explore && epoch > config.warmup_epochs ? RolloutMode::kExplore
                                                                 : RolloutMode::kGold;
  options.oracle_split = config.oracle_split;
  options.loss = config.label_loss;
  return TopdownLoss(scores, entry.tree, options);
}

double TrainEpoch(Model &model, nn::Adam &optimizer, const std::vector<TreebankEntry> &corpus,
                  const TrainConfig &config, int epoch, nn::Rng &rng) {
  std::vector<size_t> order(corpus.size());
  std::iota(order.begin(), order.end(), 0);
  std::shuffle(order.begin(), order.end(), rng);
  double total = 0.0;
  for (size_t start = 0; start < order.size(); start += config.batch_size) {
    const size_t end = std::min(order.size(), start + config.batch_size);
    for (size_t b = start; b < end; ++b) {
      nn::Tape tape;
      nn::Expr loss = SentenceLoss(tape, model, corpus[order[b]], config, epoch, true, rng);
      const double value = tape.ScalarValue(loss);
      total += value;
      if (value > 0.0) tape.Backward(loss);
    }
    optimizer.Step();
  }
  return total;
}

TrainResult Train(const std::vector<TreebankEntry> &train,
                  const std::vector<TreebankEntry> &dev, const TrainConfig &config,
                  std::ostream *metrics,
                  const std::function<void(const EpochMetrics &)> &on_epoch) {
  config.Validate();
  if (train.empty()) throw DataError("the training corpus is empty");
  auto [vocab, inventory] = BuildVocab(train);
  nn::Rng rng(config.seed);
  TrainResult result;
  result.model = std::make_unique<Model>(config.model, std::move(vocab), std::move(inventory), rng);
  Model &model = *result.model;
  nn::Adam optimizer(model.params(), config.adam);
  std::vector<std::vector<double>> best_values;

  if (metrics) *metrics << "epoch\ttrain_loss\tdev_precision\tdev_recall\tdev_f1\tseconds\n";
  const auto start = std::chrono::steady_clock::now();
  for (int epoch = 1; epoch <= config.epochs; ++epoch) {
    EpochMetrics entry;
    entry.epoch = epoch;
    entry.train_loss = TrainEpoch(model, optimizer, train, config, epoch, rng);
    const bool last = epoch == config.epochs;
    bool stop = false;
    if (config.stop_at_train_f1 > 0.0) {
      entry.train = EvaluateCorpus(model, train, config.decoder);
      stop = entry.train->f1 >= config.stop_at_train_f1;
    }
    if (!dev.empty() && (epoch % config.eval_every == 0 || last || stop)) {
      entry.dev = EvaluateCorpus(model, dev, config.decoder);
      if (entry.dev->f1 > result.best_dev_f1) {
        result.best_dev_f1 = entry.dev->f1;
        result.best_epoch = epoch;
        best_values = model.SnapshotValues();
      }
    }
    entry.seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (metrics) {
      char line[256];
      if (entry.dev) {
        std::snprintf(line, sizeof line, "%d\t%.6f\t%.4f\t%.4f\t%.4f\t%.3f\n", epoch,
                      entry.train_loss, entry.dev->precision, entry.dev->recall, entry.dev->f1,
                      entry.seconds);
      } else {
        std::snprintf(line, sizeof line, "%d\t%.6f\t-\t-\t-\t%.3f\n", epoch, entry.train_loss,
                      entry.seconds);
      }
      *metrics << line << std::flush;
    }
    result.history.push_back(entry);
    if (on_epoch) on_epoch(entry);
    if (stop) break;
  }
  if (!best_values.empty()) {
    model.RestoreValues(best_values);
  } else {
    result.best_epoch = static_cast<int>(result.history.size());
  }
  return result;
}

}  // namespace spanparser
