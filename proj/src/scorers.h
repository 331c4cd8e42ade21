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

#ifndef SPANPARSER_SCORERS_H_
#define SPANPARSER_SCORERS_H_

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "encoder.h"
#include "label_loss.h"
#include "model.h"
#include "nn/tape.h"
#include "treebank.h"

namespace spanparser {

// Identifies the output units behind a label score: the atomic index in
// `top` for atomic scorers, or the (top, middle, bottom) part indices.
struct LabelKey {
  int top = 0;
  int middle = 0;
  int bottom = 0;

  auto operator<=>(const LabelKey &) const = default;
};

struct LabelChoice {
  CompositeLabel label;
  LabelKey key;
  double score = 0.0;
  // score + delta(label, gold) under loss augmentation, else score.
  double augmented = 0.0;
};

// Adds delta(label, *gold) to every label score.
struct LabelAugment {
  const CompositeLabel *gold = nullptr;
  LabelLossKind kind = LabelLossKind::kZeroOne;
};

// Uniform read access to label and split scores for one sentence. Methods
// are non-const because implementations memoize.
class ScoreSource {
 public:
  virtual ~ScoreSource() = default;

  virtual int length() const = 0;

  // Highest-scoring label (after augmentation, if given). Ties go to the
  // lowest index; allow_empty == false excludes the empty label.
  virtual LabelChoice BestLabel(Span span, bool allow_empty,
                                const LabelAugment *augment = nullptr) = 0;

  // Score of a particular label, or nullopt if the scorer cannot produce it.
  // For three-part scoring this is the best triple composing to the label.
  virtual std::optional<LabelChoice> ScoreLabel(Span span, const CompositeLabel &label) = 0;

  // Requires i < k < j.
  virtual double SplitScore(int i, int k, int j) = 0;

  int64_t split_evals() const { return split_evals_; }

 protected:
  void CheckSpan(Span span) const;
  void CheckSplit(int i, int k, int j) const;

  int64_t split_evals_ = 0;
};

// Explicit score tables over an atomic label list whose entry 0 is the empty
// label. Used by tests and the verification suites.
class TableScores : public ScoreSource {
 public:
  TableScores(int length, std::vector<CompositeLabel> labels);

  int length() const override { return length_; }
  const std::vector<CompositeLabel> &labels() const { return labels_; }

  double &label_score(Span span, int label);
  double label_score(Span span, int label) const;
  double &split_score(int i, int k, int j);
  double split_score(int i, int k, int j) const;

  LabelChoice BestLabel(Span span, bool allow_empty,
                        const LabelAugment *augment = nullptr) override;
  std::optional<LabelChoice> ScoreLabel(Span span, const CompositeLabel &label) override;
  double SplitScore(int i, int k, int j) override;

 private:
  int length_;
  std::vector<CompositeLabel> labels_;
  std::vector<double> label_scores_;
  std::vector<double> split_scores_;
};

struct ScoreCounters {
  // Spans whose label scores were computed.
  int64_t label_evals = 0;
  // Span-level network evaluations per split network (left/right or single).
  std::array<int64_t, 2> span_evals = {0, 0};
  // Split-level network evaluations (concatenation and biaffine scorers).
  int64_t split_network_evals = 0;
};

// Scores computed by a model on a tape. Every score is an expression on the
// tape, so decoders read plain values while losses reuse the same nodes.
class NeuralScores : public ScoreSource {
 public:
  NeuralScores(nn::Tape &tape, Model &model, const SentenceEncoding &encoding);

  int length() const override { return encoding_.length; }

  LabelChoice BestLabel(Span span, bool allow_empty,
                        const LabelAugment *augment = nullptr) override;
  std::optional<LabelChoice> ScoreLabel(Span span, const CompositeLabel &label) override;
  double SplitScore(int i, int k, int j) override;

  nn::Expr LabelExpr(Span span, const LabelKey &key);
  nn::Expr SplitExpr(int i, int k, int j);

  // Full label score vector (atomic scorer) or one part vector (part 0, 1, 2
  // for top, middle, bottom).
  nn::Expr LabelVector(Span span, int part = 0);
  // Per-span score from split network `net` (minimal and left/right scorers).
  nn::Expr SpanScore(Span span, int net);

  // Evaluates every span score once up front. Only meaningful for the
  // decomposable scorers; throws ConfigError otherwise.
  void PrecomputeSpanScores();

  const ScoreCounters &counters() const { return counters_; }
  Model &model() { return model_; }
  nn::Tape &tape() { return tape_; }

 private:
  int SpanIndex(Span span) const { return span.left * (encoding_.length + 1) + span.right; }
  nn::Expr Rep(Span span);
  nn::Expr BiaffineHidden(Span span, int side);
  const std::vector<double> &Deltas(const LabelAugment &augment);
  double ValueAt(nn::Expr vector, int index) const;

  nn::Tape &tape_;
  Model &model_;
  const SentenceEncoding &encoding_;
  ScoreCounters counters_;
  std::vector<nn::Expr> reps_;
  std::array<std::vector<nn::Expr>, 3> label_vectors_;
  std::array<std::vector<nn::Expr>, 2> span_scores_;
  std::array<std::vector<nn::Expr>, 2> biaffine_hidden_;
  std::map<std::array<int, 3>, nn::Expr> split_exprs_;
  std::map<std::pair<CompositeLabel, LabelLossKind>, std::vector<double>> delta_cache_;
};

// All (top, middle, bottom) decompositions of a label whose parts compose back
// to it: the top may be the first nonterminal or empty, the bottom the last
// nonterminal or empty, and the middle takes the rest.
std::vector<LabelParts> EquivalentDecompositions(const CompositeLabel &label);

}  // namespace spanparser

#endif  // SPANPARSER_SCORERS_H_
