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

#include "scorers.h"

#include <limits>
#include <string>

#include "error.h"
#include "nn/layers.h"

namespace spanparser {

void ScoreSource::CheckSpan(Span span) const {
  if (span.left < 0 || span.right > length() || span.left >= span.right) {
    throw ShapeError("span (" + std::to_string(span.left) + ", " + std::to_string(span.right) +
                     ") is out of range for length " + std::to_string(length()));
  }
}

void ScoreSource::CheckSplit(int i, int k, int j) const {
  CheckSpan({i, j});
  if (k <= i || k >= j) {
    throw ShapeError("split point " + std::to_string(k) + " is not strictly inside (" +
                     std::to_string(i) + ", " + std::to_string(j) + ")");
  }
}

std::vector<LabelParts> EquivalentDecompositions(const CompositeLabel &label) {
  if (label.empty()) return {LabelParts{}};
  const auto &chain = label.chain();
  const int size = label.size();
  std::vector<LabelParts> result;
  for (int take_top = 1; take_top >= 0; --take_top) {
    for (int take_bottom = 1; take_bottom >= 0; --take_bottom) {
      if (take_top + take_bottom > size) continue;
      LabelParts parts;
      if (take_top) parts.top = chain.front();
      if (take_bottom) parts.bottom = chain.back();
      parts.middle = CompositeLabel(
          std::vector<std::string>(chain.begin() + take_top, chain.end() - take_bottom));
      result.push_back(std::move(parts));
    }
  }
  return result;
}

// TableScores

TableScores::TableScores(int length, std::vector<CompositeLabel> labels)
    : length_(length), labels_(std::move(labels)) {
  if (length < 1) throw ShapeError("score tables need at least one word");
  if (labels_.empty() || !labels_[0].empty()) {
    throw ShapeError("label list must start with the empty label");
  }
  const size_t fenceposts = length + 1;
  label_scores_.assign(fenceposts * fenceposts * labels_.size(), 0.0);
  split_scores_.assign(fenceposts * fenceposts * fenceposts, 0.0);
}

double &TableScores::label_score(Span span, int label) {
  return label_scores_[(static_cast<size_t>(span.left) * (length_ + 1) + span.right) *
                           labels_.size() +
                       label];
}

double TableScores::label_score(Span span, int label) const {
  return const_cast<TableScores *>(this)->label_score(span, label);
}

double &TableScores::split_score(int i, int k, int j) {
  return split_scores_[(static_cast<size_t>(i) * (length_ + 1) + k) * (length_ + 1) + j];
}

double TableScores::split_score(int i, int k, int j) const {
  return const_cast<TableScores *>(this)->split_score(i, k, j);
}

LabelChoice TableScores::BestLabel(Span span, bool allow_empty, const LabelAugment *augment) {
  CheckSpan(span);
  LabelChoice best;
  best.augmented = -std::numeric_limits<double>::infinity();
  for (int l = allow_empty ? 0 : 1; l < static_cast<int>(labels_.size()); ++l) {
    double score = label_score(span, l);
    double augmented =
        augment ? score + LabelDelta(augment->kind, labels_[l], *augment->gold) : score;
    if (augmented > best.augmented) best = {labels_[l], {l, 0, 0}, score, augmented};
  }
  if (best.augmented == -std::numeric_limits<double>::infinity()) {
    throw StructureError("no nonempty label available");
  }
  return best;
}

std::optional<LabelChoice> TableScores::ScoreLabel(Span span, const CompositeLabel &label) {
  CheckSpan(span);
  for (int l = 0; l < static_cast<int>(labels_.size()); ++l) {
    if (labels_[l] == label) {
      double score = label_score(span, l);
      return LabelChoice{label, {l, 0, 0}, score, score};
    }
  }
  return std::nullopt;
}

double TableScores::SplitScore(int i, int k, int j) {
  CheckSplit(i, k, j);
  ++split_evals_;
  return split_score(i, k, j);
}

// NeuralScores

NeuralScores::NeuralScores(nn::Tape &tape, Model &model, const SentenceEncoding &encoding)
    : tape_(tape), model_(model), encoding_(encoding) {
  const size_t spans = static_cast<size_t>(encoding.length + 1) * (encoding.length + 1);
  reps_.resize(spans);
  for (auto &table : label_vectors_) table.resize(spans);
  for (auto &table : span_scores_) table.resize(spans);
  for (auto &table : biaffine_hidden_) table.resize(spans);
}

nn::Expr NeuralScores::Rep(Span span) {
  nn::Expr &rep = reps_[SpanIndex(span)];
  if (!rep.valid()) rep = SpanRep(tape_, encoding_, span.left, span.right);
  return rep;
}

nn::Expr NeuralScores::LabelVector(Span span, int part) {
  CheckSpan(span);
  const bool atomic = model_.config().label_scorer == LabelScorerKind::kAtomic;
  if (part < 0 || part > (atomic ? 0 : 2)) throw ShapeError("invalid label part");
  nn::Expr &vector = label_vectors_[part][SpanIndex(span)];
  if (!vector.valid()) {
    if (part == 0) ++counters_.label_evals;
    const nn::FeedForward &net = atomic      ? model_.label_net()
                                 : part == 0 ? model_.top_net()
                                 : part == 1 ? model_.middle_net()
                                             : model_.bottom_net();
    vector = nn::Apply(tape_, net, Rep(span), model_.config().activation);
  }
  return vector;
}

nn::Expr NeuralScores::SpanScore(Span span, int net) {
  if (!IsDecomposable(model_.config().split_scorer)) {
    throw ConfigError("span scores exist only for the minimal and left_right split scorers");
  }
  CheckSpan(span);
  if (model_.config().split_scorer == SplitScorerKind::kMinimal) net = 0;
  nn::Expr &score = span_scores_[net][SpanIndex(span)];
  if (!score.valid()) {
    ++counters_.span_evals[net];
    const nn::FeedForward &weights = net == 0 ? model_.left_net() : model_.right_net();
    score = nn::Apply(tape_, weights, Rep(span), model_.config().activation);
  }
  return score;
}

nn::Expr NeuralScores::BiaffineHidden(Span span, int side) {
  nn::Expr &hidden = biaffine_hidden_[side][SpanIndex(span)];
  if (!hidden.valid()) {
    ++counters_.span_evals[side];
    const nn::FeedForward &net = side == 0 ? model_.left_net() : model_.right_net();
    hidden = nn::Hidden(tape_, net, Rep(span), model_.config().activation);
  }
  return hidden;
}

void NeuralScores::PrecomputeSpanScores() {
  if (!IsDecomposable(model_.config().split_scorer)) {
    throw ConfigError("span score precomputation is unsupported for the " +
                      ToString(model_.config().split_scorer) + " split scorer");
  }
  const int nets = model_.config().split_scorer == SplitScorerKind::kLeftRight ? 2 : 1;
  const int n = encoding_.length;
  for (int length = 1; length <= n; ++length) {
    for (int i = 0; i + length <= n; ++i) {
      for (int net = 0; net < nets; ++net) SpanScore({i, i + length}, net);
    }
  }
}

double NeuralScores::ValueAt(nn::Expr vector, int index) const {
  return tape_.Value(vector)[index];
}

const std::vector<double> &NeuralScores::Deltas(const LabelAugment &augment) {
  auto key = std::make_pair(*augment.gold, augment.kind);
  auto it = delta_cache_.find(key);
  if (it != delta_cache_.end()) return it->second;
  std::vector<double> deltas;
  if (model_.config().label_scorer == LabelScorerKind::kAtomic) {
    const LabelInventory &inventory = model_.inventory();
    for (int l = 0; l < inventory.atomic_size(); ++l) {
      deltas.push_back(LabelDelta(augment.kind, inventory.atomic(l), *augment.gold));
    }
  } else {
    for (const LabelTriple &triple : model_.triples()) {
      deltas.push_back(LabelDelta(augment.kind, triple.label, *augment.gold));
    }
  }
  return delta_cache_.emplace(key, std::move(deltas)).first->second;
}

LabelChoice NeuralScores::BestLabel(Span span, bool allow_empty, const LabelAugment *augment) {
  CheckSpan(span);
  const LabelInventory &inventory = model_.inventory();
  constexpr double kNone = -std::numeric_limits<double>::infinity();
  LabelChoice best;
  best.augmented = kNone;

  if (model_.config().label_scorer == LabelScorerKind::kAtomic) {
    auto scores = tape_.Value(LabelVector(span));
    const std::vector<double> *deltas = augment ? &Deltas(*augment) : nullptr;
    int best_index = -1;
    for (int l = allow_empty ? 0 : 1; l < inventory.atomic_size(); ++l) {
      double augmented = deltas ? scores[l] + (*deltas)[l] : scores[l];
      if (augmented > best.augmented) {
        best.augmented = augmented;
        best_index = l;
      }
    }
    if (best_index < 0) throw StructureError("the label inventory has no nonempty label");
    best.label = inventory.atomic(best_index);
    best.key = {best_index, 0, 0};
    best.score = scores[best_index];
    return best;
  }

  auto top = tape_.Value(LabelVector(span, 0));
  auto middle = tape_.Value(LabelVector(span, 1));
  auto bottom = tape_.Value(LabelVector(span, 2));
  if (!augment) {
    // The parts are scored independently, so the best triple is the three
    // separate argmaxes.
    auto argmax = [](std::span<const double> values) {
      int index = 0;
      for (int i = 1; i < static_cast<int>(values.size()); ++i) {
        if (values[i] > values[index]) index = i;
      }
      return index;
    };
    LabelKey key{argmax(top), argmax(middle), argmax(bottom)};
    if (allow_empty || key != LabelKey{}) {
      double score = top[key.top] + middle[key.middle] + bottom[key.bottom];
      return {Compose({inventory.top(key.top), inventory.middle(key.middle),
                       inventory.bottom(key.bottom)}),
              key, score, score};
    }
  }
  const std::vector<double> *deltas = augment ? &Deltas(*augment) : nullptr;
  const auto &triples = model_.triples();
  int best_index = -1;
  for (int t = 0; t < static_cast<int>(triples.size()); ++t) {
    const LabelTriple &triple = triples[t];
    if (!allow_empty && triple.label.empty()) continue;
    double score = top[triple.top] + middle[triple.middle] + bottom[triple.bottom];
    double augmented = deltas ? score + (*deltas)[t] : score;
    if (augmented > best.augmented) {
      best.augmented = augmented;
      best.score = score;
      best_index = t;
    }
  }
  if (best_index < 0) throw StructureError("the label inventory has no nonempty label");
  best.label = triples[best_index].label;
  best.key = {triples[best_index].top, triples[best_index].middle, triples[best_index].bottom};
  return best;
}

std::optional<LabelChoice> NeuralScores::ScoreLabel(Span span, const CompositeLabel &label) {
  CheckSpan(span);
  const LabelInventory &inventory = model_.inventory();
  if (model_.config().label_scorer == LabelScorerKind::kAtomic) {
    int index = inventory.AtomicIndex(label);
    if (index < 0) return std::nullopt;
    double score = ValueAt(LabelVector(span), index);
    return LabelChoice{label, {index, 0, 0}, score, score};
  }
  std::optional<LabelChoice> best;
  for (const LabelParts &parts : EquivalentDecompositions(label)) {
    LabelKey key{inventory.TopIndex(parts.top), inventory.MiddleIndex(parts.middle),
                 inventory.BottomIndex(parts.bottom)};
    if (key.top < 0 || key.middle < 0 || key.bottom < 0) continue;
    double score = ValueAt(LabelVector(span, 0), key.top) +
                   ValueAt(LabelVector(span, 1), key.middle) +
                   ValueAt(LabelVector(span, 2), key.bottom);
    if (!best || score > best->score) best = LabelChoice{label, key, score, score};
  }
  return best;
}

nn::Expr NeuralScores::LabelExpr(Span span, const LabelKey &key) {
  if (model_.config().label_scorer == LabelScorerKind::kAtomic) {
    return tape_.Pick(LabelVector(span), key.top);
  }
  nn::Expr parts[] = {tape_.Pick(LabelVector(span, 0), key.top),
                      tape_.Pick(LabelVector(span, 1), key.middle),
                      tape_.Pick(LabelVector(span, 2), key.bottom)};
  return tape_.Sum(parts);
}

nn::Expr NeuralScores::SplitExpr(int i, int k, int j) {
  CheckSplit(i, k, j);
  const SplitScorerKind kind = model_.config().split_scorer;
  if (IsDecomposable(kind)) {
    return tape_.Add(SpanScore({i, k}, 0), SpanScore({k, j}, 1));
  }
  auto [it, inserted] = split_exprs_.try_emplace({i, k, j});
  if (!inserted) return it->second;
  ++counters_.split_network_evals;
  const nn::Activation activation = model_.config().activation;
  if (kind == SplitScorerKind::kConcat) {
    it->second = nn::Apply(tape_, model_.concat_net(), tape_.Concat({Rep({i, k}), Rep({k, j})}),
                           activation);
  } else {
    nn::Expr left = BiaffineHidden({i, k}, 0);
    nn::Expr right = BiaffineHidden({k, j}, 1);
    nn::Expr terms[] = {
        tape_.Bilinear(left, tape_.Parameter(model_.biaffine_matrix()), right),
        tape_.Dot(tape_.Parameter(model_.biaffine_left_vector()), left),
        tape_.Dot(tape_.Parameter(model_.biaffine_right_vector()), right)};
    it->second = tape_.Sum(terms);
  }
  return it->second;
}

double NeuralScores::SplitScore(int i, int k, int j) {
  CheckSplit(i, k, j);
  ++split_evals_;
  if (IsDecomposable(model_.config().split_scorer)) {
    return tape_.ScalarValue(SpanScore({i, k}, 0)) + tape_.ScalarValue(SpanScore({k, j}, 1));
  }
  return tape_.ScalarValue(SplitExpr(i, k, j));
}

}  // namespace spanparser
