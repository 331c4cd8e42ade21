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

#include <cmath>

#include "chart_decoder.h"
#include "doctest.h"
#include "error.h"

using namespace spanparser;

namespace {

std::vector<TreebankEntry> Corpus() {
  return ReadBracketed(
      "(S (NP (PRP She)) (VP (VBZ enjoys) (S (VP (VBG playing) (NP (NN tennis))))) (. .))"
      "(S (NP (DT the) (NN dog)) (VP (VBZ sees) (NP (DT the) (NN cat))))");
}

struct Fixture {
  std::unique_ptr<Model> model;
  nn::Tape tape{false};
  SentenceEncoding encoding;
  std::unique_ptr<NeuralScores> scores;

  Fixture(LabelScorerKind label, SplitScorerKind split, int sentence = 0, uint64_t seed = 1) {
    auto corpus = Corpus();
    auto [vocab, inventory] = BuildVocab(corpus);
    ModelConfig config;
    config.word_dim = 4;
    config.tag_dim = 3;
    config.hidden = 4;
    config.label_scorer = label;
    config.split_scorer = split;
    nn::Rng rng(seed);
    model = std::make_unique<Model>(config, vocab, inventory, rng);
    nn::Rng unused(0);
    encoding = Encode(tape, *model, corpus[sentence].sentence, false, unused);
    scores = std::make_unique<NeuralScores>(tape, *model, encoding);
  }

  std::vector<double> Rep(int i, int j) {
    auto v = tape.Value(SpanRep(tape, encoding, i, j));
    return {v.begin(), v.end()};
  }
};

// Reference evaluation of V relu(W x + b) with plain loops.
std::vector<double> HandFeedForward(const nn::FeedForward &net, const std::vector<double> &x) {
  const nn::Tensor &w = *net.hidden_weight;
  std::vector<double> hidden(w.rows());
  for (int r = 0; r < w.rows(); ++r) {
    double sum = net.hidden_bias->values()[r];
    for (int c = 0; c < w.cols(); ++c) sum += w.at(r, c) * x[c];
    hidden[r] = std::max(0.0, sum);
  }
  if (!net.output_weight) return hidden;
  const nn::Tensor &v = *net.output_weight;
  std::vector<double> out(v.rows());
  for (int r = 0; r < v.rows(); ++r) {
    for (int c = 0; c < v.cols(); ++c) out[r] += v.at(r, c) * hidden[c];
  }
  return out;
}

// Makes a network output `values` regardless of its input.
void SetConstantOutputs(const nn::FeedForward &net, const std::vector<double> &values) {
  net.hidden_weight->Fill(0.0);
  net.hidden_bias->Fill(1.0);
  net.output_weight->Fill(0.0);
  for (size_t r = 0; r < values.size(); ++r) net.output_weight->at(r, 0) = values[r];
}

std::vector<double> Concat(std::vector<double> a, const std::vector<double> &b) {
  a.insert(a.end(), b.begin(), b.end());
  return a;
}

double DotProduct(const std::vector<double> &a, std::span<const double> b) {
  double sum = 0;
  for (size_t i = 0; i < a.size(); ++i) sum += a[i] * b[i];
  return sum;
}

}  // namespace

TEST_CASE("table scores: empty label handling") {
  TableScores table(1, {CompositeLabel{}, CompositeLabel{"S"}});
  table.label_score({0, 1}, 0) = 2.0;
  table.label_score({0, 1}, 1) = 1.0;
  CHECK(table.BestLabel({0, 1}, true).label.empty());
  CHECK(table.BestLabel({0, 1}, false).label == CompositeLabel{"S"});
  CHECK(table.BestLabel({0, 1}, false).score == 1.0);

  // Ties go to the lowest index.
  TableScores tie(2, {CompositeLabel{}, CompositeLabel{"A"}, CompositeLabel{"B"}});
  CHECK(tie.BestLabel({0, 2}, true).label.empty());
  CHECK(tie.BestLabel({0, 2}, false).label == CompositeLabel{"A"});

  // Augmentation with a zero-one delta favors non-gold labels by 1.
  CompositeLabel gold{"A"};
  LabelAugment augment{&gold, LabelLossKind::kZeroOne};
  LabelChoice augmented = tie.BestLabel({0, 2}, true, &augment);
  CHECK(augmented.label.empty());
  CHECK(augmented.score == 0.0);
  CHECK(augmented.augmented == 1.0);

  TableScores only(1, {CompositeLabel{}});
  CHECK_THROWS_AS(only.BestLabel({0, 1}, false), StructureError);
  CHECK_THROWS_AS(table.SplitScore(0, 0, 1), ShapeError);
}

TEST_CASE("atomic label scores match a hand computation") {
  Fixture f(LabelScorerKind::kAtomic, SplitScorerKind::kMinimal);
  const auto &inventory = f.model->inventory();
  for (int i = 0; i < 5; ++i) {
    for (int j = i + 1; j <= 5; ++j) {
      auto expected = HandFeedForward(f.model->label_net(), f.Rep(i, j));
      auto vector = f.tape.Value(f.scores->LabelVector({i, j}));
      REQUIRE(vector.size() == static_cast<size_t>(inventory.atomic_size()));
      int argmax = 1;
      for (int l = 0; l < inventory.atomic_size(); ++l) {
        CHECK(vector[l] == doctest::Approx(expected[l]).epsilon(1e-12));
        if (l > 0 && expected[l] > expected[argmax]) argmax = l;
        CHECK(f.scores->ScoreLabel({i, j}, inventory.atomic(l))->score ==
              doctest::Approx(expected[l]).epsilon(1e-12));
      }
      CHECK(f.scores->BestLabel({i, j}, false).label == inventory.atomic(argmax));
    }
  }
  CHECK_FALSE(f.scores->ScoreLabel({0, 1}, CompositeLabel{"NOPE"}).has_value());
}

TEST_CASE("zero label weights tie to the empty label") {
  Fixture f(LabelScorerKind::kAtomic, SplitScorerKind::kMinimal);
  f.model->label_net().output_weight->Fill(0.0);
  for (double v : f.tape.Value(f.scores->LabelVector({1, 3}))) CHECK(v == 0.0);
  CHECK(f.scores->BestLabel({1, 3}, true).label.empty());
  CHECK(f.scores->BestLabel({1, 3}, true).key.top == 0);
}

TEST_CASE("three-part scorer composes independent argmaxes") {
  Fixture f(LabelScorerKind::kThreePart, SplitScorerKind::kMinimal);
  const auto &inventory = f.model->inventory();
  std::vector<double> top(inventory.top_size(), 0.0), middle(inventory.middle_size(), 0.0),
      bottom(inventory.bottom_size(), 0.0);
  top[inventory.TopIndex("S")] = 2.0;
  middle[0] = 0.5;
  bottom[inventory.BottomIndex("VP")] = 1.0;
  SetConstantOutputs(f.model->top_net(), top);
  SetConstantOutputs(f.model->middle_net(), middle);
  SetConstantOutputs(f.model->bottom_net(), bottom);
  LabelChoice choice = f.scores->BestLabel({2, 4}, true);
  CHECK(choice.label == (CompositeLabel{"S", "VP"}));
  CHECK(choice.score == doctest::Approx(3.5));

  // ScoreLabel takes the best of the decompositions that compose to S-VP.
  auto scored = f.scores->ScoreLabel({2, 4}, CompositeLabel{"S", "VP"});
  REQUIRE(scored.has_value());
  CHECK(scored->score == doctest::Approx(3.5));

  // Excluding the empty label when every argmax is empty forces a scan.
  Fixture g(LabelScorerKind::kThreePart, SplitScorerKind::kMinimal);
  top.assign(inventory.top_size(), -1.0);
  top[0] = 0.0;
  top[inventory.TopIndex("NP")] = -0.25;
  SetConstantOutputs(g.model->top_net(), top);
  SetConstantOutputs(g.model->middle_net(), std::vector<double>(inventory.middle_size(), 0.0));
  bottom.assign(inventory.bottom_size(), -1.0);
  bottom[0] = 0.0;
  SetConstantOutputs(g.model->bottom_net(), bottom);
  CHECK(g.scores->BestLabel({0, 2}, true).label.empty());
  CHECK(g.scores->BestLabel({0, 2}, false).label == CompositeLabel{"NP"});
}

TEST_CASE("equivalent decompositions") {
  CHECK(EquivalentDecompositions({}).size() == 1);
  auto single = EquivalentDecompositions({"S"});
  CHECK(single.size() == 3);  // (S,,) (,,S) (,S,)
  auto chain = EquivalentDecompositions({"S", "VP"});
  CHECK(chain.size() == 4);
  for (const LabelParts &parts : chain) CHECK(Compose(parts) == (CompositeLabel{"S", "VP"}));
}

TEST_CASE("split scorers match their formulas") {
  for (SplitScorerKind kind : {SplitScorerKind::kMinimal, SplitScorerKind::kLeftRight,
                               SplitScorerKind::kConcat, SplitScorerKind::kBiaffine}) {
    CAPTURE(ToString(kind));
    Fixture f(LabelScorerKind::kAtomic, kind, 1, 3);  // 5-word sentence
    Model &m = *f.model;
    for (int i = 0; i < 4; ++i) {
      for (int k = i + 1; k < 5; ++k) {
        for (int j = k + 1; j <= 5; ++j) {
          auto left = f.Rep(i, k), right = f.Rep(k, j);
          double expected = 0;
          switch (kind) {
            case SplitScorerKind::kMinimal:
              expected = HandFeedForward(m.span_net(), left)[0] +
                         HandFeedForward(m.span_net(), right)[0];
              break;
            case SplitScorerKind::kLeftRight:
              expected = HandFeedForward(m.left_net(), left)[0] +
                         HandFeedForward(m.right_net(), right)[0];
              break;
            case SplitScorerKind::kConcat:
              expected = HandFeedForward(m.concat_net(), Concat(left, right))[0];
              break;
            case SplitScorerKind::kBiaffine: {
              auto hl = HandFeedForward(m.left_net(), left);
              auto hr = HandFeedForward(m.right_net(), right);
              const nn::Tensor &w = m.biaffine_matrix();
              for (int r = 0; r < w.rows(); ++r) {
                for (int c = 0; c < w.cols(); ++c) expected += hl[r] * w.at(r, c) * hr[c];
              }
              expected += DotProduct(hl, m.biaffine_left_vector().values());
              expected += DotProduct(hr, m.biaffine_right_vector().values());
              break;
            }
          }
          CHECK(f.scores->SplitScore(i, k, j) == doctest::Approx(expected).epsilon(1e-12));
          CHECK(f.tape.ScalarValue(f.scores->SplitExpr(i, k, j)) ==
                doctest::Approx(expected).epsilon(1e-12));
        }
      }
    }
  }
}

TEST_CASE("degenerate split scorers") {
  {
    Fixture f(LabelScorerKind::kAtomic, SplitScorerKind::kMinimal);
    f.model->span_net().output_weight->Fill(0.0);
    CHECK(f.scores->SplitScore(0, 2, 5) == 0.0);
    CHECK(f.scores->SplitScore(1, 2, 3) == 0.0);
  }
  {
    // All weights and biases zero: relu(0) = 0 and the score is 0.
    Fixture f(LabelScorerKind::kAtomic, SplitScorerKind::kConcat);
    for (int p = 0; p < f.model->params().size(); ++p) {
      if (f.model->params().at(p).name().rfind("split", 0) == 0) f.model->params().at(p).Fill(0);
    }
    CHECK(f.scores->SplitScore(0, 1, 5) == 0.0);
  }
  {
    Fixture f(LabelScorerKind::kAtomic, SplitScorerKind::kBiaffine);
    f.model->biaffine_matrix().Fill(0.0);
    Model &m = *f.model;
    auto hl = HandFeedForward(m.left_net(), f.Rep(0, 2));
    auto hr = HandFeedForward(m.right_net(), f.Rep(2, 5));
    double expected = DotProduct(hl, m.biaffine_left_vector().values()) +
                      DotProduct(hr, m.biaffine_right_vector().values());
    CHECK(f.scores->SplitScore(0, 2, 5) == doctest::Approx(expected).epsilon(1e-12));
  }
}

TEST_CASE("span scores are computed once per span") {
  Fixture f(LabelScorerKind::kAtomic, SplitScorerKind::kMinimal);
  f.scores->PrecomputeSpanScores();
  CHECK(f.scores->counters().span_evals[0] == 15);
  CHECK(f.scores->counters().span_evals[1] == 0);
  // Lookups agree exactly with a recomputation on a fresh scorer.
  NeuralScores fresh(f.tape, *f.model, f.encoding);
  for (int i = 0; i < 5; ++i) {
    for (int j = i + 1; j <= 5; ++j) {
      CHECK(f.tape.ScalarValue(f.scores->SpanScore({i, j}, 0)) ==
            f.tape.ScalarValue(fresh.SpanScore({i, j}, 0)));
    }
  }
  CHECK(f.scores->counters().span_evals[0] == 15);

  Fixture lr(LabelScorerKind::kAtomic, SplitScorerKind::kLeftRight);
  lr.scores->PrecomputeSpanScores();
  CHECK(lr.scores->counters().span_evals[0] == 15);
  CHECK(lr.scores->counters().span_evals[1] == 15);

  Fixture concat(LabelScorerKind::kAtomic, SplitScorerKind::kConcat);
  CHECK_THROWS_AS(concat.scores->PrecomputeSpanScores(), ConfigError);
}

TEST_CASE("chart decoding stays within the quadratic span budget") {
  auto corpus = Corpus();
  auto [vocab, inventory] = BuildVocab(corpus);
  ModelConfig config;
  config.word_dim = 4;
  config.tag_dim = 3;
  config.hidden = 4;
  config.split_scorer = SplitScorerKind::kLeftRight;
  nn::Rng rng(2);
  Model model(config, vocab, inventory, rng);
  Sentence sentence;
  for (int w = 0; w < 10; ++w) {
    sentence.words.push_back("the");
    sentence.tags.push_back("DT");
  }
  nn::Tape tape(false);
  SentenceEncoding encoding = Encode(tape, model, sentence, false, rng);
  NeuralScores scores(tape, model, encoding);
  CkyDecode(scores);
  CHECK(scores.counters().span_evals[0] <= 55);
  CHECK(scores.counters().span_evals[1] <= 55);
  CHECK(scores.counters().label_evals <= 55);
}

TEST_CASE("invalid spans are rejected") {
  Fixture f(LabelScorerKind::kAtomic, SplitScorerKind::kMinimal);
  CHECK_THROWS_AS(f.scores->BestLabel({3, 3}, true), ShapeError);
  CHECK_THROWS_AS(f.scores->BestLabel({0, 6}, true), ShapeError);
  CHECK_THROWS_AS(f.scores->SplitScore(0, 5, 5), ShapeError);
}
