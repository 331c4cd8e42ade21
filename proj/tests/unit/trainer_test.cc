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
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "encoder.h"
#include "error.h"
#include "verify/suites.h"
#include "verify/synthetic.h"

using namespace spanparser;

namespace {

const char *kThreeWords = "(S (NP (D a) (N b)) (V c))";

std::unique_ptr<Model> ZeroModel(const std::vector<TreebankEntry> &corpus) {
  auto [vocab, inventory] = BuildVocab(corpus);
  ModelConfig config;
  config.word_dim = 3;
  config.tag_dim = 2;
  config.hidden = 4;
  config.dropout = 0.0;
  nn::Rng rng(1);
  auto model = std::make_unique<Model>(config, vocab, inventory, rng);
  for (int p = 0; p < model->params().size(); ++p) model->params().at(p).Fill(0.0);
  return model;
}

TrainConfig Tiny(DecoderKind decoder) {
  TrainConfig config;
  config.model.word_dim = 8;
  config.model.tag_dim = 4;
  config.model.hidden = 16;
  config.model.dropout = 0.0;
  config.decoder = decoder;
  config.batch_size = 1;
  config.adam.learning_rate = 0.01;
  return config;
}

std::filesystem::path TempPath(const std::string &name) {
  return std::filesystem::temp_directory_path() / ("spanparser_trainer_test_" + name);
}

}  // namespace

TEST_CASE("chart loss of a zero model is the largest label loss") {
  auto corpus = ReadBracketed(kThreeWords);
  auto model = ZeroModel(corpus);
  // Five binarized spans. Zero-one: every span can be wrong. Hamming: the
  // root and (0,2) swap S and NP (2 each), the words take a label (1 each).
  const std::pair<LabelLossKind, double> cases[] = {{LabelLossKind::kZeroOne, 5.0},
                                                    {LabelLossKind::kHamming, 7.0}};
  for (const auto &[kind, expected] : cases) {
    nn::Tape tape;
    nn::Rng rng(1);
    SentenceEncoding encoding = Encode(tape, *model, corpus[0].sentence, false, rng);
    NeuralScores scores(tape, *model, encoding);
    CHECK(tape.ScalarValue(ChartLoss(scores, corpus[0].tree, kind)) == expected);
  }
}

TEST_CASE("top-down loss of a zero model along the gold path") {
  auto corpus = ReadBracketed(kThreeWords);
  auto model = ZeroModel(corpus);
  // Five labels wrong under augmentation, plus the root split: split 1 is
  // outside the oracle set {2} and wins with its +1 bonus. (0,2) has no
  // wrong split.
  const std::pair<LabelLossKind, double> cases[] = {{LabelLossKind::kZeroOne, 6.0},
                                                    {LabelLossKind::kHamming, 8.0}};
  for (const auto &[kind, expected] : cases) {
    nn::Tape tape;
    nn::Rng rng(1);
    SentenceEncoding encoding = Encode(tape, *model, corpus[0].sentence, false, rng);
    NeuralScores scores(tape, *model, encoding);
    RolloutOptions options{RolloutMode::kGold, OracleSplitChoice::kLeftmost, kind};
    CHECK(tape.ScalarValue(TopdownLoss(scores, corpus[0].tree, options)) == expected);
  }
}

TEST_CASE("split hinge compares against the chosen oracle split") {
  auto gold = ReadBracketed("(S (A a) (B (C c) (D d)) (E (F f) (G g) (H h)) (I i))")[0].tree;
  TableScores table(7, {CompositeLabel{}, CompositeLabel{"S"}, CompositeLabel{"B"},
                        CompositeLabel{"E"}});
  table.split_score(0, 1, 7) = 5;
  table.split_score(1, 4, 7) = 2;
  table.split_score(1, 6, 7) = 0.5;
  for (OracleSplitChoice choice : {OracleSplitChoice::kLeftmost, OracleSplitChoice::kBestScoring}) {
    RolloutOptions options{RolloutMode::kExplore, choice, LabelLossKind::kZeroOne};
    auto records = Rollout(table, GoldIndex(gold), options);
    const DecisionRecord &r = records[2];
    REQUIRE(r.span == Span{1, 7});
    CHECK(r.oracle_splits == std::vector<int>{3, 6});
    CHECK(r.predicted_split == 4);
    CHECK(r.augmented_split == 4);
    CHECK(r.oracle_split == (choice == OracleSplitChoice::kLeftmost ? 3 : 6));
  }
}

TEST_CASE("label loss values and metric properties") {
  const CompositeLabel empty, s{"S"}, vp{"VP"}, s_vp{"S", "VP"}, vp_s{"VP", "S"}, np{"NP"};
  CHECK(LabelDelta(LabelLossKind::kZeroOne, s_vp, vp) == 1);
  CHECK(LabelDelta(LabelLossKind::kZeroOne, s_vp, s_vp) == 0);
  CHECK(LabelDelta(LabelLossKind::kHamming, s_vp, vp) == 1);
  CHECK(LabelDelta(LabelLossKind::kHamming, s_vp, empty) == 2);
  CHECK(LabelDelta(LabelLossKind::kHamming, s, np) == 2);
  CHECK(LabelDelta(LabelLossKind::kHamming, s_vp, vp_s) == 0);
  const std::vector<CompositeLabel> all = {empty, s, vp, s_vp, np, CompositeLabel{"S", "S"}};
  for (LabelLossKind kind : {LabelLossKind::kZeroOne, LabelLossKind::kHamming}) {
    for (const auto &a : all) {
      CHECK(LabelDelta(kind, a, a) == 0);
      for (const auto &b : all) {
        CHECK(LabelDelta(kind, a, b) == LabelDelta(kind, b, a));
        for (const auto &c : all) {
          CHECK(LabelDelta(kind, a, c) <= LabelDelta(kind, a, b) + LabelDelta(kind, b, c));
        }
      }
    }
  }
  CHECK(ParseLabelLoss("hamming") == LabelLossKind::kHamming);
  CHECK_THROWS_AS(ParseLabelLoss("l2"), ConfigError);
}

TEST_CASE("training memorizes one sentence") {
  auto corpus = ReadBracketed(verify::kExampleBracketing);
  for (DecoderKind decoder : {DecoderKind::kChart, DecoderKind::kTopdown}) {
    CAPTURE(ToString(decoder));
    TrainConfig config = Tiny(decoder);
    config.epochs = 200;
    config.stop_at_train_f1 = 1.0;
    TrainResult result = Train(corpus, {}, config);
    REQUIRE_FALSE(result.history.empty());
    CHECK(result.history.size() < 200);
    CHECK(result.history.back().train->f1 == 1.0);
    CHECK(Parse(*result.model, corpus[0].sentence, decoder).tree == corpus[0].tree);
  }
}

TEST_CASE("training is deterministic for a fixed seed") {
  auto corpus = verify::SyntheticCorpus(6, 3);
  TrainConfig config = Tiny(DecoderKind::kTopdown);
  config.model.dropout = 0.3;
  config.epochs = 3;
  config.batch_size = 2;
  std::ostringstream first_metrics, second_metrics;
  TrainResult first = Train(corpus, corpus, config, &first_metrics);
  TrainResult second = Train(corpus, corpus, config, &second_metrics);
  REQUIRE(first.history.size() == 3);
  for (size_t e = 0; e < first.history.size(); ++e) {
    CHECK(first.history[e].train_loss == second.history[e].train_loss);
    CHECK(first.history[e].dev->f1 == second.history[e].dev->f1);
  }
  CHECK(first.model->SnapshotValues() == second.model->SnapshotValues());

  config.seed = 2;
  TrainResult other = Train(corpus, corpus, config);
  CHECK(other.history[0].train_loss != first.history[0].train_loss);
}

TEST_CASE("metrics lines and best checkpoint") {
  auto corpus = verify::SyntheticCorpus(5, 4);
  TrainConfig config = Tiny(DecoderKind::kChart);
  config.epochs = 4;
  std::ostringstream metrics;
  std::vector<int> seen;
  TrainResult result =
      Train(corpus, corpus, config, &metrics, [&](const EpochMetrics &m) { seen.push_back(m.epoch); });
  CHECK(seen == std::vector<int>{1, 2, 3, 4});
  int lines = 0;
  std::istringstream in(metrics.str());
  std::string line;
  double best = -1;
  while (std::getline(in, line)) {
    if (line.rfind("epoch", 0) == 0) continue;
    ++lines;
    CHECK(std::count(line.begin(), line.end(), '\t') == 5);
  }
  for (const EpochMetrics &m : result.history) best = std::max(best, m.dev->f1);
  CHECK(lines == 4);
  CHECK(result.best_dev_f1 == best);
  CHECK(EvaluateCorpus(*result.model, corpus, DecoderKind::kChart).f1 == best);
}

TEST_CASE("models survive a save/load round trip") {
  auto corpus = verify::SyntheticCorpus(4, 5);
  TrainConfig config = Tiny(DecoderKind::kChart);
  config.model.label_scorer = LabelScorerKind::kThreePart;
  config.model.split_scorer = SplitScorerKind::kBiaffine;
  config.epochs = 1;
  TrainResult result = Train(corpus, {}, config);
  const auto path = TempPath("roundtrip.model");
  result.model->Save(path.string());
  auto loaded = Model::Load(path.string());
  CHECK(loaded->SnapshotValues() == result.model->SnapshotValues());
  CHECK(loaded->config().label_scorer == LabelScorerKind::kThreePart);
  CHECK(loaded->config().split_scorer == SplitScorerKind::kBiaffine);
  CHECK(loaded->vocab().words.size() == result.model->vocab().words.size());
  for (const TreebankEntry &entry : corpus) {
    for (DecoderKind decoder : {DecoderKind::kChart, DecoderKind::kTopdown}) {
      ParseOutput a = Parse(*result.model, entry.sentence, decoder);
      ParseOutput b = Parse(*loaded, entry.sentence, decoder);
      CHECK(a.tree == b.tree);
      CHECK(a.score == b.score);
    }
  }
  std::filesystem::remove(path);
}

TEST_CASE("unreadable model files") {
  const auto path = TempPath("old.model");
  {
    std::ofstream out(path);
    out << "spanparser-model v0\nmetadata 0\ntensors 0\n";
  }
  CHECK_THROWS_AS(Model::Load(path.string()), DataError);
  std::filesystem::remove(path);
  CHECK_THROWS_AS(Model::Load(TempPath("missing.model").string()), DataError);
}

TEST_CASE("configuration validation") {
  TrainConfig config;
  CHECK_NOTHROW(config.Validate());
  config.batch_size = 0;
  CHECK_THROWS_AS(config.Validate(), ConfigError);
  config = TrainConfig{};
  config.stop_at_train_f1 = 1.5;
  CHECK_THROWS_AS(config.Validate(), ConfigError);
  config = TrainConfig{};
  config.adam.learning_rate = 0;
  CHECK_THROWS_AS(config.Validate(), ConfigError);
  config = TrainConfig{};
  config.model.dropout = 1.0;
  CHECK_THROWS_AS(config.Validate(), ConfigError);
  CHECK(ParseDecoder("topdown") == DecoderKind::kTopdown);
  CHECK_THROWS_AS(ParseDecoder("greedy"), ConfigError);
  CHECK_THROWS_AS(Train({}, {}, TrainConfig{}), DataError);
}
