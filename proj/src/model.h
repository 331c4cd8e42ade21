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

#ifndef SPANPARSER_MODEL_H_
#define SPANPARSER_MODEL_H_

#include <array>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "nn/layers.h"
#include "nn/tensor.h"
#include "treebank.h"

namespace spanparser {

enum class LabelScorerKind { kAtomic, kThreePart };
enum class SplitScorerKind { kMinimal, kLeftRight, kConcat, kBiaffine };

std::string ToString(LabelScorerKind kind);
std::string ToString(SplitScorerKind kind);
std::string ToString(nn::Activation activation);
// Throw ConfigError on unknown names.
LabelScorerKind ParseLabelScorer(const std::string &name);
SplitScorerKind ParseSplitScorer(const std::string &name);
nn::Activation ParseActivation(const std::string &name);

// Split scorers whose split score is a sum of per-subspan scores, so span
// scores can be computed once per span and shared.
inline bool IsDecomposable(SplitScorerKind kind) {
  return kind == SplitScorerKind::kMinimal || kind == SplitScorerKind::kLeftRight;
}

struct ModelConfig {
  int word_dim = 100;
  int tag_dim = 50;
  int morph_dim = 50;
  // Tied size of the LSTM states and every feedforward hidden layer.
  int hidden = 250;
  int lstm_layers = 2;
  double dropout = 0.4;
  nn::Activation activation = nn::Activation::kRelu;
  LabelScorerKind label_scorer = LabelScorerKind::kAtomic;
  SplitScorerKind split_scorer = SplitScorerKind::kMinimal;

  void Validate() const;
};

// One enumerated (top, middle, bottom) triple and the label it composes to.
struct LabelTriple {
  int top;
  int middle;
  int bottom;
  CompositeLabel label;
};

// All learned parameters plus the vocabularies and label inventory they are
// indexed by.
class Model {
 public:
  Model(ModelConfig config, Vocabulary vocab, LabelInventory inventory, nn::Rng &rng);

  Model(const Model &) = delete;
  Model &operator=(const Model &) = delete;

  const ModelConfig &config() const { return config_; }
  const Vocabulary &vocab() const { return vocab_; }
  const LabelInventory &inventory() const { return inventory_; }
  nn::ParameterSet &params() { return params_; }
  const nn::ParameterSet &params() const { return params_; }

  nn::Tensor &word_embeddings() { return *word_embeddings_; }
  nn::Tensor &tag_embeddings() { return *tag_embeddings_; }
  nn::Tensor *morph_embeddings() { return morph_embeddings_; }

  int input_dim() const;
  // [layer][0 = forward, 1 = backward]
  const nn::LstmWeights &lstm(int layer, int direction) const {
    return lstm_[layer][direction];
  }

  // Atomic label scorer, or the three part scorers.
  const nn::FeedForward &label_net() const { return label_nets_[0]; }
  const nn::FeedForward &top_net() const { return label_nets_[0]; }
  const nn::FeedForward &middle_net() const { return label_nets_[1]; }
  const nn::FeedForward &bottom_net() const { return label_nets_[2]; }

  // Minimal: span_net(); LeftRight: left_net() / right_net();
  // Concat: concat_net(); Biaffine: left/right hidden layers plus the
  // bilinear matrix and the two vectors.
  const nn::FeedForward &span_net() const { return split_nets_[0]; }
  const nn::FeedForward &left_net() const { return split_nets_[0]; }
  const nn::FeedForward &right_net() const { return split_nets_[1]; }
  const nn::FeedForward &concat_net() const { return split_nets_[0]; }
  nn::Tensor &biaffine_matrix() { return *biaffine_matrix_; }
  nn::Tensor &biaffine_left_vector() { return *biaffine_left_; }
  nn::Tensor &biaffine_right_vector() { return *biaffine_right_; }

  // Every (top, middle, bottom) combination in the part inventories.
  const std::vector<LabelTriple> &triples() const { return triples_; }

  void Save(const std::string &path) const;
  static std::unique_ptr<Model> Load(const std::string &path);

  // Snapshot and restore of all parameter values (best-checkpoint keeping).
  std::vector<std::vector<double>> SnapshotValues() const;
  void RestoreValues(const std::vector<std::vector<double>> &values);

 private:
  nn::FeedForward AddFeedForward(const std::string &prefix, int input, int output,
                                 bool with_output);
  void Initialize(nn::Rng &rng);

  ModelConfig config_;
  Vocabulary vocab_;
  LabelInventory inventory_;
  nn::ParameterSet params_;

  nn::Tensor *word_embeddings_ = nullptr;
  nn::Tensor *tag_embeddings_ = nullptr;
  nn::Tensor *morph_embeddings_ = nullptr;
  std::vector<std::array<nn::LstmWeights, 2>> lstm_;
  std::vector<nn::FeedForward> label_nets_;
  std::vector<nn::FeedForward> split_nets_;
  nn::Tensor *biaffine_matrix_ = nullptr;
  nn::Tensor *biaffine_left_ = nullptr;
  nn::Tensor *biaffine_right_ = nullptr;
  std::vector<LabelTriple> triples_;
};

}  // namespace spanparser

#endif  // SPANPARSER_MODEL_H_
