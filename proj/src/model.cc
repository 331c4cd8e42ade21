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

#include "model.h"

#include <bit>
#include <cstring>
#include <fstream>
#include <sstream>

#include "error.h"

namespace spanparser {

static_assert(std::endian::native == std::endian::little,
              "model files store little-endian doubles");

namespace {

constexpr const char *kModelHeader = "spanparser-model v1";

}  // namespace

std::string ToString(LabelScorerKind kind) {
  return kind == LabelScorerKind::kAtomic ? "atomic" : "three_part";
}

std::string ToString(SplitScorerKind kind) {
  switch (kind) {
    case SplitScorerKind::kMinimal:
      return "minimal";
    case SplitScorerKind::kLeftRight:
      return "left_right";
    case SplitScorerKind::kConcat:
      return "concat";
    case SplitScorerKind::kBiaffine:
      return "biaffine";
  }
  return "unknown";
}

std::string ToString(nn::Activation activation) {
  return activation == nn::Activation::kRelu ? "relu" : "tanh";
}

LabelScorerKind ParseLabelScorer(const std::string &name) {
  if (name == "atomic") return LabelScorerKind::kAtomic;
  if (name == "three_part") return LabelScorerKind::kThreePart;
  throw ConfigError("unknown label scorer '" + name + "' (expected atomic or three_part)");
}

SplitScorerKind ParseSplitScorer(const std::string &name) {
  if (name == "minimal") return SplitScorerKind::kMinimal;
  if (name == "left_right") return SplitScorerKind::kLeftRight;
  if (name == "concat") return SplitScorerKind::kConcat;
  if (name == "biaffine") return SplitScorerKind::kBiaffine;
  throw ConfigError("unknown split scorer '" + name +
                    "' (expected minimal, left_right, concat or biaffine)");
}

nn::Activation ParseActivation(const std::string &name) {
  if (name == "relu") return nn::Activation::kRelu;
  if (name == "tanh") return nn::Activation::kTanh;
  throw ConfigError("unknown nonlinearity '" + name + "' (expected relu or tanh)");
}

void ModelConfig::Validate() const {
  if (word_dim <= 0 || tag_dim <= 0 || morph_dim <= 0 || hidden <= 0) {
    throw ConfigError("embedding and hidden sizes must be positive");
  }
  if (lstm_layers < 1) throw ConfigError("lstm_layers must be at least 1");
  if (!(dropout >= 0.0 && dropout < 1.0)) {
    throw ConfigError("dropout must lie in [0, 1)");
  }
}

Model::Model(ModelConfig config, Vocabulary vocab, LabelInventory inventory, nn::Rng &rng)
    : config_(config), vocab_(std::move(vocab)), inventory_(std::move(inventory)) {
  config_.Validate();
  const int hidden = config_.hidden;
  word_embeddings_ = &params_.Add("embed.word", vocab_.words.size(), config_.word_dim);
  tag_embeddings_ = &params_.Add("embed.tag", vocab_.tags.size(), config_.tag_dim);
  if (vocab_.use_morph) {
    morph_embeddings_ = &params_.Add("embed.morph", vocab_.morphs.size(), config_.morph_dim);
  }
  for (int layer = 0; layer < config_.lstm_layers; ++layer) {
    int input = layer == 0 ? input_dim() : 2 * hidden;
    std::array<nn::LstmWeights, 2> directions;
    for (int dir = 0; dir < 2; ++dir) {
      std::string prefix = "lstm.l" + std::to_string(layer) + (dir == 0 ? ".fw" : ".bw");
      directions[dir].weight = &params_.Add(prefix + ".weight", 4 * hidden, input + hidden);
      directions[dir].bias = &params_.Add(prefix + ".bias", 4 * hidden, 1);
    }
    lstm_.push_back(directions);
  }
  const int span_dim = 2 * hidden;
  if (config_.label_scorer == LabelScorerKind::kAtomic) {
    label_nets_.push_back(
        AddFeedForward("label", span_dim, inventory_.atomic_size(), true));
  } else {
    label_nets_.push_back(AddFeedForward("label.top", span_dim, inventory_.top_size(), true));
    label_nets_.push_back(
        AddFeedForward("label.middle", span_dim, inventory_.middle_size(), true));
    label_nets_.push_back(
        AddFeedForward("label.bottom", span_dim, inventory_.bottom_size(), true));
    for (int t = 0; t < inventory_.top_size(); ++t) {
      for (int m = 0; m < inventory_.middle_size(); ++m) {
        for (int b = 0; b < inventory_.bottom_size(); ++b) {
          triples_.push_back({t, m, b,
                              Compose({inventory_.top(t), inventory_.middle(m),
                                       inventory_.bottom(b)})});
        }
      }
    }
  }
  switch (config_.split_scorer) {
    case SplitScorerKind::kMinimal:
      split_nets_.push_back(AddFeedForward("span", span_dim, 1, true));
      break;
    case SplitScorerKind::kLeftRight:
      split_nets_.push_back(AddFeedForward("span.left", span_dim, 1, true));
      split_nets_.push_back(AddFeedForward("span.right", span_dim, 1, true));
      break;
    case SplitScorerKind::kConcat:
      split_nets_.push_back(AddFeedForward("split", 2 * span_dim, 1, true));
      break;
    case SplitScorerKind::kBiaffine:
      split_nets_.push_back(AddFeedForward("split.left", span_dim, 0, false));
      split_nets_.push_back(AddFeedForward("split.right", span_dim, 0, false));
      biaffine_matrix_ = &params_.Add("split.bilinear", hidden, hidden);
      biaffine_left_ = &params_.Add("split.left.vector", hidden, 1);
      biaffine_right_ = &params_.Add("split.right.vector", hidden, 1);
      break;
  }
  Initialize(rng);
}

int Model::input_dim() const {
  return config_.word_dim + config_.tag_dim + (vocab_.use_morph ? config_.morph_dim : 0);
}

nn::FeedForward Model::AddFeedForward(const std::string &prefix, int input, int output,
                                      bool with_output) {
  nn::FeedForward net;
  net.hidden_weight = &params_.Add(prefix + ".hidden.weight", config_.hidden, input);
  net.hidden_bias = &params_.Add(prefix + ".hidden.bias", config_.hidden, 1);
  if (with_output) {
    net.output_weight = &params_.Add(prefix + ".output.weight", output, config_.hidden);
  }
  return net;
}

void Model::Initialize(nn::Rng &rng) {
  for (int i = 0; i < params_.size(); ++i) {
    nn::Tensor &tensor = params_.at(i);
    if (tensor.name().rfind("embed.", 0) == 0) {
      nn::GlorotInitEmbedding(tensor, rng);
    } else {
      nn::GlorotInit(tensor, rng);
    }
  }
}

std::vector<std::vector<double>> Model::SnapshotValues() const {
  std::vector<std::vector<double>> values;
  for (int i = 0; i < params_.size(); ++i) {
    auto v = params_.at(i).values();
    values.emplace_back(v.begin(), v.end());
  }
  return values;
}

void Model::RestoreValues(const std::vector<std::vector<double>> &values) {
  if (static_cast<int>(values.size()) != params_.size()) {
    throw DataError("snapshot does not match the model");
  }
  for (int i = 0; i < params_.size(); ++i) {
    auto target = params_.at(i).values();
    if (values[i].size() != target.size()) throw DataError("snapshot does not match the model");
    std::copy(values[i].begin(), values[i].end(), target.begin());
  }
}

// Serialization

namespace {

std::string Escape(const std::string &text) {
  std::string out;
  for (char c : text) {
    if (c == '\\') {
      out += "\\\\";
    } else if (c == '\n') {
      out += "\\n";
    } else {
      out += c;
    }
  }
  return out;
}

std::string Unescape(const std::string &text) {
  std::string out;
  for (size_t i = 0; i < text.size(); ++i) {
    if (text[i] == '\\' && i + 1 < text.size()) {
      ++i;
      out += text[i] == 'n' ? '\n' : text[i];
    } else {
      out += text[i];
    }
  }
  return out;
}

void WriteIndexer(const std::string &name, const Indexer &indexer,
                  std::vector<std::pair<std::string, std::string>> &meta) {
  meta.emplace_back("vocab." + name + ".size", std::to_string(indexer.size()));
  for (int i = 0; i < indexer.size(); ++i) {
    meta.emplace_back("vocab." + name + "." + std::to_string(i),
                      std::to_string(indexer.Count(i)) + " " + indexer.Symbol(i));
  }
}

const std::string &Require(const std::map<std::string, std::string> &meta,
                           const std::string &key) {
  auto it = meta.find(key);
  if (it == meta.end()) throw DataError("model file lacks metadata key " + key);
  return it->second;
}

int RequireInt(const std::map<std::string, std::string> &meta, const std::string &key) {
  try {
    return std::stoi(Require(meta, key));
  } catch (const std::logic_error &) {
    throw DataError("model metadata " + key + " is not an integer");
  }
}

void ReadIndexer(const std::map<std::string, std::string> &meta, const std::string &name,
                 Indexer &indexer) {
  int size = RequireInt(meta, "vocab." + name + ".size");
  for (int i = 0; i < size; ++i) {
    const std::string &entry = Require(meta, "vocab." + name + "." + std::to_string(i));
    size_t space = entry.find(' ');
    if (space == std::string::npos) throw DataError("malformed vocabulary entry " + entry);
    int64_t count = std::stoll(entry.substr(0, space));
    std::string symbol = entry.substr(space + 1);
    int index = indexer.Reserve(symbol);
    if (index != i) throw DataError("vocabulary entry " + symbol + " is out of order");
    if (count > 0) indexer.Add(symbol, count);
  }
}

}  // namespace

void Model::Save(const std::string &path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write " + path);
  std::vector<std::pair<std::string, std::string>> meta;
  meta.emplace_back("config.word_dim", std::to_string(config_.word_dim));
  meta.emplace_back("config.tag_dim", std::to_string(config_.tag_dim));
  meta.emplace_back("config.morph_dim", std::to_string(config_.morph_dim));
  meta.emplace_back("config.hidden", std::to_string(config_.hidden));
  meta.emplace_back("config.lstm_layers", std::to_string(config_.lstm_layers));
  std::ostringstream dropout;
  dropout.precision(17);
  dropout << config_.dropout;
  meta.emplace_back("config.dropout", dropout.str());
  meta.emplace_back("config.nonlinearity", ToString(config_.activation));
  meta.emplace_back("config.label_scorer", ToString(config_.label_scorer));
  meta.emplace_back("config.split_scorer", ToString(config_.split_scorer));
  meta.emplace_back("vocab.use_morph", vocab_.use_morph ? "1" : "0");
  WriteIndexer("word", vocab_.words, meta);
  WriteIndexer("tag", vocab_.tags, meta);
  WriteIndexer("morph", vocab_.morphs, meta);
  meta.emplace_back("labels.size", std::to_string(inventory_.atomic_size()));
  for (int i = 0; i < inventory_.atomic_size(); ++i) {
    meta.emplace_back("labels." + std::to_string(i), inventory_.atomic(i).Serialize());
  }

  out << kModelHeader << '\n';
  out << "metadata " << meta.size() << '\n';
  for (const auto &[key, value] : meta) out << key << '=' << Escape(value) << '\n';
  out << "tensors " << params_.size() << '\n';
  for (int i = 0; i < params_.size(); ++i) {
    const nn::Tensor &tensor = params_.at(i);
    out << "tensor " << tensor.name() << " f64 2 " << tensor.rows() << ' ' << tensor.cols()
        << '\n';
    auto values = tensor.values();
    out.write(reinterpret_cast<const char *>(values.data()),
              static_cast<std::streamsize>(values.size() * sizeof(double)));
    out << '\n';
  }
  if (!out) throw DataError("failed writing " + path);
}

std::unique_ptr<Model> Model::Load(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open model file " + path);
  std::string line;
  std::getline(in, line);
  if (line != kModelHeader) {
    throw DataError(path + ": unsupported model format '" + line.substr(0, 40) +
                    "', expected '" + kModelHeader + "'");
  }
  std::getline(in, line);
  std::istringstream header(line);
  std::string word;
  size_t count = 0;
  if (!(header >> word >> count) || word != "metadata") {
    throw DataError(path + ": missing metadata section");
  }
  std::map<std::string, std::string> meta;
  for (size_t i = 0; i < count; ++i) {
    if (!std::getline(in, line)) throw DataError(path + ": truncated metadata");
    size_t eq = line.find('=');
    if (eq == std::string::npos) throw DataError(path + ": malformed metadata line");
    meta[line.substr(0, eq)] = Unescape(line.substr(eq + 1));
  }

  ModelConfig config;
  config.word_dim = RequireInt(meta, "config.word_dim");
  config.tag_dim = RequireInt(meta, "config.tag_dim");
  config.morph_dim = RequireInt(meta, "config.morph_dim");
  config.hidden = RequireInt(meta, "config.hidden");
  config.lstm_layers = RequireInt(meta, "config.lstm_layers");
  config.dropout = std::stod(Require(meta, "config.dropout"));
  try {
    config.activation = ParseActivation(Require(meta, "config.nonlinearity"));
    config.label_scorer = ParseLabelScorer(Require(meta, "config.label_scorer"));
    config.split_scorer = ParseSplitScorer(Require(meta, "config.split_scorer"));
  } catch (const ConfigError &e) {
    throw DataError(path + ": " + e.what());
  }

  Vocabulary vocab;
  vocab.use_morph = Require(meta, "vocab.use_morph") == "1";
  ReadIndexer(meta, "word", vocab.words);
  ReadIndexer(meta, "tag", vocab.tags);
  ReadIndexer(meta, "morph", vocab.morphs);
  LabelInventory inventory;
  int labels = RequireInt(meta, "labels.size");
  for (int i = 1; i < labels; ++i) {
    inventory.Add(CompositeLabel::Deserialize(Require(meta, "labels." + std::to_string(i))));
  }

  nn::Rng rng(0);
  auto model = std::make_unique<Model>(config, std::move(vocab), std::move(inventory), rng);

  std::getline(in, line);
  std::istringstream tensors_header(line);
  int tensor_count = 0;
  if (!(tensors_header >> word >> tensor_count) || word != "tensors" ||
      tensor_count != model->params_.size()) {
    throw DataError(path + ": tensor section does not match the model configuration");
  }
  for (int i = 0; i < tensor_count; ++i) {
    std::getline(in, line);
    std::istringstream tensor_line(line);
    std::string tag, name, dtype;
    int ndim = 0, rows = 0, cols = 0;
    if (!(tensor_line >> tag >> name >> dtype >> ndim >> rows >> cols) || tag != "tensor" ||
        dtype != "f64" || ndim != 2) {
      throw DataError(path + ": malformed tensor header '" + line + "'");
    }
    if (!model->params_.Has(name)) throw DataError(path + ": unexpected tensor " + name);
    nn::Tensor &tensor = model->params_.Get(name);
    if (tensor.rows() != rows || tensor.cols() != cols) {
      throw DataError(path + ": tensor " + name + " has shape " + std::to_string(rows) + "x" +
                      std::to_string(cols) + ", expected " + std::to_string(tensor.rows()) +
                      "x" + std::to_string(tensor.cols()));
    }
    auto values = tensor.values();
    in.read(reinterpret_cast<char *>(values.data()),
            static_cast<std::streamsize>(values.size() * sizeof(double)));
    char newline = 0;
    in.get(newline);
    if (!in || newline != '\n') throw DataError(path + ": truncated tensor " + name);
  }
  return model;
}

}  // namespace spanparser
