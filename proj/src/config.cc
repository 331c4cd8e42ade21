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

#include "config.h"

#include <fstream>
#include <sstream>

#include "error.h"

namespace spanparser {

namespace {

std::string Trim(const std::string &text) {
  const char *space = " \t\r";
  size_t begin = text.find_first_not_of(space);
  if (begin == std::string::npos) return "";
  size_t end = text.find_last_not_of(space);
  return text.substr(begin, end - begin + 1);
}

int ToInt(const std::string &key, const std::string &value) {
  size_t used = 0;
  int result = 0;
  try {
    result = std::stoi(value, &used);
  } catch (const std::logic_error &) {
    used = 0;
  }
  if (used == 0 || used != value.size()) {
    throw ConfigError(key + " expects an integer, got '" + value + "'");
  }
  return result;
}

uint64_t ToUnsigned(const std::string &key, const std::string &value) {
  size_t used = 0;
  uint64_t result = 0;
  try {
    if (!value.empty() && value[0] != '-') result = std::stoull(value, &used);
  } catch (const std::logic_error &) {
    used = 0;
  }
  if (used == 0 || used != value.size()) {
    throw ConfigError(key + " expects a nonnegative integer, got '" + value + "'");
  }
  return result;
}

double ToDouble(const std::string &key, const std::string &value) {
  size_t used = 0;
  double result = 0.0;
  try {
    result = std::stod(value, &used);
  } catch (const std::logic_error &) {
    used = 0;
  }
  if (used == 0 || used != value.size()) {
    throw ConfigError(key + " expects a number, got '" + value + "'");
  }
  return result;
}

bool ToBool(const std::string &key, const std::string &value) {
  if (value == "true" || value == "1") return true;
  if (value == "false" || value == "0") return false;
  throw ConfigError(key + " expects true or false, got '" + value + "'");
}

std::string FormatDouble(double value) {
  std::ostringstream out;
  out << value;
  return out.str();
}

}  // namespace

const std::vector<std::string> &RunConfig::Keys() {
  static const std::vector<std::string> keys = {
      "train",         "dev",          "model",        "metrics_log",  "decoder",
      "label_loss",    "label_scorer", "split_scorer", "nonlinearity", "word_dim",
      "tag_dim",       "morph_dim",    "hidden",       "lstm_layers",  "dropout",
      "batch_size",    "epochs",       "eval_every",   "seed",         "explore",
      "warmup_epochs", "oracle_split", "learning_rate", "beta1",       "beta2",
      "epsilon",       "stop_at_train_f1"};
  return keys;
}

void RunConfig::Set(const std::string &raw_key, const std::string &raw_value) {
  std::string key = Trim(raw_key);
  for (char &c : key) {
    if (c == '-') c = '_';
  }
  const std::string value = Trim(raw_value);
  TrainConfig next = train_;
  ModelConfig &model = next.model;
  if (key == "train") {
    train_path_ = value;
    return;
  } else if (key == "dev") {
    dev_path_ = value;
    return;
  } else if (key == "model") {
    model_path_ = value;
    return;
  } else if (key == "metrics_log") {
    metrics_path_ = value;
    return;
  } else if (key == "decoder") {
    next.decoder = ParseDecoder(value);
  } else if (key == "label_loss") {
    next.label_loss = ParseLabelLoss(value);
  } else if (key == "label_scorer") {
    model.label_scorer = ParseLabelScorer(value);
  } else if (key == "split_scorer") {
    model.split_scorer = ParseSplitScorer(value);
  } else if (key == "nonlinearity") {
    model.activation = ParseActivation(value);
  } else if (key == "word_dim") {
    model.word_dim = ToInt(key, value);
  } else if (key == "tag_dim") {
    model.tag_dim = ToInt(key, value);
  } else if (key == "morph_dim") {
    model.morph_dim = ToInt(key, value);
  } else if (key == "hidden") {
    model.hidden = ToInt(key, value);
  } else if (key == "lstm_layers") {
    model.lstm_layers = ToInt(key, value);
  } else if (key == "dropout") {
    model.dropout = ToDouble(key, value);
  } else if (key == "batch_size") {
    next.batch_size = ToInt(key, value);
  } else if (key == "epochs") {
    next.epochs = ToInt(key, value);
  } else if (key == "eval_every") {
    next.eval_every = ToInt(key, value);
  } else if (key == "seed") {
    next.seed = ToUnsigned(key, value);
  } else if (key == "explore") {
    next.explore = ToBool(key, value);
  } else if (key == "warmup_epochs") {
    next.warmup_epochs = ToInt(key, value);
  } else if (key == "oracle_split") {
    if (value == "leftmost") {
      next.oracle_split = OracleSplitChoice::kLeftmost;
    } else if (value == "best") {
      next.oracle_split = OracleSplitChoice::kBestScoring;
    } else {
      throw ConfigError("oracle_split expects leftmost or best, got '" + value + "'");
    }
  } else if (key == "learning_rate") {
    next.adam.learning_rate = ToDouble(key, value);
  } else if (key == "beta1") {
    next.adam.beta1 = ToDouble(key, value);
  } else if (key == "beta2") {
    next.adam.beta2 = ToDouble(key, value);
  } else if (key == "epsilon") {
    next.adam.epsilon = ToDouble(key, value);
  } else if (key == "stop_at_train_f1") {
    next.stop_at_train_f1 = ToDouble(key, value);
  } else {
    throw ConfigError("unknown configuration key '" + key + "'");
  }
  try {
    next.Validate();
  } catch (const ConfigError &e) {
    throw ConfigError("invalid value '" + value + "' for " + key + ": " + e.what());
  }
  train_ = next;
}

std::string RunConfig::Get(const std::string &raw_key) const {
  std::string key = Trim(raw_key);
  for (char &c : key) {
    if (c == '-') c = '_';
  }
  const ModelConfig &model = train_.model;
  if (key == "train") return train_path_;
  if (key == "dev") return dev_path_;
  if (key == "model") return model_path_;
  if (key == "metrics_log") return metrics_path_;
  if (key == "decoder") return ToString(train_.decoder);
  if (key == "label_loss") return ToString(train_.label_loss);
  if (key == "label_scorer") return ToString(model.label_scorer);
  if (key == "split_scorer") return ToString(model.split_scorer);
  if (key == "nonlinearity") return ToString(model.activation);
  if (key == "word_dim") return std::to_string(model.word_dim);
  if (key == "tag_dim") return std::to_string(model.tag_dim);
  if (key == "morph_dim") return std::to_string(model.morph_dim);
  if (key == "hidden") return std::to_string(model.hidden);
  if (key == "lstm_layers") return std::to_string(model.lstm_layers);
  if (key == "dropout") return FormatDouble(model.dropout);
  if (key == "batch_size") return std::to_string(train_.batch_size);
  if (key == "epochs") return std::to_string(train_.epochs);
  if (key == "eval_every") return std::to_string(train_.eval_every);
  if (key == "seed") return std::to_string(train_.seed);
  if (key == "explore") return train_.explore ? "true" : "false";
  if (key == "warmup_epochs") return std::to_string(train_.warmup_epochs);
  if (key == "oracle_split") {
    return train_.oracle_split == OracleSplitChoice::kLeftmost ? "leftmost" : "best";
  }
  if (key == "learning_rate") return FormatDouble(train_.adam.learning_rate);
  if (key == "beta1") return FormatDouble(train_.adam.beta1);
  if (key == "beta2") return FormatDouble(train_.adam.beta2);
  if (key == "epsilon") return FormatDouble(train_.adam.epsilon);
  if (key == "stop_at_train_f1") return FormatDouble(train_.stop_at_train_f1);
  throw ConfigError("unknown configuration key '" + key + "'");
}

void RunConfig::LoadFile(const std::string &path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open config file " + path);
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    std::string content = Trim(line);
    if (content.empty() || content[0] == '#') continue;
    size_t eq = content.find('=');
    if (eq == std::string::npos) {
      throw ConfigError(path + ":" + std::to_string(number) + ": expected key=value");
    }
    try {
      Set(content.substr(0, eq), content.substr(eq + 1));
    } catch (const ConfigError &e) {
      throw ConfigError(path + ":" + std::to_string(number) + ": " + e.what());
    }
  }
}

std::string RunConfig::Describe() const {
  std::string text;
  for (const std::string &key : Keys()) text += key + "=" + Get(key) + "\n";
  return text;
}

}  // namespace spanparser
