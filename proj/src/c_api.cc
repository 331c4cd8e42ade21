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

#include "spanparser/spanparser.h"

#include <cstdio>
#include <cstring>
#include <fstream>
#include <memory>
#include <string>

#include "config.h"
#include "error.h"
#include "model.h"
#include "nn/tape.h"
#include "trainer.h"
#include "treebank.h"
#include "verify/suites.h"

struct sp_config {
  spanparser::RunConfig run;
};

struct sp_model {
  std::unique_ptr<spanparser::Model> model;
};

namespace {

thread_local std::string g_last_error;

sp_status Fail(sp_status status, const std::string &message) {
  g_last_error = message;
  return status;
}

template <typename Fn>
sp_status Guard(Fn &&fn) {
  try {
    g_last_error.clear();
    return fn();
  } catch (const spanparser::ConfigError &e) {
    return Fail(SP_ERROR_USAGE, e.what());
  } catch (const spanparser::ParseError &e) {
    return Fail(SP_ERROR_DATA, e.what());
  } catch (const spanparser::DataError &e) {
    return Fail(SP_ERROR_DATA, e.what());
  } catch (const spanparser::StructureError &e) {
    return Fail(SP_ERROR_DATA, e.what());
  } catch (const std::exception &e) {
    return Fail(SP_ERROR_INTERNAL, e.what());
  } catch (...) {
    return Fail(SP_ERROR_INTERNAL, "unknown error");
  }
}

char *Copy(const std::string &text) {
  char *out = static_cast<char *>(std::malloc(text.size() + 1));
  if (out == nullptr) throw std::bad_alloc();
  std::memcpy(out, text.c_str(), text.size() + 1);
  return out;
}

sp_status Null(const char *what) {
  return Fail(SP_ERROR_USAGE, std::string(what) + " must not be NULL");
}

std::string Trim(const std::string &text) {
  size_t begin = text.find_first_not_of(" \t\r\n");
  if (begin == std::string::npos) return "";
  size_t end = text.find_last_not_of(" \t\r\n");
  return text.substr(begin, end - begin + 1);
}

}  // namespace

extern "C" {

const char *sp_last_error(void) { return g_last_error.c_str(); }

void sp_string_free(char *text) { std::free(text); }

sp_status sp_config_create(sp_config **config) {
  if (config == nullptr) return Null("config");
  return Guard([&] {
    *config = new sp_config();
    return SP_OK;
  });
}

void sp_config_free(sp_config *config) { delete config; }

sp_status sp_config_set(sp_config *config, const char *key, const char *value) {
  if (config == nullptr || key == nullptr || value == nullptr) return Null("argument");
  return Guard([&] {
    config->run.Set(key, value);
    return SP_OK;
  });
}

sp_status sp_config_get(const sp_config *config, const char *key, char **value) {
  if (config == nullptr || key == nullptr || value == nullptr) return Null("argument");
  return Guard([&] {
    *value = Copy(config->run.Get(key));
    return SP_OK;
  });
}

sp_status sp_config_load_file(sp_config *config, const char *path) {
  if (config == nullptr || path == nullptr) return Null("argument");
  return Guard([&] {
    config->run.LoadFile(path);
    return SP_OK;
  });
}

sp_status sp_config_describe(const sp_config *config, char **text) {
  if (config == nullptr || text == nullptr) return Null("argument");
  return Guard([&] {
    *text = Copy(config->run.Describe());
    return SP_OK;
  });
}

sp_status sp_train(const sp_config *config, sp_line_callback on_line, void *user_data,
                   sp_model **model) {
  if (config == nullptr || model == nullptr) return Null("argument");
  return Guard([&] {
    const spanparser::RunConfig &run = config->run;
    if (run.train_path().empty()) {
      return Fail(SP_ERROR_USAGE, "no training corpus given (set train)");
    }
    auto train = spanparser::ReadBracketedFile(run.train_path());
    std::vector<spanparser::TreebankEntry> dev;
    if (!run.dev_path().empty()) dev = spanparser::ReadBracketedFile(run.dev_path());
    std::ofstream metrics;
    if (!run.metrics_path().empty()) {
      metrics.open(run.metrics_path());
      if (!metrics) throw spanparser::DataError("cannot write " + run.metrics_path());
    }
    auto report = [&](const spanparser::EpochMetrics &epoch) {
      if (on_line == nullptr) return;
      char line[256];
      if (epoch.dev) {
        std::snprintf(line, sizeof line, "epoch %d  loss %.4f  dev P %.2f R %.2f F1 %.2f  %.1fs",
                      epoch.epoch, epoch.train_loss, 100 * epoch.dev->precision,
                      100 * epoch.dev->recall, 100 * epoch.dev->f1, epoch.seconds);
      } else {
        std::snprintf(line, sizeof line, "epoch %d  loss %.4f  %.1fs", epoch.epoch,
                      epoch.train_loss, epoch.seconds);
      }
      on_line(line, user_data);
    };
    spanparser::TrainResult result = spanparser::Train(
        train, dev, run.train(), metrics.is_open() ? &metrics : nullptr, report);
    *model = new sp_model{std::move(result.model)};
    return SP_OK;
  });
}

sp_status sp_model_load(const char *path, sp_model **model) {
  if (path == nullptr || model == nullptr) return Null("argument");
  return Guard([&] {
    *model = new sp_model{spanparser::Model::Load(path)};
    return SP_OK;
  });
}

sp_status sp_model_save(const sp_model *model, const char *path) {
  if (model == nullptr || path == nullptr) return Null("argument");
  return Guard([&] {
    model->model->Save(path);
    return SP_OK;
  });
}

void sp_model_free(sp_model *model) { delete model; }

sp_status sp_model_describe(const sp_model *model, char **text) {
  if (model == nullptr || text == nullptr) return Null("argument");
  return Guard([&] {
    const spanparser::Model &m = *model->model;
    const spanparser::ModelConfig &c = m.config();
    std::string out;
    out += "label_scorer=" + spanparser::ToString(c.label_scorer) + "\n";
    out += "split_scorer=" + spanparser::ToString(c.split_scorer) + "\n";
    out += "nonlinearity=" + spanparser::ToString(c.activation) + "\n";
    out += "hidden=" + std::to_string(c.hidden) + "\n";
    out += "words=" + std::to_string(m.vocab().words.size()) + "\n";
    out += "tags=" + std::to_string(m.vocab().tags.size()) + "\n";
    out += "labels=" + std::to_string(m.inventory().atomic_size()) + "\n";
    out += "parameters=" + std::to_string(m.params().ParameterCount()) + "\n";
    *text = Copy(out);
    return SP_OK;
  });
}

sp_status sp_parse(sp_model *model, const char *line, const char *decoder, char **tree,
                   double *score) {
  if (model == nullptr || line == nullptr || tree == nullptr) return Null("argument");
  return Guard([&] {
    spanparser::DecoderKind kind =
        spanparser::ParseDecoder(decoder == nullptr ? "chart" : decoder);
    std::string text = Trim(line);
    spanparser::Sentence sentence;
    if (!text.empty() && text[0] == '(') {
      auto entries = spanparser::ReadBracketed(text);
      if (entries.size() != 1) {
        throw spanparser::ParseError("expected exactly one tree per line");
      }
      sentence = entries.front().sentence;
    } else {
      sentence = spanparser::ReadTaggedLine(text);
    }
    spanparser::ParseOutput output = spanparser::Parse(*model->model, sentence, kind);
    *tree = Copy(spanparser::WriteBracketed(sentence, output.tree));
    if (score != nullptr) *score = output.score;
    return SP_OK;
  });
}

sp_status sp_eval_files(const char *gold_path, const char *predicted_path, double *precision,
                        double *recall, double *f1) {
  if (gold_path == nullptr || predicted_path == nullptr) return Null("path");
  return Guard([&] {
    auto gold = spanparser::ReadBracketedFile(gold_path);
    auto predicted = spanparser::ReadBracketedFile(predicted_path);
    if (predicted.empty()) {
      throw spanparser::DataError(std::string(predicted_path) + " contains no trees");
    }
    std::vector<spanparser::ParseTree> gold_trees, predicted_trees;
    for (size_t i = 0; i < gold.size() && i < predicted.size(); ++i) {
      if (gold[i].sentence.words != predicted[i].sentence.words) {
        throw spanparser::DataError("tree " + std::to_string(i + 1) +
                                    ": gold and predicted words differ");
      }
    }
    for (auto &entry : gold) gold_trees.push_back(std::move(entry.tree));
    for (auto &entry : predicted) predicted_trees.push_back(std::move(entry.tree));
    spanparser::F1Score result = spanparser::LabeledF1(gold_trees, predicted_trees);
    if (precision) *precision = result.precision;
    if (recall) *recall = result.recall;
    if (f1) *f1 = result.f1;
    return SP_OK;
  });
}

sp_status sp_verify(const char *suite, uint64_t seed, int max_n, sp_line_callback on_line,
                    void *user_data) {
  return Guard([&] {
    namespace verify = spanparser::verify;
    std::string name = suite == nullptr ? "all" : suite;
    std::vector<std::string> names =
        name == "all" ? verify::DefaultSuites() : std::vector<std::string>{name};
    verify::SuiteOptions options;
    options.seed = seed;
    if (max_n > 0) options.max_n = max_n;
    if (options.max_n < 2) throw spanparser::ConfigError("max_n must be at least 2");
    bool all_passed = true;
    for (const std::string &suite_name : names) {
      verify::SuiteResult result = verify::RunSuite(suite_name, options);
      all_passed = all_passed && result.passed;
      if (on_line != nullptr) {
        char timing[32];
        std::snprintf(timing, sizeof timing, " (%.1fs)", result.seconds);
        std::string line = std::string(result.passed ? "PASS " : "FAIL ") + result.name + ": " +
                           result.detail + timing;
        on_line(line.c_str(), user_data);
      }
    }
    if (!all_passed) return Fail(SP_ERROR_VERIFY, "verification failed");
    return SP_OK;
  });
}

sp_status sp_inject_gradient_fault(const char *op) {
  using spanparser::nn::Op;
  if (op == nullptr) {
    spanparser::nn::SetGradientFault(std::nullopt);
    return SP_OK;
  }
  static const std::pair<const char *, Op> ops[] = {
      {"affine", Op::kAffine},   {"relu", Op::kRelu},         {"tanh", Op::kTanh},
      {"sigmoid", Op::kSigmoid}, {"matvec", Op::kMatVec},     {"cwise_mul", Op::kCwiseMul},
      {"concat", Op::kConcat},   {"bilinear", Op::kBilinear}, {"lookup", Op::kLookup}};
  for (const auto &[name, value] : ops) {
    if (std::strcmp(name, op) == 0) {
      spanparser::nn::SetGradientFault(value);
      return SP_OK;
    }
  }
  return Fail(SP_ERROR_USAGE, std::string("unknown operation '") + op + "'");
}

}  // extern "C"
