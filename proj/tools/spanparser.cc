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

// Command-line front end over the C API: train, parse, eval and verify.

#include <spanparser/spanparser.h>

#include <atomic>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"

namespace {

int Report(sp_status status) {
  if (status != SP_OK) std::cerr << "error: " << sp_last_error() << "\n";
  return static_cast<int>(status);
}

void PrintLine(const char *line, void *) { std::cerr << line << "\n"; }

struct TrainFlags {
  std::string config_path;
  std::vector<std::string> assignments;
  // Flag name -> value, applied after the config file.
  std::map<std::string, std::string> values;
};

int RunTrain(TrainFlags &flags) {
  sp_config *config = nullptr;
  if (sp_config_create(&config) != SP_OK) return Report(SP_ERROR_INTERNAL);
  std::unique_ptr<sp_config, void (*)(sp_config *)> owner(config, sp_config_free);

  if (!flags.config_path.empty()) {
    if (sp_status s = sp_config_load_file(config, flags.config_path.c_str()); s != SP_OK) {
      return Report(s);
    }
  }
  for (const std::string &assignment : flags.assignments) {
    size_t eq = assignment.find('=');
    if (eq == std::string::npos) {
      std::cerr << "error: --set expects key=value, got '" << assignment << "'\n";
      return SP_ERROR_USAGE;
    }
    std::string key = assignment.substr(0, eq), value = assignment.substr(eq + 1);
    if (sp_status s = sp_config_set(config, key.c_str(), value.c_str()); s != SP_OK) {
      return Report(s);
    }
  }
  for (const auto &[key, value] : flags.values) {
    if (sp_status s = sp_config_set(config, key.c_str(), value.c_str()); s != SP_OK) {
      return Report(s);
    }
  }
  char *model_path = nullptr;
  sp_config_get(config, "model", &model_path);
  std::string out = model_path;
  sp_string_free(model_path);
  if (out.empty()) {
    std::cerr << "error: no output model path (use --out)\n";
    return SP_ERROR_USAGE;
  }

  char *description = nullptr;
  sp_config_describe(config, &description);
  std::cerr << "# configuration\n" << description;
  sp_string_free(description);

  sp_model *model = nullptr;
  if (sp_status s = sp_train(config, PrintLine, nullptr, &model); s != SP_OK) return Report(s);
  sp_status s = sp_model_save(model, out.c_str());
  sp_model_free(model);
  if (s != SP_OK) return Report(s);
  std::cerr << "wrote " << out << "\n";
  return 0;
}

struct ParseFlags {
  std::string model_path;
  std::string input = "-";
  std::string decoder = "chart";
  bool timing = false;
  bool scores = false;
  int jobs = 1;
};

int RunParse(const ParseFlags &flags) {
  std::vector<std::string> lines;
  {
    std::ifstream file;
    std::istream *in = &std::cin;
    if (flags.input != "-") {
      file.open(flags.input);
      if (!file) {
        std::cerr << "error: cannot open " << flags.input << "\n";
        return SP_ERROR_DATA;
      }
      in = &file;
    }
    std::string line;
    while (std::getline(*in, line)) {
      if (line.find_first_not_of(" \t\r") != std::string::npos) lines.push_back(line);
    }
  }
  sp_model *model = nullptr;
  if (sp_status s = sp_model_load(flags.model_path.c_str(), &model); s != SP_OK) {
    return Report(s);
  }
  std::unique_ptr<sp_model, void (*)(sp_model *)> owner(model, sp_model_free);

  std::vector<std::string> trees(lines.size());
  std::vector<double> scores(lines.size(), 0.0);
  std::atomic<size_t> next{0};
  std::atomic<int> failed_line{-1};
  sp_status failure = SP_OK;
  std::string failure_message;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (size_t i = next++; i < lines.size(); i = next++) {
      if (failed_line.load() >= 0) return;
      char *tree = nullptr;
      sp_status s = sp_parse(model, lines[i].c_str(), flags.decoder.c_str(), &tree, &scores[i]);
      if (s != SP_OK) {
        std::lock_guard<std::mutex> lock(failure_mutex);
        if (failed_line.load() < 0) {
          failed_line = static_cast<int>(i);
          failure = s;
          failure_message = sp_last_error();
        }
        return;
      }
      trees[i] = tree;
      sp_string_free(tree);
    }
  };
  const auto start = std::chrono::steady_clock::now();
  std::vector<std::thread> threads;
  for (int t = 1; t < flags.jobs; ++t) threads.emplace_back(worker);
  worker();
  for (std::thread &thread : threads) thread.join();
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (failed_line.load() >= 0) {
    std::cerr << "error: line " << failed_line.load() + 1 << ": " << failure_message << "\n";
    return static_cast<int>(failure);
  }
  for (size_t i = 0; i < trees.size(); ++i) {
    std::cout << trees[i] << "\n";
    if (flags.scores) std::fprintf(stderr, "score %zu\t%.6f\n", i + 1, scores[i]);
  }
  if (flags.timing) {
    std::fprintf(stderr, "parsed %zu sentences in %.3fs (%.2f sentences/second, %s)\n",
                 lines.size(), seconds, seconds > 0 ? lines.size() / seconds : 0.0,
                 flags.decoder.c_str());
  }
  return 0;
}

int RunEval(const std::string &gold, const std::string &predicted) {
  double precision = 0, recall = 0, f1 = 0;
  if (sp_status s = sp_eval_files(gold.c_str(), predicted.c_str(), &precision, &recall, &f1);
      s != SP_OK) {
    return Report(s);
  }
  std::printf("LR %.2f LP %.2f F1 %.2f\n", 100 * recall, 100 * precision, 100 * f1);
  return 0;
}

struct VerifyFlags {
  std::string suite = "all";
  uint64_t seed = 1;
  int max_n = 8;
  std::string fault;
};

void PrintStdout(const char *line, void *) { std::cout << line << std::endl; }

int RunVerify(const VerifyFlags &flags) {
  if (!flags.fault.empty()) {
    if (sp_status s = sp_inject_gradient_fault(flags.fault.c_str()); s != SP_OK) {
      return Report(s);
    }
  }
  sp_status s = sp_verify(flags.suite.c_str(), flags.seed, flags.max_n, PrintStdout, nullptr);
  if (s == SP_ERROR_VERIFY) {
    std::cout << "verification FAILED\n";
    return s;
  }
  if (s != SP_OK) return Report(s);
  std::cout << "verification passed\n";
  return 0;
}

}  // namespace

int main(int argc, char **argv) {
  CLI::App app{"Span-based constituency parser"};
  app.require_subcommand(1);

  TrainFlags train_flags;
  CLI::App *train = app.add_subcommand("train", "train a model");
  train->add_option("--config", train_flags.config_path, "key=value config file")
      ->check(CLI::ExistingFile);
  train->add_option("--set", train_flags.assignments, "override any key: --set key=value");
  const std::vector<std::pair<std::string, std::string>> train_options = {
      {"train", "training trees"},
      {"dev", "development trees"},
      {"out", "output model path"},
      {"metrics-log", "tab-separated metrics file"},
      {"decoder", "chart or topdown"},
      {"label-loss", "zero_one or hamming"},
      {"label-scorer", "atomic or three_part"},
      {"split-scorer", "minimal, left_right, concat or biaffine"},
      {"nonlinearity", "relu or tanh"},
      {"word-dim", "word embedding size"},
      {"tag-dim", "tag embedding size"},
      {"morph-dim", "morphological tag embedding size"},
      {"hidden", "LSTM and feedforward hidden size"},
      {"lstm-layers", "stacked BiLSTM layers"},
      {"dropout", "dropout ratio"},
      {"batch-size", "sentences per update"},
      {"epochs", "training epochs"},
      {"eval-every", "epochs between dev evaluations"},
      {"seed", "random seed"},
      {"explore", "top-down training follows predicted splits (true/false)"},
      {"warmup-epochs", "gold-rollout epochs before exploration"},
      {"oracle-split", "leftmost or best"},
      {"learning-rate", "Adam step size"},
      {"stop-at-train-f1", "stop once training F1 reaches this value"}};
  std::map<std::string, std::string> raw_train;
  for (const auto &[name, help] : train_options) {
    train->add_option_function<std::string>(
        "--" + name,
        [&raw_train, name = name](const std::string &value) {
          raw_train[name == "out" ? "model" : name] = value;
        },
        help);
  }

  ParseFlags parse_flags;
  CLI::App *parse = app.add_subcommand("parse", "parse tagged sentences or trees");
  parse->add_option("--model", parse_flags.model_path, "model file")->required();
  parse->add_option("--input", parse_flags.input, "input file, - for stdin");
  parse->add_option("--decoder", parse_flags.decoder, "chart or topdown")
      ->check(CLI::IsMember({"chart", "topdown"}));
  parse->add_flag("--timing", parse_flags.timing, "print sentences/second to stderr");
  parse->add_flag("--scores", parse_flags.scores, "print each tree's score to stderr");
  parse->add_option("--jobs", parse_flags.jobs, "parallel decoding threads")
      ->check(CLI::PositiveNumber);

  std::string gold_path, predicted_path;
  CLI::App *eval = app.add_subcommand("eval", "labeled bracketing scores");
  eval->add_option("gold", gold_path, "gold trees")->required();
  eval->add_option("predicted", predicted_path, "predicted trees")->required();

  VerifyFlags verify_flags;
  CLI::App *verify = app.add_subcommand("verify", "run the verification suites");
  verify->add_option("--suite", verify_flags.suite,
                     "all, chart-oracle, oracle-fidelity, completion-oracle, gradients, "
                     "complexity, label-loss, replay, speed or overfit");
  verify->add_option("--seed", verify_flags.seed, "random seed");
  verify->add_option("--max-n", verify_flags.max_n, "largest sentence length")
      ->check(CLI::Range(2, 12));
  verify->add_option("--inject-fault", verify_flags.fault,
                     "corrupt one backward rule (negative control)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    int code = app.exit(e);
    return code == 0 ? 0 : SP_ERROR_USAGE;
  }

  if (*train) {
    train_flags.values = raw_train;
    return RunTrain(train_flags);
  }
  if (*parse) return RunParse(parse_flags);
  if (*eval) return RunEval(gold_path, predicted_path);
  return RunVerify(verify_flags);
}
