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

#ifndef SPANPARSER_VERIFY_SUITES_H_
#define SPANPARSER_VERIFY_SUITES_H_

#include <cstdint>
#include <string>
#include <vector>

#include "scorers.h"
#include "treebank.h"

namespace spanparser::verify {

struct SuiteOptions {
  uint64_t seed = 1;
  // Largest sentence length for the exhaustive suites.
  int max_n = 8;
  // Random instances for the exhaustive suites.
  int instances = 500;
};

struct SuiteResult {
  std::string name;
  bool passed = false;
  std::string detail;
  double seconds = 0.0;
};

// Chart decoding against exhaustive maximization over labeled binary trees.
SuiteResult ChartOracleSuite(const SuiteOptions &options);
// Oracle labels and every oracle split choice rebuild random gold trees.
SuiteResult OracleFidelitySuite(const SuiteOptions &options);
// Oracle completions from explored states reach the best achievable F1.
SuiteResult CompletionOracleSuite(const SuiteOptions &options);
// Finite-difference checks of both training losses for every scorer pair.
SuiteResult GradientSuite(const SuiteOptions &options);
// Split and span-network evaluation counts at n = 10, 20, 40.
SuiteResult ComplexitySuite(const SuiteOptions &options);
// Metric properties and exact values of the label losses.
SuiteResult LabelLossSuite(const SuiteOptions &options);
// Greedy decoding of the "She enjoys playing tennis ." example.
SuiteResult ReplaySuite(const SuiteOptions &options);
// Top-down versus chart decoding throughput at n = 40.
SuiteResult SpeedSuite(const SuiteOptions &options);
// Memorization of a 50-sentence synthetic corpus.
SuiteResult OverfitSuite(const SuiteOptions &options);

// Names accepted by RunSuite. The default set excludes "overfit" and "speed",
// which take minutes.
const std::vector<std::string> &SuiteNames();
const std::vector<std::string> &DefaultSuites();
// Throws ConfigError on unknown names.
SuiteResult RunSuite(const std::string &name, const SuiteOptions &options);

// The example sentence and its gold tree, and a score table whose local
// argmaxes are exactly the top-down decisions that build it.
TreebankEntry ExampleEntry();
TableScores ExampleScores();
extern const char *const kExampleBracketing;

}  // namespace spanparser::verify

#endif  // SPANPARSER_VERIFY_SUITES_H_
