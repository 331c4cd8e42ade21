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

#include "verify/suites.h"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <random>

#include "chart_decoder.h"
#include "encoder.h"
#include "error.h"
#include "label_loss.h"
#include "nn/gradient_check.h"
#include "oracle.h"
#include "topdown_decoder.h"
#include "trainer.h"
#include "verify/brute_force.h"
#include "verify/synthetic.h"

namespace spanparser::verify {

namespace {

using Clock = std::chrono::steady_clock;

double Since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string Format(const char *format, auto... args) {
  char buffer[512];
  std::snprintf(buffer, sizeof buffer, format, args...);
  return buffer;
}

SuiteResult Finish(const std::string &name, bool passed, std::string detail,
                   Clock::time_point start) {
  return {name, passed, std::move(detail), Since(start)};
}

}  // namespace

// Chart decoding

SuiteResult ChartOracleSuite(const SuiteOptions &options) {
  const auto start = Clock::now();
  nn::Rng rng(options.seed);
  const int max_n = std::max(2, options.max_n);
  double worst = 0.0;
  int joint_checks = 0;
  for (int instance = 0; instance < options.instances; ++instance) {
    const int n = 2 + instance % (max_n - 1);
    const int labels = 1 + static_cast<int>(rng() % 3);
    TableScores table = RandomTableScores(n, labels, rng);
    const bool augment = instance % 4 == 3;
    TreebankEntry gold = RandomTree(n, rng);
    SpanLabeling gold_labels = GoldLabeling(gold.tree);

    BruteForceOptions brute_options;
    if (augment) brute_options.augment_gold = &gold_labels;
    ChartOptions chart_options;
    if (augment) chart_options.augment_gold = &gold_labels;

    ChartResult result = CkyDecode(table, chart_options);
    const double expected = BruteForceBest(table, brute_options);
    double diff = std::abs(result.augmented_score - expected);
    // The returned tree must attain the optimum.
    double attained = DecisionsScore(table, result.decisions);
    if (augment) attained += DecisionsDelta(result.decisions, gold_labels, LabelLossKind::kZeroOne);
    diff = std::max(diff, std::abs(attained - expected));
    if (!augment) diff = std::max(diff, std::abs(TreeScore(table, result.tree) - result.score));
    if (n <= 4) {
      brute_options.joint_labelings = true;
      diff = std::max(diff, std::abs(BruteForceBest(table, brute_options) - expected));
      ++joint_checks;
    }
    worst = std::max(worst, diff);
    if (diff > 1e-9) {
      return Finish("chart-oracle", false,
                    Format("instance %d (n=%d): chart %.12f vs exhaustive %.12f", instance, n,
                           result.augmented_score, expected),
                    start);
    }
  }
  const double seconds = Since(start);
  return Finish("chart-oracle", seconds < 60.0,
                Format("%d instances, n=2..%d, max |diff| %.2e, %d joint-labeling cross-checks, "
                       "%.2fs",
                       options.instances, max_n, worst, joint_checks, seconds),
                start);
}

// Dynamic oracle

namespace {

using Path = std::pair<std::map<Span, CompositeLabel>, std::map<Span, int>>;

std::vector<Path> OraclePaths(const GoldIndex &gold, Span span) {
  Path own;
  own.first[span] = OracleLabel(span, gold);
  if (span.length() == 1) return {own};
  std::vector<Path> result;
  for (int k : OracleSplits(span, gold)) {
    for (const Path &left : OraclePaths(gold, {span.left, k})) {
      for (const Path &right : OraclePaths(gold, {k, span.right})) {
        Path path = own;
        path.second[span] = k;
        path.first.insert(left.first.begin(), left.first.end());
        path.first.insert(right.first.begin(), right.first.end());
        path.second.insert(left.second.begin(), left.second.end());
        path.second.insert(right.second.begin(), right.second.end());
        result.push_back(std::move(path));
      }
    }
  }
  return result;
}

}  // namespace

SuiteResult OracleFidelitySuite(const SuiteOptions &options) {
  const auto start = Clock::now();
  nn::Rng rng(options.seed + 1);
  int64_t paths = 0, spans_checked = 0;
  for (int instance = 0; instance < options.instances; ++instance) {
    const int n = 1 + instance % std::max(1, options.max_n);
    TreebankEntry entry = RandomTree(n, rng);
    GoldIndex gold(entry.tree);
    for (int i = 0; i < n; ++i) {
      for (int j = i + 2; j <= n; ++j) {
        ++spans_checked;
        if (OracleSplits({i, j}, gold).empty()) {
          return Finish("oracle-fidelity", false,
                        Format("empty oracle split set for (%d, %d) in %s", i, j,
                               WriteBracketed(entry.sentence, entry.tree).c_str()),
                        start);
        }
      }
    }
    for (const Path &path : OraclePaths(gold, {0, n})) {
      ++paths;
      ParseTree rebuilt = Reconstruct(n, path.first, path.second);
      F1Score score = LabeledF1({entry.tree}, {rebuilt});
      if (!(rebuilt == entry.tree) || score.f1 != 1.0) {
        return Finish("oracle-fidelity", false,
                      Format("oracle path rebuilt %s instead of %s",
                             WriteBracketed(entry.sentence, rebuilt).c_str(),
                             WriteBracketed(entry.sentence, entry.tree).c_str()),
                      start);
      }
    }
  }
  return Finish("oracle-fidelity", true,
                Format("%d trees, n<=%d, %lld oracle paths all F1=1.0, %lld spans with nonempty "
                       "oracle splits",
                       options.instances, options.max_n, static_cast<long long>(paths),
                       static_cast<long long>(spans_checked)),
                start);
}

SuiteResult CompletionOracleSuite(const SuiteOptions &options) {
  const auto start = Clock::now();
  nn::Rng rng(options.seed + 2);
  const int max_n = std::min(6, std::max(2, options.max_n));
  int states = 0;
  for (int instance = 0; instance < options.instances; ++instance) {
    const int n = 2 + instance % (max_n - 1);
    TreebankEntry entry = RandomTree(n, rng);
    GoldIndex gold(entry.tree);
    // An adversarial scorer over the gold labels plus a wrong one.
    std::vector<CompositeLabel> labels = {CompositeLabel()};
    for (const auto &[span, label] : gold.labeling().entries()) {
      if (std::find(labels.begin(), labels.end(), label) == labels.end()) labels.push_back(label);
    }
    labels.push_back(CompositeLabel{"X"});
    TableScores table(n, labels);
    std::uniform_real_distribution<double> uniform(-1.0, 1.0);
    for (int i = 0; i < n; ++i) {
      for (int j = i + 1; j <= n; ++j) {
        for (size_t l = 0; l < labels.size(); ++l) table.label_score({i, j}, l) = uniform(rng);
        for (int k = i + 1; k < j; ++k) table.split_score(i, k, j) = uniform(rng);
      }
    }
    TopdownResult explored = GreedyDecode(table);
    for (const DecisionRecord &record : explored.records) {
      std::map<Span, CompositeLabel> outside;
      for (const auto &[span, choice] : explored.decisions.labels) {
        if (!record.span.contains(span) && !choice.label.empty()) outside[span] = choice.label;
      }
      CompletionCheck check = CheckOracleCompletion(gold, outside, record.span);
      ++states;
      if (!check.optimal) {
        return Finish("completion-oracle", false,
                      Format("state (%d, %d) of %s: oracle F1 %.6f < best %.6f",
                             record.span.left, record.span.right,
                             WriteBracketed(entry.sentence, entry.tree).c_str(), check.oracle_f1,
                             check.best_f1),
                      start);
      }
    }
  }
  return Finish("completion-oracle", true,
                Format("%d explored states over %d trees (n<=%d): oracle completions reach the "
                       "best F1",
                       states, options.instances, max_n),
                start);
}

// Gradients

SuiteResult GradientSuite(const SuiteOptions &options) {
  const auto start = Clock::now();
  constexpr double kTolerance = 1e-4;
  constexpr double kStep = 1e-3;
  // Central differences at h = 1e-3 carry O(h^2) truncation error, which on
  // small gradients can exceed the tolerance by itself. Such coordinates are
  // re-measured with h halved up to three times and accepted only if the
  // error shrinks roughly fourfold per halving (2.5x to 8x) and ends within
  // tolerance. The error from a wrong backward rule does not shrink with h.
  constexpr double kDenominatorFloor = 1e-6;
  // Three-word training sentences; the vocabulary also sees a few others so
  // the label inventory has several entries.
  std::vector<TreebankEntry> corpus = ReadBracketed(
      "(S (NP (DT the) (NN dog)) (VP (VBZ runs)))\n"
      "(S (NP (PRP she)) (VP (VBZ sees) (NP (PRP it))))\n"
      "(S (VP (VB go) (S (VP (VB run)))) (. .))\n"
      "(NP (NP (NN cat)) (PP (IN in) (NP (NN hat))))\n");
  auto [vocab, inventory] = BuildVocab(corpus);

  const LabelScorerKind label_kinds[] = {LabelScorerKind::kAtomic, LabelScorerKind::kThreePart};
  const SplitScorerKind split_kinds[] = {SplitScorerKind::kMinimal, SplitScorerKind::kLeftRight,
                                         SplitScorerKind::kConcat, SplitScorerKind::kBiaffine};
  const DecoderKind decoders[] = {DecoderKind::kChart, DecoderKind::kTopdown};
  double worst = 0.0, worst_abs = 0.0, worst_refined = 0.0;
  int checks = 0, coordinates = 0, resamples = 0, truncation_limited = 0;
  std::string failures;
  for (DecoderKind decoder : decoders) {
    for (LabelScorerKind label_kind : label_kinds) {
      for (SplitScorerKind split_kind : split_kinds) {
        TrainConfig config;
        config.decoder = decoder;
        config.label_loss = label_kind == LabelScorerKind::kAtomic ? LabelLossKind::kZeroOne
                                                                   : LabelLossKind::kHamming;
        config.model.word_dim = 3;
        config.model.tag_dim = 2;
        config.model.hidden = 3;
        config.model.dropout = 0.2;
        config.model.activation = nn::Activation::kRelu;
        config.model.label_scorer = label_kind;
        config.model.split_scorer = split_kind;
        const std::string name = ToString(decoder) + "/" + ToString(label_kind) + "/" +
                                 ToString(split_kind);
        bool done = false;
        for (int attempt = 0; attempt < 200 && !done; ++attempt) {
          nn::Rng init(options.seed * 1000003 + attempt * 7919 + checks);
          Model model(config.model, vocab, inventory, init);
          const TreebankEntry &entry = corpus[attempt % 3];
          const uint64_t dropout_seed = options.seed + attempt;
          nn::LossBuilder build = [&](nn::Tape &tape) {
            nn::Rng rng(dropout_seed);
            return SentenceLoss(tape, model, entry, config, /*epoch=*/1, /*training=*/true, rng);
          };
          {
            nn::Tape tape(false);
            nn::Expr loss = build(tape);
            // Resample points with an inactive loss or a kink within 1e-6.
            if (tape.ScalarValue(loss) <= 1e-3 || tape.KinkDistance(loss) < 1e-6) {
              ++resamples;
              continue;
            }
          }
          std::vector<nn::Tensor *> params;
          for (int p = 0; p < model.params().size(); ++p) params.push_back(&model.params().at(p));
          nn::GradientCheckOptions check_options;
          check_options.step = kStep;
          check_options.denominator_floor = kDenominatorFloor;
          check_options.report_above = kTolerance;
          nn::GradientCheckResult result = nn::GradientCheck(build, params, check_options);
          if (!result.kink_free) {
            ++resamples;
            continue;
          }
          done = true;
          ++checks;
          coordinates += result.coordinates_checked;
          worst = std::max(worst, result.max_relative_error);
          worst_abs = std::max(worst_abs, result.max_absolute_error);
          for (const nn::GradientViolation &v : result.violations) {
            nn::Tensor &tensor = *params[v.tensor];
            auto relative = [&](double numeric) {
              return std::abs(v.analytic - numeric) /
                     std::max({std::abs(v.analytic), std::abs(numeric), kDenominatorFloor});
            };
            double step = kStep, error = v.relative_error;
            bool quadratic = true;
            for (int halving = 0; halving < 3 && error > kTolerance && quadratic; ++halving) {
              step /= 2;
              const double next = relative(nn::CentralDifference(build, tensor, v.coordinate, step));
              const double ratio = error / std::max(next, 1e-300);
              quadratic = ratio > 2.5 && ratio < 8.0;
              error = next;
            }
            worst_refined = std::max(worst_refined, error);
            if (quadratic && error <= kTolerance) {
              ++truncation_limited;
              continue;
            }
            failures += " " + name + " (" + Format("%.2e", v.relative_error) + " at " +
                        tensor.name() + "[" + std::to_string(v.coordinate) + "] analytic=" +
                        Format("%.6g", v.analytic) + " numeric=" + Format("%.6g", v.numeric) +
                        Format(", %.2e at h=%.2e", error, step) + ")";
            break;
          }
        }
        if (!done) failures += " " + name + " (no kink-free point with positive loss)";
      }
    }
  }
  const bool passed = failures.empty();
  std::string detail =
      Format("%d loss configurations, %d coordinates, h=%.0e, max rel err %.2e (tolerance %.0e), "
             "max abs err %.2e, %d resampled points, %d coordinates over tolerance with O(h^2) "
             "error (max %.2e after refining h)",
             checks, coordinates, kStep, worst, kTolerance, worst_abs, resamples,
             truncation_limited, worst_refined);
  if (!passed) detail += "; failing:" + failures;
  return Finish("gradients", passed, detail, start);
}

// Complexity counters

namespace {

Sentence RandomSentence(int length, const std::vector<TreebankEntry> &corpus, nn::Rng &rng) {
  Sentence sentence;
  while (sentence.size() < length) {
    const TreebankEntry &entry = corpus[rng() % corpus.size()];
    for (int i = 0; i < entry.sentence.size() && sentence.size() < length; ++i) {
      sentence.words.push_back(entry.sentence.words[i]);
      sentence.tags.push_back(entry.sentence.tags[i]);
    }
  }
  return sentence;
}

}  // namespace

SuiteResult ComplexitySuite(const SuiteOptions &options) {
  const auto start = Clock::now();
  std::vector<TreebankEntry> corpus = SyntheticCorpus(50, options.seed);
  auto [vocab, inventory] = BuildVocab(corpus);
  nn::Rng rng(options.seed + 3);
  std::string failures;
  std::string summary;
  const SplitScorerKind kinds[] = {SplitScorerKind::kMinimal, SplitScorerKind::kLeftRight,
                                   SplitScorerKind::kConcat, SplitScorerKind::kBiaffine};
  for (SplitScorerKind kind : kinds) {
    ModelConfig config;
    config.word_dim = 8;
    config.tag_dim = 4;
    config.hidden = 16;
    config.split_scorer = kind;
    Model model(config, vocab, inventory, rng);
    for (int n : {10, 20, 40}) {
      Sentence sentence = RandomSentence(n, corpus, rng);
      nn::Tape tape(false);
      SentenceEncoding encoding = Encode(tape, model, sentence, false, rng);
      const int64_t spans = static_cast<int64_t>(n) * (n + 1) / 2;
      int64_t additions = 0;
      for (int length = 2; length <= n; ++length) additions += (n - length + 1) * (length - 1);

      NeuralScores chart_scores(tape, model, encoding);
      ChartResult chart = CkyDecode(chart_scores);
      const ScoreCounters &chart_counts = chart_scores.counters();
      if (chart.split_evals != additions) {
        failures += Format(" %s n=%d chart split additions %lld != %lld", ToString(kind).c_str(),
                           n, static_cast<long long>(chart.split_evals),
                           static_cast<long long>(additions));
      }
      if (IsDecomposable(kind)) {
        for (int net = 0; net < 2; ++net) {
          if (chart_counts.span_evals[net] > spans) {
            failures += Format(" %s n=%d chart span-network[%d] evals %lld > %lld",
                               ToString(kind).c_str(), n, net,
                               static_cast<long long>(chart_counts.span_evals[net]),
                               static_cast<long long>(spans));
          }
        }
        NeuralScores precomputed(tape, model, encoding);
        precomputed.PrecomputeSpanScores();
        const int64_t expected_nets = kind == SplitScorerKind::kLeftRight ? 2 : 1;
        if (precomputed.counters().span_evals[0] != spans ||
            precomputed.counters().span_evals[1] != (expected_nets == 2 ? spans : 0)) {
          failures += Format(" %s n=%d precompute did not evaluate each span once",
                             ToString(kind).c_str(), n);
        }
      }
      if (chart_counts.label_evals > spans) {
        failures += Format(" %s n=%d chart label evals %lld > %lld", ToString(kind).c_str(), n,
                           static_cast<long long>(chart_counts.label_evals),
                           static_cast<long long>(spans));
      }

      NeuralScores greedy_scores(tape, model, encoding);
      TopdownResult greedy = GreedyDecode(greedy_scores);
      const int64_t bound = static_cast<int64_t>(n) * (n - 1) / 2 + n;
      if (greedy.split_evals > bound) {
        failures += Format(" %s n=%d top-down split evals %lld > %lld", ToString(kind).c_str(),
                           n, static_cast<long long>(greedy.split_evals),
                           static_cast<long long>(bound));
      }
      if (greedy_scores.counters().label_evals != 2 * n - 1) {
        failures += Format(" %s n=%d top-down label evals %lld != %d", ToString(kind).c_str(),
                           n, static_cast<long long>(greedy_scores.counters().label_evals),
                           2 * n - 1);
      }
      if (kind == SplitScorerKind::kLeftRight) {
        summary += Format(" n=%d: top-down splits %lld<=%lld, chart span evals %lld/%lld<=%lld;",
                          n, static_cast<long long>(greedy.split_evals),
                          static_cast<long long>(bound),
                          static_cast<long long>(chart_counts.span_evals[0]),
                          static_cast<long long>(chart_counts.span_evals[1]),
                          static_cast<long long>(spans));
      }
    }
  }
  const bool passed = failures.empty();
  return Finish("complexity", passed,
                passed ? "left_right" + summary + " all scorers within bounds"
                       : "violations:" + failures,
                start);
}

// Label losses

SuiteResult LabelLossSuite(const SuiteOptions &options) {
  const auto start = Clock::now();
  nn::Rng rng(options.seed + 4);
  const std::vector<std::string> symbols = {"S", "VP", "NP", "PP"};
  auto random_label = [&] {
    std::vector<std::string> chain;
    int size = static_cast<int>(rng() % 4);
    for (int i = 0; i < size; ++i) chain.push_back(symbols[rng() % symbols.size()]);
    return CompositeLabel(chain);
  };
  auto same_multiset = [](const CompositeLabel &a, const CompositeLabel &b) {
    auto x = a.chain(), y = b.chain();
    std::sort(x.begin(), x.end());
    std::sort(y.begin(), y.end());
    return x == y;
  };
  std::string failures;
  const int pairs = 10000;
  for (int t = 0; t < pairs && failures.empty(); ++t) {
    CompositeLabel a = random_label(), b = random_label(), c = random_label();
    const double ab = LabelDelta(LabelLossKind::kHamming, a, b);
    const double ba = LabelDelta(LabelLossKind::kHamming, b, a);
    const double ac = LabelDelta(LabelLossKind::kHamming, a, c);
    const double cb = LabelDelta(LabelLossKind::kHamming, c, b);
    if (ab < 0) failures = "negative distance";
    if (ab != ba) failures = "asymmetric: " + a.ToString() + " vs " + b.ToString();
    if ((ab == 0) != same_multiset(a, b)) failures = "identity violated for " + a.ToString();
    if (LabelDelta(LabelLossKind::kHamming, a, a) != 0) failures = "d(a, a) != 0";
    if (ab > ac + cb) failures = "triangle inequality violated";
    const double z = LabelDelta(LabelLossKind::kZeroOne, a, b);
    if (z != (a == b ? 0.0 : 1.0) || z != LabelDelta(LabelLossKind::kZeroOne, b, a)) {
      failures = "zero_one wrong";
    }
  }
  const CompositeLabel s_vp{"S", "VP"}, vp{"VP"};
  const double d1 = LabelDelta(LabelLossKind::kHamming, s_vp, vp);
  const double d0 = LabelDelta(LabelLossKind::kHamming, s_vp, s_vp);
  if (d1 != 1.0 || d0 != 0.0) failures += " exact values wrong";
  return Finish("label-loss", failures.empty(),
                failures.empty()
                    ? Format("%d random label triples satisfy the metric axioms; "
                             "hamming(S-VP, VP) = %g, hamming(S-VP, S-VP) = %g",
                             pairs, d1, d0)
                    : failures,
                start);
}

// Example replay

const char *const kExampleBracketing =
    "(S (NP (PRP She)) (VP (VBZ enjoys) (S (VP (VBG playing) (NP (NN tennis))))) (. .))";

TreebankEntry ExampleEntry() { return ReadBracketed(kExampleBracketing).front(); }

TableScores ExampleScores() {
  const CompositeLabel empty, s{"S"}, np{"NP"}, vp{"VP"}, s_vp{"S", "VP"};
  TableScores table(5, {empty, s, np, vp, s_vp});
  const std::map<Span, int> labels = {{{0, 5}, 1}, {{0, 1}, 2}, {{1, 5}, 0}, {{1, 4}, 3},
                                      {{1, 2}, 0}, {{2, 4}, 4}, {{2, 3}, 0}, {{3, 4}, 2},
                                      {{4, 5}, 0}};
  const std::map<Span, int> splits = {
      {{0, 5}, 1}, {{1, 5}, 4}, {{1, 4}, 2}, {{2, 4}, 3}};
  for (const auto &[span, label] : labels) table.label_score(span, label) = 1.0;
  for (const auto &[span, k] : splits) table.split_score(span.left, k, span.right) = 1.0;
  return table;
}

SuiteResult ReplaySuite(const SuiteOptions &) {
  const auto start = Clock::now();
  TreebankEntry entry = ExampleEntry();
  TableScores table = ExampleScores();
  TopdownResult result = GreedyDecode(table);
  const std::string output = WriteBracketed(entry.sentence, result.tree);
  std::string visited;
  for (const DecisionRecord &record : result.records) {
    visited += Format("(%d,%d)", record.span.left, record.span.right);
  }
  const bool passed = output == kExampleBracketing && result.tree == entry.tree &&
                      result.tree.children()[1].children()[1].label() ==
                          CompositeLabel({"S", "VP"});
  return Finish("replay", passed, "greedy output " + output + "; visited " + visited, start);
}

// Speed

SuiteResult SpeedSuite(const SuiteOptions &options) {
  const auto start = Clock::now();
  std::vector<TreebankEntry> corpus = SyntheticCorpus(50, options.seed);
  auto [vocab, inventory] = BuildVocab(corpus);
  nn::Rng rng(options.seed + 5);
  ModelConfig config;
  config.label_scorer = LabelScorerKind::kAtomic;
  config.split_scorer = SplitScorerKind::kLeftRight;
  Model model(config, vocab, inventory, rng);
  const int n = 40;
  const int sentences = 6;
  std::vector<Sentence> inputs;
  for (int s = 0; s < sentences; ++s) inputs.push_back(RandomSentence(n, corpus, rng));

  auto measure = [&](DecoderKind decoder, bool decode_only) {
    double seconds = 0.0;
    for (const Sentence &sentence : inputs) {
      if (!decode_only) {
        const auto t0 = Clock::now();
        Parse(model, sentence, decoder);
        seconds += Since(t0);
        continue;
      }
      nn::Tape tape(false);
      SentenceEncoding encoding = Encode(tape, model, sentence, false, rng);
      const auto t0 = Clock::now();
      NeuralScores scores(tape, model, encoding);
      if (decoder == DecoderKind::kChart) {
        CkyDecode(scores);
      } else {
        GreedyDecode(scores);
      }
      seconds += Since(t0);
    }
    return sentences / seconds;
  };
  // Warm up caches and the allocator once.
  Parse(model, inputs[0], DecoderKind::kChart);
  const double chart_e2e = measure(DecoderKind::kChart, false);
  const double topdown_e2e = measure(DecoderKind::kTopdown, false);
  const double chart_decode = measure(DecoderKind::kChart, true);
  const double topdown_decode = measure(DecoderKind::kTopdown, true);
  const double ratio = topdown_e2e / chart_e2e;
  const double decode_ratio = topdown_decode / chart_decode;
  return Finish("speed", ratio >= 2.0,
                Format("n=40, hidden 250, atomic/left_right: end-to-end top-down %.2f vs chart "
                       "%.2f sent/s (ratio %.2f); decoding only %.2f vs %.2f (ratio %.2f)",
                       topdown_e2e, chart_e2e, ratio, topdown_decode, chart_decode,
                       decode_ratio),
                start);
}

// Overfitting

SuiteResult OverfitSuite(const SuiteOptions &options) {
  const auto start = Clock::now();
  std::vector<TreebankEntry> corpus = SyntheticCorpus(50, options.seed);
  std::string detail;
  bool passed = true;
  for (DecoderKind decoder : {DecoderKind::kChart, DecoderKind::kTopdown}) {
    for (LabelLossKind loss : {LabelLossKind::kZeroOne, LabelLossKind::kHamming}) {
      for (SplitScorerKind split : {SplitScorerKind::kMinimal, SplitScorerKind::kLeftRight}) {
        TrainConfig config;
        config.decoder = decoder;
        config.label_loss = loss;
        config.model.split_scorer = split;
        config.model.hidden = 150;
        config.model.dropout = 0.2;
        config.epochs = 100;
        config.seed = options.seed;
        config.stop_at_train_f1 = 0.99;
        const auto run_start = Clock::now();
        TrainResult result = Train(corpus, {}, config);
        const EpochMetrics &last = result.history.back();
        const double f1 = last.train ? last.train->f1 : 0.0;
        passed = passed && f1 >= 0.99;
        detail += Format("%s%s/%s/%s F1 %.4f after %d epochs (%.0fs)",
                         detail.empty() ? "" : "; ", ToString(decoder).c_str(),
                         ToString(loss).c_str(), ToString(split).c_str(), f1, last.epoch,
                         Since(run_start));
      }
    }
  }
  return Finish("overfit", passed, detail, start);
}

// Registry

const std::vector<std::string> &SuiteNames() {
  static const std::vector<std::string> names = {
      "chart-oracle", "oracle-fidelity", "completion-oracle", "gradients", "complexity",
      "label-loss",   "replay",         "speed",             "overfit"};
  return names;
}

const std::vector<std::string> &DefaultSuites() {
  static const std::vector<std::string> names = {"chart-oracle", "oracle-fidelity",
                                                 "completion-oracle", "gradients",
                                                 "complexity", "label-loss", "replay"};
  return names;
}

SuiteResult RunSuite(const std::string &name, const SuiteOptions &options) {
  static const std::map<std::string, std::function<SuiteResult(const SuiteOptions &)>> suites = {
      {"chart-oracle", ChartOracleSuite}, {"oracle-fidelity", OracleFidelitySuite},
      {"completion-oracle", CompletionOracleSuite}, {"gradients", GradientSuite},
      {"complexity", ComplexitySuite}, {"label-loss", LabelLossSuite},
      {"replay", ReplaySuite}, {"speed", SpeedSuite}, {"overfit", OverfitSuite}};
  auto it = suites.find(name);
  if (it == suites.end()) throw ConfigError("unknown verification suite '" + name + "'");
  return it->second(options);
}

}  // namespace spanparser::verify
