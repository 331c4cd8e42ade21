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

#include "verify/synthetic.h"

#include <algorithm>
#include <map>
#include <random>

namespace spanparser::verify {

namespace {

int Uniform(nn::Rng &rng, int low, int high) {
  return std::uniform_int_distribution<int>(low, high)(rng);
}

bool Coin(nn::Rng &rng, double p) { return std::bernoulli_distribution(p)(rng); }

CompositeLabel RandomLabel(nn::Rng &rng, const RandomTreeOptions &options) {
  const auto &symbols = options.nonterminals;
  auto pick = [&] { return symbols[Uniform(rng, 0, static_cast<int>(symbols.size()) - 1)]; };
  std::string top = pick();
  if (Coin(rng, options.chain)) {
    std::string bottom = pick();
    while (bottom == top) bottom = pick();
    return CompositeLabel{top, bottom};
  }
  return CompositeLabel{top};
}

ParseTree Build(Span span, bool root, nn::Rng &rng, const RandomTreeOptions &options) {
  if (span.length() == 1) {
    ParseTree leaf = ParseTree::Leaf(span.left);
    if (root || Coin(rng, options.word_constituent)) {
      return ParseTree::Node(RandomLabel(rng, options), {leaf});
    }
    return leaf;
  }
  const int children = Uniform(rng, 2, std::min(options.max_children, span.length()));
  // Choose children - 1 distinct interior cut points.
  std::vector<int> interior;
  for (int k = span.left + 1; k < span.right; ++k) interior.push_back(k);
  std::shuffle(interior.begin(), interior.end(), rng);
  interior.resize(children - 1);
  std::sort(interior.begin(), interior.end());
  std::vector<int> cuts = {span.left};
  cuts.insert(cuts.end(), interior.begin(), interior.end());
  cuts.push_back(span.right);
  std::vector<ParseTree> parts;
  for (size_t c = 0; c + 1 < cuts.size(); ++c) {
    parts.push_back(Build({cuts[c], cuts[c + 1]}, false, rng, options));
  }
  return ParseTree::Node(RandomLabel(rng, options), std::move(parts));
}

// Grammar for the synthetic corpus.
struct Generator {
  nn::Rng rng;
  Sentence sentence;

  explicit Generator(uint64_t seed) : rng(seed) {}

  ParseTree Word(const std::string &tag) {
    static const std::map<std::string, std::vector<std::string>> lexicon = {
        {"DT", {"the", "a", "every", "this"}},
        {"NN", {"dog", "cat", "park", "ball", "man", "girl", "tree", "house", "car", "bird"}},
        {"JJ", {"big", "red", "old", "small", "happy"}},
        {"PRP", {"she", "he", "they", "it"}},
        {"VB", {"sees", "likes", "runs", "wants", "finds", "hears", "sleeps", "keeps"}},
        {"IN", {"in", "with", "near", "under"}},
        {".", {".", "!"}},
    };
    const auto &words = lexicon.at(tag);
    sentence.words.push_back(words[Uniform(rng, 0, static_cast<int>(words.size()) - 1)]);
    sentence.tags.push_back(tag);
    return ParseTree::Leaf(sentence.size() - 1);
  }

  ParseTree NounPhrase() {
    switch (Uniform(rng, 0, 3)) {
      case 0:
        return ParseTree::Node({"NP"}, {Word("DT"), Word("NN")});
      case 1:
        return ParseTree::Node({"NP"}, {Word("DT"), Word("JJ"), Word("NN")});
      case 2:
        return ParseTree::Node({"NP"}, {Word("PRP")});
      default:
        return ParseTree::Node({"NP"}, {Word("NN")});
    }
  }

  ParseTree PrepPhrase() { return ParseTree::Node({"PP"}, {Word("IN"), NounPhrase()}); }

  ParseTree VerbPhrase(int depth) {
    int choice = Uniform(rng, 0, depth > 0 ? 3 : 4);
    switch (choice) {
      case 0:
        return ParseTree::Node({"VP"}, {Word("VB"), NounPhrase()});
      case 1:
        return ParseTree::Node({"VP"}, {Word("VB")});
      case 2:
        return ParseTree::Node({"VP"}, {Word("VB"), NounPhrase(), PrepPhrase()});
      case 3:
        return ParseTree::Node({"VP"}, {Word("VB"), PrepPhrase()});
      default: {
        // Clausal complement without a subject: collapses to S-VP.
        ParseTree verb = Word("VB");
        ParseTree inner = VerbPhrase(depth + 1);
        return ParseTree::Node({"VP"}, {verb, ParseTree::Node({"S"}, {inner})});
      }
    }
  }

  TreebankEntry Next() {
    sentence = {};
    std::vector<ParseTree> children = {NounPhrase(), VerbPhrase(0)};
    if (Coin(rng, 0.7)) children.push_back(Word("."));
    ParseTree tree = ParseTree::Node({"S"}, std::move(children));
    return {sentence, tree};
  }
};

}  // namespace

TreebankEntry RandomTree(int length, nn::Rng &rng, const RandomTreeOptions &options) {
  TreebankEntry entry;
  for (int i = 0; i < length; ++i) {
    entry.sentence.words.push_back("w" + std::to_string(i));
    entry.sentence.tags.push_back("T");
  }
  entry.tree = Build({0, length}, true, rng, options);
  return entry;
}

std::vector<TreebankEntry> SyntheticCorpus(int count, uint64_t seed) {
  Generator generator(seed);
  std::vector<TreebankEntry> corpus;
  while (static_cast<int>(corpus.size()) < count) {
    TreebankEntry entry = generator.Next();
    if (entry.sentence.size() >= 3 && entry.sentence.size() <= 10) {
      corpus.push_back(std::move(entry));
    }
  }
  return corpus;
}

TableScores RandomTableScores(int length, int labels, nn::Rng &rng) {
  static const std::vector<CompositeLabel> pool = {
      CompositeLabel{"S"}, CompositeLabel{"NP"}, CompositeLabel{"S", "VP"},
      CompositeLabel{"VP"}, CompositeLabel{"PP"}, CompositeLabel{"NP", "QP"}};
  std::vector<CompositeLabel> inventory = {CompositeLabel()};
  for (int l = 0; l < labels && l < static_cast<int>(pool.size()); ++l) {
    inventory.push_back(pool[l]);
  }
  TableScores table(length, inventory);
  std::uniform_real_distribution<double> uniform(-1.0, 1.0);
  for (int i = 0; i < length; ++i) {
    for (int j = i + 1; j <= length; ++j) {
      for (int l = 0; l < static_cast<int>(inventory.size()); ++l) {
        table.label_score({i, j}, l) = uniform(rng);
      }
      for (int k = i + 1; k < j; ++k) table.split_score(i, k, j) = uniform(rng);
    }
  }
  return table;
}

}  // namespace spanparser::verify
