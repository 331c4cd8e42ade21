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

#include "treebank.h"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "error.h"

namespace spanparser {

void Sentence::Validate() const {
  if (words.empty()) throw ParseError("empty sentence");
  if (tags.size() != words.size()) {
    throw ParseError("sentence has " + std::to_string(words.size()) +
                     " words but " + std::to_string(tags.size()) + " tags");
  }
  if (!morphs.empty() && morphs.size() != words.size()) {
    throw ParseError("sentence has " + std::to_string(words.size()) +
                     " words but " + std::to_string(morphs.size()) +
                     " morphological tags");
  }
}

// CompositeLabel

CompositeLabel::CompositeLabel(std::vector<std::string> chain)
    : chain_(std::move(chain)) {
  for (const std::string &symbol : chain_) {
    if (symbol.empty()) throw StructureError("empty nonterminal in label chain");
  }
}

CompositeLabel CompositeLabel::Extend(const CompositeLabel &lower) const {
  std::vector<std::string> chain = chain_;
  chain.insert(chain.end(), lower.chain_.begin(), lower.chain_.end());
  return CompositeLabel(std::move(chain));
}

std::string CompositeLabel::ToString() const {
  if (chain_.empty()) return "<empty>";
  std::string out = chain_.front();
  for (size_t i = 1; i < chain_.size(); ++i) out += "-" + chain_[i];
  return out;
}

std::string CompositeLabel::Serialize() const {
  std::string out;
  for (size_t i = 0; i < chain_.size(); ++i) {
    if (i > 0) out += ' ';
    out += chain_[i];
  }
  return out;
}

CompositeLabel CompositeLabel::Deserialize(std::string_view text) {
  std::vector<std::string> chain;
  std::istringstream in{std::string(text)};
  std::string symbol;
  while (in >> symbol) chain.push_back(symbol);
  return CompositeLabel(std::move(chain));
}

LabelParts Decompose(const CompositeLabel &label) {
  const auto &chain = label.chain();
  LabelParts parts;
  if (chain.empty()) return parts;
  parts.top = chain.front();
  if (chain.size() >= 2) {
    parts.bottom = chain.back();
    parts.middle = CompositeLabel(
        std::vector<std::string>(chain.begin() + 1, chain.end() - 1));
  }
  return parts;
}

CompositeLabel Compose(const LabelParts &parts) {
  std::vector<std::string> chain;
  if (!parts.top.empty()) chain.push_back(parts.top);
  chain.insert(chain.end(), parts.middle.chain().begin(),
               parts.middle.chain().end());
  if (!parts.bottom.empty()) chain.push_back(parts.bottom);
  return CompositeLabel(std::move(chain));
}

// ParseTree

ParseTree ParseTree::Leaf(int word) {
  ParseTree leaf;
  leaf.span_ = {word, word + 1};
  return leaf;
}

ParseTree ParseTree::Node(CompositeLabel label, std::vector<ParseTree> children) {
  if (label.empty()) throw StructureError("constituent with empty label");
  if (children.empty()) throw StructureError("constituent without children");
  for (size_t i = 1; i < children.size(); ++i) {
    if (children[i].span_.left != children[i - 1].span_.right) {
      throw StructureError("children of a constituent are not contiguous");
    }
  }
  if (children.size() == 1 && !children.front().is_leaf()) {
    ParseTree child = std::move(children.front());
    child.label_ = label.Extend(child.label_);
    return child;
  }
  ParseTree node;
  node.label_ = std::move(label);
  node.span_ = {children.front().span_.left, children.back().span_.right};
  node.children_ = std::move(children);
  return node;
}

// SpanLabeling

void SpanLabeling::Set(Span span, CompositeLabel label) {
  entries_[span] = std::move(label);
}

const CompositeLabel &SpanLabeling::Get(Span span) const {
  static const CompositeLabel kEmpty;
  auto it = entries_.find(span);
  return it == entries_.end() ? kEmpty : it->second;
}

// Indexer and vocabularies

int Indexer::Add(const std::string &symbol, int64_t count) {
  int index = Reserve(symbol);
  counts_[index] += count;
  return index;
}

int Indexer::Reserve(const std::string &symbol) {
  auto it = index_.find(symbol);
  if (it != index_.end()) return it->second;
  int index = size();
  symbols_.push_back(symbol);
  counts_.push_back(0);
  index_.emplace(symbol, index);
  return index;
}

int Indexer::Find(std::string_view symbol) const {
  auto it = index_.find(std::string(symbol));
  return it == index_.end() ? -1 : it->second;
}

Vocabulary::Vocabulary() {
  for (Indexer *indexer : {&words, &tags, &morphs}) {
    indexer->Reserve(kUnknownSymbol);
    indexer->Reserve(kStartSymbol);
    indexer->Reserve(kStopSymbol);
  }
}

int64_t Vocabulary::Frequency(std::string_view word) const {
  int index = words.Find(word);
  if (index < 0) return 0;
  return words.Count(index);
}

LabelInventory::LabelInventory() {
  atomic_.push_back(CompositeLabel());
  atomic_index_[CompositeLabel()] = 0;
  tops_.push_back("");
  top_index_[""] = 0;
  middles_.push_back(CompositeLabel());
  middle_index_[CompositeLabel()] = 0;
  bottoms_.push_back("");
  bottom_index_[""] = 0;
}

void LabelInventory::Add(const CompositeLabel &label) {
  if (!atomic_index_.count(label)) {
    atomic_index_[label] = atomic_size();
    atomic_.push_back(label);
  }
  LabelParts parts = Decompose(label);
  if (!top_index_.count(parts.top)) {
    top_index_[parts.top] = top_size();
    tops_.push_back(parts.top);
  }
  if (!middle_index_.count(parts.middle)) {
    middle_index_[parts.middle] = middle_size();
    middles_.push_back(parts.middle);
  }
  if (!bottom_index_.count(parts.bottom)) {
    bottom_index_[parts.bottom] = bottom_size();
    bottoms_.push_back(parts.bottom);
  }
}

namespace {

template <typename Map, typename Key>
int LookupIndex(const Map &map, const Key &key) {
  auto it = map.find(key);
  return it == map.end() ? -1 : it->second;
}

}  // namespace

int LabelInventory::AtomicIndex(const CompositeLabel &label) const {
  return LookupIndex(atomic_index_, label);
}
int LabelInventory::TopIndex(const std::string &top) const {
  return LookupIndex(top_index_, top);
}
int LabelInventory::MiddleIndex(const CompositeLabel &middle) const {
  return LookupIndex(middle_index_, middle);
}
int LabelInventory::BottomIndex(const std::string &bottom) const {
  return LookupIndex(bottom_index_, bottom);
}

// Bracketed reader

namespace {

struct Token {
  enum Kind { kOpen, kClose, kAtom } kind;
  std::string text;
  int line;
  int column;
};

std::vector<Token> Tokenize(std::string_view text) {
  std::vector<Token> tokens;
  int line = 1, column = 1;
  size_t i = 0;
  auto advance = [&](char c) {
    if (c == '\n') {
      ++line;
      column = 1;
    } else {
      ++column;
    }
  };
  while (i < text.size()) {
    char c = text[i];
    if (c == ' ' || c == '\t' || c == '\n' || c == '\r') {
      advance(c);
      ++i;
    } else if (c == '(' || c == ')') {
      tokens.push_back({c == '(' ? Token::kOpen : Token::kClose, "", line, column});
      advance(c);
      ++i;
    } else {
      Token token{Token::kAtom, "", line, column};
      while (i < text.size() && text[i] != '(' && text[i] != ')' &&
             text[i] != ' ' && text[i] != '\t' && text[i] != '\n' &&
             text[i] != '\r') {
        token.text += text[i];
        advance(text[i]);
        ++i;
      }
      tokens.push_back(std::move(token));
    }
  }
  return tokens;
}

struct RawNode {
  std::string label;
  std::string word;  // set for preterminals
  std::vector<RawNode> children;
  int line = 0;
  int column = 0;

  bool is_preterminal() const { return !word.empty(); }
};

std::string Where(int line, int column) {
  return "line " + std::to_string(line) + ", column " + std::to_string(column);
}

class BracketParser {
 public:
  explicit BracketParser(std::vector<Token> tokens) : tokens_(std::move(tokens)) {}

  bool Done() const { return pos_ >= tokens_.size(); }

  RawNode ParseNode() {
    const Token &open = Next("'('");
    if (open.kind != Token::kOpen) {
      throw ParseError(Where(open.line, open.column) + ": expected '(' but found '" +
                       open.text + "'");
    }
    RawNode node;
    node.line = open.line;
    node.column = open.column;
    if (Peek() && Peek()->kind == Token::kAtom) node.label = Next("label").text;
    std::vector<std::string> words;
    while (true) {
      const Token *next = Peek();
      if (next == nullptr) {
        throw ParseError(Where(open.line, open.column) +
                         ": unbalanced brackets, '(' is never closed");
      }
      if (next->kind == Token::kClose) {
        ++pos_;
        break;
      }
      if (next->kind == Token::kAtom) {
        words.push_back(Next("word").text);
      } else {
        node.children.push_back(ParseNode());
      }
    }
    if (words.empty() && node.children.empty()) {
      throw ParseError(Where(open.line, open.column) + ": empty node");
    }
    if (!words.empty()) {
      if (words.size() > 1 || !node.children.empty()) {
        throw ParseError(Where(open.line, open.column) +
                         ": node mixes words and subtrees or has several words");
      }
      if (node.label.empty()) {
        throw ParseError(Where(open.line, open.column) +
                         ": word '" + words.front() + "' has no tag");
      }
      node.word = words.front();
    }
    return node;
  }

  const Token &Stray() const { return tokens_[pos_]; }

 private:
  const Token *Peek() const { return Done() ? nullptr : &tokens_[pos_]; }

  const Token &Next(const char *what) {
    if (Done()) {
      const Token &last = tokens_.back();
      throw ParseError(Where(last.line, last.column) +
                       ": unexpected end of input, expected " + what);
    }
    return tokens_[pos_++];
  }

  std::vector<Token> tokens_;
  size_t pos_ = 0;
};

bool IsWrapperLabel(const std::string &label) {
  return label.empty() || label == "TOP" || label == "ROOT";
}

ParseTree Convert(const RawNode &raw, Sentence &sentence) {
  if (raw.is_preterminal()) {
    int index = sentence.size();
    sentence.words.push_back(raw.word);
    size_t split = raw.label.find("##");
    if (split == std::string::npos) {
      sentence.tags.push_back(raw.label);
      sentence.morphs.push_back("");
    } else {
      sentence.tags.push_back(raw.label.substr(0, split));
      sentence.morphs.push_back(raw.label.substr(split + 2));
    }
    return ParseTree::Leaf(index);
  }
  if (raw.label.empty()) {
    throw ParseError(Where(raw.line, raw.column) + ": constituent has no label");
  }
  std::vector<ParseTree> children;
  children.reserve(raw.children.size());
  for (const RawNode &child : raw.children) {
    children.push_back(Convert(child, sentence));
  }
  return ParseTree::Node(CompositeLabel{raw.label}, std::move(children));
}

}  // namespace

std::vector<TreebankEntry> ReadBracketed(std::string_view text) {
  std::vector<Token> tokens = Tokenize(text);
  BracketParser parser(std::move(tokens));
  std::vector<TreebankEntry> entries;
  while (!parser.Done()) {
    if (parser.Stray().kind == Token::kClose) {
      const Token &stray = parser.Stray();
      throw ParseError(Where(stray.line, stray.column) +
                       ": unbalanced brackets, unexpected ')'");
    }
    RawNode raw = parser.ParseNode();
    while (!raw.is_preterminal() && IsWrapperLabel(raw.label) &&
           raw.children.size() == 1 && !raw.children.front().is_preterminal()) {
      RawNode inner = std::move(raw.children.front());
      raw = std::move(inner);
    }
    if (raw.is_preterminal()) {
      throw ParseError(Where(raw.line, raw.column) +
                       ": tree has no constituent above the tag level");
    }
    TreebankEntry entry;
    entry.tree = Convert(raw, entry.sentence);
    bool any_morph = std::any_of(entry.sentence.morphs.begin(),
                                 entry.sentence.morphs.end(),
                                 [](const std::string &m) { return !m.empty(); });
    if (!any_morph) entry.sentence.morphs.clear();
    entries.push_back(std::move(entry));
  }
  return entries;
}

std::vector<TreebankEntry> ReadBracketedFile(const std::string &path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  try {
    return ReadBracketed(buffer.str());
  } catch (const ParseError &e) {
    throw ParseError(path + ": " + e.what());
  }
}

namespace {

void WriteNode(const Sentence &sentence, const ParseTree &node, std::string &out) {
  if (node.is_leaf()) {
    int w = node.word();
    out += '(';
    out += sentence.tags[w];
    if (sentence.has_morph() && !sentence.morphs[w].empty()) {
      out += "##" + sentence.morphs[w];
    }
    out += ' ';
    out += sentence.words[w];
    out += ')';
    return;
  }
  for (const std::string &symbol : node.label().chain()) {
    out += '(';
    out += symbol;
    out += ' ';
  }
  for (size_t i = 0; i < node.children().size(); ++i) {
    if (i > 0) out += ' ';
    WriteNode(sentence, node.children()[i], out);
  }
  out.append(node.label().chain().size(), ')');
}

}  // namespace

std::string WriteBracketed(const Sentence &sentence, const ParseTree &tree) {
  std::string out;
  WriteNode(sentence, tree, out);
  return out;
}

Sentence ReadTaggedLine(std::string_view line) {
  Sentence sentence;
  std::istringstream in{std::string(line)};
  std::string item;
  bool any_morph = false;
  while (in >> item) {
    // Last unescaped underscore separates word and tag.
    size_t split = std::string::npos;
    for (size_t i = 0; i < item.size(); ++i) {
      if (item[i] == '\\' && i + 1 < item.size() && item[i + 1] == '_') {
        ++i;
      } else if (item[i] == '_') {
        split = i;
      }
    }
    if (split == std::string::npos || split == 0 || split + 1 == item.size()) {
      throw ParseError("token '" + item + "' is not of the form word_TAG");
    }
    std::string word;
    for (size_t i = 0; i < split; ++i) {
      if (item[i] == '\\' && i + 1 < split && item[i + 1] == '_') continue;
      word += item[i];
    }
    std::string tag = item.substr(split + 1);
    std::string morph;
    size_t morph_split = tag.find("##");
    if (morph_split != std::string::npos) {
      morph = tag.substr(morph_split + 2);
      tag = tag.substr(0, morph_split);
      any_morph = any_morph || !morph.empty();
    }
    sentence.words.push_back(word);
    sentence.tags.push_back(tag);
    sentence.morphs.push_back(morph);
  }
  if (!any_morph) sentence.morphs.clear();
  sentence.Validate();
  return sentence;
}

SpanLabeling GoldLabeling(const ParseTree &tree) {
  SpanLabeling labeling(tree.span().right);
  tree.ForEachConstituent(
      [&](const ParseTree &node) { labeling.Set(node.span(), node.label()); });
  return labeling;
}

namespace {

void Rebuild(Span span, const std::map<Span, CompositeLabel> &labels,
             const std::map<Span, int> &splits, std::vector<ParseTree> &out) {
  auto label_it = labels.find(span);
  if (label_it == labels.end()) {
    throw StructureError("no label decision for span (" + std::to_string(span.left) +
                         ", " + std::to_string(span.right) + ")");
  }
  std::vector<ParseTree> children;
  if (span.length() == 1) {
    children.push_back(ParseTree::Leaf(span.left));
  } else {
    auto split_it = splits.find(span);
    if (split_it == splits.end()) {
      throw StructureError("no split decision for span (" +
                           std::to_string(span.left) + ", " +
                           std::to_string(span.right) + ")");
    }
    int k = split_it->second;
    if (k <= span.left || k >= span.right) {
      throw StructureError("split " + std::to_string(k) + " outside span (" +
                           std::to_string(span.left) + ", " +
                           std::to_string(span.right) + ")");
    }
    Rebuild({span.left, k}, labels, splits, children);
    Rebuild({k, span.right}, labels, splits, children);
  }
  if (label_it->second.empty()) {
    for (ParseTree &child : children) out.push_back(std::move(child));
  } else {
    out.push_back(ParseTree::Node(label_it->second, std::move(children)));
  }
}

}  // namespace

ParseTree Reconstruct(int length, const std::map<Span, CompositeLabel> &labels,
                      const std::map<Span, int> &splits) {
  if (length < 1) throw StructureError("cannot reconstruct an empty sentence");
  auto root = labels.find(Span{0, length});
  if (root != labels.end() && root->second.empty()) {
    throw StructureError("root span carries the empty label");
  }
  std::vector<ParseTree> nodes;
  Rebuild({0, length}, labels, splits, nodes);
  return std::move(nodes.front());
}

namespace {

using LabeledSpan = std::pair<std::string, Span>;

std::map<LabeledSpan, int64_t> ExpandedSpans(const ParseTree &tree) {
  std::map<LabeledSpan, int64_t> spans;
  tree.ForEachConstituent([&](const ParseTree &node) {
    for (const std::string &symbol : node.label().chain()) {
      ++spans[{symbol, node.span()}];
    }
  });
  return spans;
}

}  // namespace

F1Score LabeledF1(const std::vector<ParseTree> &gold,
                  const std::vector<ParseTree> &predicted) {
  if (gold.size() != predicted.size()) {
    throw DataError("gold has " + std::to_string(gold.size()) +
                    " trees but prediction has " +
                    std::to_string(predicted.size()));
  }
  F1Score score;
  for (size_t s = 0; s < gold.size(); ++s) {
    if (gold[s].length() != predicted[s].length()) {
      throw DataError("sentence " + std::to_string(s + 1) + ": gold length " +
                      std::to_string(gold[s].length()) + " != predicted length " +
                      std::to_string(predicted[s].length()));
    }
    auto gold_spans = ExpandedSpans(gold[s]);
    auto pred_spans = ExpandedSpans(predicted[s]);
    for (const auto &[key, count] : gold_spans) {
      score.gold_count += count;
      auto it = pred_spans.find(key);
      if (it != pred_spans.end()) score.matched += std::min(count, it->second);
    }
    for (const auto &entry : pred_spans) score.predicted_count += entry.second;
  }
  if (score.predicted_count > 0) {
    score.precision = static_cast<double>(score.matched) / score.predicted_count;
  }
  if (score.gold_count > 0) {
    score.recall = static_cast<double>(score.matched) / score.gold_count;
  }
  if (score.precision + score.recall > 0) {
    score.f1 = 2 * score.precision * score.recall / (score.precision + score.recall);
  }
  return score;
}

std::pair<Vocabulary, LabelInventory> BuildVocab(
    const std::vector<TreebankEntry> &corpus) {
  if (corpus.empty()) throw DataError("cannot build a vocabulary from an empty corpus");
  Vocabulary vocab;
  LabelInventory inventory;
  for (const TreebankEntry &entry : corpus) {
    const Sentence &sentence = entry.sentence;
    for (int i = 0; i < sentence.size(); ++i) {
      vocab.words.Add(sentence.words[i]);
      vocab.tags.Add(sentence.tags[i]);
      if (sentence.has_morph()) {
        vocab.morphs.Add(sentence.morphs[i]);
        vocab.use_morph = true;
      }
    }
    entry.tree.ForEachConstituent(
        [&](const ParseTree &node) { inventory.Add(node.label()); });
  }
  return {std::move(vocab), std::move(inventory)};
}

}  // namespace spanparser
