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

#ifndef SPANPARSER_TREEBANK_H_
#define SPANPARSER_TREEBANK_H_

#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace spanparser {

// A fencepost span (left, right) with left < right. An n-word sentence has
// fenceposts 0..n.
struct Span {
  int left = 0;
  int right = 0;

  int length() const { return right - left; }
  bool contains(Span other) const {
    return left <= other.left && other.right <= right;
  }
  auto operator<=>(const Span &) const = default;
};

// A tagged input sentence. Morphological tags are optional; when present
// they align one-to-one with the words.
struct Sentence {
  std::vector<std::string> words;
  std::vector<std::string> tags;
  std::vector<std::string> morphs;

  int size() const { return static_cast<int>(words.size()); }
  bool has_morph() const { return !morphs.empty(); }

  // Throws ParseError when the sentence is empty or the lists disagree in
  // length.
  void Validate() const;
};

// A (possibly empty) chain of nonterminals, top to bottom. The empty chain is
// the empty label used for spans that are not constituents.
class CompositeLabel {
 public:
  CompositeLabel() = default;
  explicit CompositeLabel(std::vector<std::string> chain);
  CompositeLabel(std::initializer_list<std::string> chain)
      : CompositeLabel(std::vector<std::string>(chain)) {}

  bool empty() const { return chain_.empty(); }
  int size() const { return static_cast<int>(chain_.size()); }
  const std::vector<std::string> &chain() const { return chain_; }

  // Appends the nonterminals of `lower` below this chain.
  CompositeLabel Extend(const CompositeLabel &lower) const;

  // Human-readable form: "S-VP", or "<empty>" for the empty label.
  std::string ToString() const;

  // Space-separated form used in model files; the empty label is "".
  std::string Serialize() const;
  static CompositeLabel Deserialize(std::string_view text);

  auto operator<=>(const CompositeLabel &) const = default;
  bool operator==(const CompositeLabel &) const = default;

 private:
  std::vector<std::string> chain_;
};

// Top / middle chain / bottom decomposition of a composite label:
//   empty     -> (empty, empty, empty)
//   X         -> (X, empty, empty)
//   X-Y       -> (X, empty, Y)
//   X-Z..Z-Y  -> (X, Z..Z, Y)
struct LabelParts {
  std::string top;
  CompositeLabel middle;
  std::string bottom;

  bool operator==(const LabelParts &) const = default;
};

LabelParts Decompose(const CompositeLabel &label);

// Concatenates the parts, omitting empty ones.
CompositeLabel Compose(const LabelParts &parts);

// An n-ary constituency tree in collapsed form. Internal nodes carry a
// nonempty CompositeLabel; leaves are word positions. A node never has a
// single non-leaf child: such unary chains are folded into the label.
class ParseTree {
 public:
  static ParseTree Leaf(int word);

  // Builds an internal node, computing its span from the children. Throws
  // StructureError if the children are not contiguous or the label is empty.
  // A single internal child is merged into this node's label chain.
  static ParseTree Node(CompositeLabel label, std::vector<ParseTree> children);

  bool is_leaf() const { return children_.empty(); }
  int word() const { return span_.left; }
  const CompositeLabel &label() const { return label_; }
  Span span() const { return span_; }
  const std::vector<ParseTree> &children() const { return children_; }

  // Number of words under the root.
  int length() const { return span_.right - span_.left; }

  // Visits every internal node in preorder.
  template <typename Fn>
  void ForEachConstituent(Fn &&fn) const {
    if (is_leaf()) return;
    fn(*this);
    for (const ParseTree &child : children_) child.ForEachConstituent(fn);
  }

  bool operator==(const ParseTree &) const = default;

 private:
  CompositeLabel label_;
  Span span_;
  std::vector<ParseTree> children_;
};

// A map from spans to labels; spans not stored are implicitly empty.
class SpanLabeling {
 public:
  SpanLabeling() = default;
  explicit SpanLabeling(int length) : length_(length) {}

  int length() const { return length_; }
  void Set(Span span, CompositeLabel label);
  const CompositeLabel &Get(Span span) const;
  bool Contains(Span span) const { return entries_.count(span) > 0; }
  const std::map<Span, CompositeLabel> &entries() const { return entries_; }

 private:
  int length_ = 0;
  std::map<Span, CompositeLabel> entries_;
};

// Indexed string set with occurrence counts.
class Indexer {
 public:
  int Add(const std::string &symbol, int64_t count = 1);
  // Registers a symbol without counting an occurrence.
  int Reserve(const std::string &symbol);
  int Find(std::string_view symbol) const;
  const std::string &Symbol(int index) const { return symbols_[index]; }
  int64_t Count(int index) const { return counts_[index]; }
  int size() const { return static_cast<int>(symbols_.size()); }

 private:
  std::vector<std::string> symbols_;
  std::vector<int64_t> counts_;
  std::unordered_map<std::string, int> index_;
};

// Word, tag and morphological-tag vocabularies. Every indexer starts with the
// reserved symbols <UNK>, <START>, <STOP> at indices 0, 1, 2.
struct Vocabulary {
  static constexpr int kUnknown = 0;
  static constexpr int kStart = 1;
  static constexpr int kStop = 2;
  static constexpr const char *kUnknownSymbol = "<UNK>";
  static constexpr const char *kStartSymbol = "<START>";
  static constexpr const char *kStopSymbol = "<STOP>";

  Indexer words;
  Indexer tags;
  Indexer morphs;
  bool use_morph = false;

  Vocabulary();

  // Training frequency of a word, 0 if unseen.
  int64_t Frequency(std::string_view word) const;
};

// Atomic labels and label part inventories. Index 0 is always the empty label
// or the empty part.
class LabelInventory {
 public:
  LabelInventory();

  void Add(const CompositeLabel &label);

  int atomic_size() const { return static_cast<int>(atomic_.size()); }
  int top_size() const { return static_cast<int>(tops_.size()); }
  int middle_size() const { return static_cast<int>(middles_.size()); }
  int bottom_size() const { return static_cast<int>(bottoms_.size()); }

  const CompositeLabel &atomic(int index) const { return atomic_[index]; }
  const std::string &top(int index) const { return tops_[index]; }
  const CompositeLabel &middle(int index) const { return middles_[index]; }
  const std::string &bottom(int index) const { return bottoms_[index]; }

  // -1 when absent.
  int AtomicIndex(const CompositeLabel &label) const;
  int TopIndex(const std::string &top) const;
  int MiddleIndex(const CompositeLabel &middle) const;
  int BottomIndex(const std::string &bottom) const;

 private:
  std::vector<CompositeLabel> atomic_;
  std::map<CompositeLabel, int> atomic_index_;
  std::vector<std::string> tops_;
  std::map<std::string, int> top_index_;
  std::vector<CompositeLabel> middles_;
  std::map<CompositeLabel, int> middle_index_;
  std::vector<std::string> bottoms_;
  std::map<std::string, int> bottom_index_;
};

struct TreebankEntry {
  Sentence sentence;
  ParseTree tree;
};

// Reads one or more PTB-style bracketed trees. A TOP/ROOT/unlabeled wrapper
// around a single tree is stripped. Preterminal tags of the form TAG##MORPH
// carry a morphological tag. Throws ParseError with line and column.
std::vector<TreebankEntry> ReadBracketed(std::string_view text);
std::vector<TreebankEntry> ReadBracketedFile(const std::string &path);

// Single-line bracketed form of a tree, e.g. "(S (NP (PRP She)) ...)".
std::string WriteBracketed(const Sentence &sentence, const ParseTree &tree);

// Reads "word_TAG word_TAG ..." (literal underscores in words escaped as
// "\_"). A tag may carry a morphological tag as TAG##MORPH.
Sentence ReadTaggedLine(std::string_view line);

// Collapsed gold labels: one entry per constituent, unary chains ordered top
// to bottom. POS tags never appear.
SpanLabeling GoldLabeling(const ParseTree &tree);

// Rebuilds a tree from top-down partitioning decisions. Empty-labeled spans
// are spliced out. Throws StructureError when a visited span lacks a label or
// split, or when the root label is empty.
ParseTree Reconstruct(int length, const std::map<Span, CompositeLabel> &labels,
                      const std::map<Span, int> &splits);

struct F1Score {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  int64_t matched = 0;
  int64_t gold_count = 0;
  int64_t predicted_count = 0;
};

// Corpus-level labeled bracketing scores with unary chains expanded into
// individual labeled spans. The root span is included.
F1Score LabeledF1(const std::vector<ParseTree> &gold,
                  const std::vector<ParseTree> &predicted);

// Builds vocabularies and the label inventory from a training corpus.
std::pair<Vocabulary, LabelInventory> BuildVocab(
    const std::vector<TreebankEntry> &corpus);

}  // namespace spanparser

#endif  // SPANPARSER_TREEBANK_H_
