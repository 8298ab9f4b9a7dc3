// Copyright 2026 The seqcnn Authors.
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

#ifndef SEQCNN_CORPUS_HPP_
#define SEQCNN_CORPUS_HPP_

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

namespace seqcnn {

struct Token {
  std::string surface;
  std::string label;
  // Filled by index_corpus. word_id is always valid afterwards (UNK
  // fallback); label_id stays -1 for labels outside the inventory.
  std::int32_t word_id = -1;
  std::int32_t label_id = -1;
};

struct Sentence {
  std::vector<Token> tokens;
};

struct Corpus {
  std::vector<Sentence> sentences;

  std::size_t token_count() const {
    std::size_t n = 0;
    for (const Sentence& s : sentences) n += s.tokens.size();
    return n;
  }
};

// Word inventory with three reserved entries allocated before any corpus
// word: begin-of-sentence padding, end-of-sentence padding, and the
// unknown-word fallback. Reserved ids are stable across save/load.
class Vocab {
 public:
  static constexpr std::int32_t kPadBegin = 0;
  static constexpr std::int32_t kPadEnd = 1;
  static constexpr std::int32_t kUnknown = 2;
  static constexpr std::int32_t kReservedCount = 3;

  static constexpr const char* kPadBeginSurface = "sentence_begin";
  static constexpr const char* kPadEndSurface = "sentence_end";
  static constexpr const char* kUnknownSurface = "<unk>";

  Vocab();

  // Returns the existing id or assigns the next one (first-occurrence order).
  std::int32_t insert(const std::string& word);

  // Maps out-of-vocabulary words to kUnknown.
  std::int32_t lookup(const std::string& word) const;

  const std::string& word(std::int32_t id) const;
  std::size_t size() const { return words_.size(); }

  void write(std::ostream& os) const;
  static Vocab read(std::istream& is);

 private:
  std::vector<std::string> words_;
  std::unordered_map<std::string, std::int32_t> ids_;
};

// Label inventory. Id 0 is always "O"; real labels follow in first-occurrence
// order, so class column c of the scorer corresponds to label id c + 1.
class LabelSet {
 public:
  static constexpr std::int32_t kOutsideId = 0;
  static constexpr const char* kOutsideLabel = "O";

  LabelSet();

  std::int32_t insert(const std::string& label);
  std::int32_t lookup(const std::string& label) const;  // -1 when unknown
  const std::string& label(std::int32_t id) const;
  std::size_t size() const { return labels_.size(); }
  // Number of real (non-O) classes.
  std::size_t class_count() const { return labels_.size() - 1; }

  void write(std::ostream& os) const;
  static LabelSet read(std::istream& is);

 private:
  std::vector<std::string> labels_;
  std::unordered_map<std::string, std::int32_t> ids_;
};

// Per-token model input: the past and future convolution windows plus the
// surrounding-context window, all as word ids with boundary padding.
//
//   past:        positions t-n .. t+m   (length n+m+1, ends at w_t plus m)
//   future:      positions t-m .. t+n   (length n+m+1, natural order)
//   surrounding: positions t-cs .. t+cs (length 2*cs+1, centered on w_t)
struct WindowInputs {
  std::vector<std::int32_t> past;
  std::vector<std::int32_t> future;
  std::vector<std::int32_t> surrounding;
};

// Reads a two-column whitespace-separated file: word first, BIO label last,
// blank lines separating sentences (the CoNLL-2000 chunking layout). Lines
// with a single field raise ParseError with the line number; a file with no
// tokens raises Error.
Corpus load_conll(const std::string& path);

// Writes the corpus back in the same two-column format.
void save_conll(const Corpus& corpus, const std::string& path);

// Builds the word inventory in first-occurrence order. Words occurring fewer
// than min_count times are dropped and will index to UNK, which gives the
// UNK embedding training exposure when min_count > 1.
Vocab build_vocab(const Corpus& corpus, std::size_t min_count = 1);

// Label inventory in first-occurrence order ("O" forced to id 0).
LabelSet build_labels(const Corpus& corpus);

// Fills word_id / label_id on every token. label_id is -1 for labels not in
// the inventory (possible in held-out data).
Corpus index_corpus(Corpus corpus, const Vocab& vocab, const LabelSet& labels);

WindowInputs make_windows(const Sentence& sentence, std::size_t t,
                          std::size_t n, std::size_t m, std::size_t cs);

}  // namespace seqcnn

#endif  // SEQCNN_CORPUS_HPP_
