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

#include "seqcnn/corpus.hpp"

#include <fstream>
#include <sstream>

#include "binary_io.hpp"
#include "seqcnn/error.hpp"

namespace seqcnn {

namespace {

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> fields;
  std::istringstream ss(line);
  std::string field;
  while (ss >> field) fields.push_back(std::move(field));
  return fields;
}

}  // namespace

Vocab::Vocab() {
  words_ = {kPadBeginSurface, kPadEndSurface, kUnknownSurface};
  for (std::int32_t id = 0; id < kReservedCount; ++id) {
    ids_.emplace(words_[id], id);
  }
}

std::int32_t Vocab::insert(const std::string& word) {
  auto it = ids_.find(word);
  if (it != ids_.end()) return it->second;
  const auto id = static_cast<std::int32_t>(words_.size());
  words_.push_back(word);
  ids_.emplace(word, id);
  return id;
}

std::int32_t Vocab::lookup(const std::string& word) const {
  auto it = ids_.find(word);
  return it == ids_.end() ? kUnknown : it->second;
}

const std::string& Vocab::word(std::int32_t id) const {
  if (id < 0 || static_cast<std::size_t>(id) >= words_.size()) {
    throw IndexError("vocab id out of range: " + std::to_string(id));
  }
  return words_[id];
}

void Vocab::write(std::ostream& os) const {
  io::write_u64(os, words_.size());
  for (const std::string& w : words_) io::write_string(os, w);
}

Vocab Vocab::read(std::istream& is) {
  Vocab v;
  const std::uint64_t count = io::read_u64(is);
  if (count < kReservedCount) throw IoError("vocab: missing reserved entries");
  for (std::uint64_t i = 0; i < count; ++i) {
    std::string w = io::read_string(is);
    if (i < kReservedCount) {
      if (w != v.words_[i]) throw IoError("vocab: reserved entry mismatch");
    } else {
      v.insert(w);
    }
  }
  return v;
}

LabelSet::LabelSet() {
  labels_ = {kOutsideLabel};
  ids_.emplace(kOutsideLabel, kOutsideId);
}

std::int32_t LabelSet::insert(const std::string& label) {
  auto it = ids_.find(label);
  if (it != ids_.end()) return it->second;
  const auto id = static_cast<std::int32_t>(labels_.size());
  labels_.push_back(label);
  ids_.emplace(label, id);
  return id;
}

std::int32_t LabelSet::lookup(const std::string& label) const {
  auto it = ids_.find(label);
  return it == ids_.end() ? -1 : it->second;
}

const std::string& LabelSet::label(std::int32_t id) const {
  if (id < 0 || static_cast<std::size_t>(id) >= labels_.size()) {
    throw IndexError("label id out of range: " + std::to_string(id));
  }
  return labels_[id];
}

void LabelSet::write(std::ostream& os) const {
  io::write_u64(os, labels_.size());
  for (const std::string& l : labels_) io::write_string(os, l);
}

LabelSet LabelSet::read(std::istream& is) {
  LabelSet set;
  const std::uint64_t count = io::read_u64(is);
  if (count < 1) throw IoError("label set: empty");
  for (std::uint64_t i = 0; i < count; ++i) {
    std::string l = io::read_string(is);
    if (i == 0) {
      if (l != kOutsideLabel) throw IoError("label set: first label is not O");
    } else {
      set.insert(l);
    }
  }
  return set;
}

Corpus load_conll(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open corpus file: " + path);

  Corpus corpus;
  Sentence current;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::vector<std::string> fields = split_fields(line);
    if (fields.empty()) {
      if (!current.tokens.empty()) {
        corpus.sentences.push_back(std::move(current));
        current = Sentence{};
      }
      continue;
    }
    if (fields.size() < 2) {
      throw ParseError("expected word and label, got '" + line + "'", line_no);
    }
    Token tok;
    tok.surface = std::move(fields.front());
    tok.label = std::move(fields.back());
    current.tokens.push_back(std::move(tok));
  }
  if (!current.tokens.empty()) corpus.sentences.push_back(std::move(current));
  if (corpus.sentences.empty()) {
    throw Error("corpus file has no sentences: " + path);
  }
  return corpus;
}

void save_conll(const Corpus& corpus, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write corpus file: " + path);
  for (const Sentence& sentence : corpus.sentences) {
    for (const Token& tok : sentence.tokens) {
      out << tok.surface << ' ' << tok.label << '\n';
    }
    out << '\n';
  }
}

Vocab build_vocab(const Corpus& corpus, std::size_t min_count) {
  std::unordered_map<std::string, std::size_t> counts;
  for (const Sentence& sentence : corpus.sentences) {
    for (const Token& tok : sentence.tokens) ++counts[tok.surface];
  }
  Vocab vocab;
  for (const Sentence& sentence : corpus.sentences) {
    for (const Token& tok : sentence.tokens) {
      if (counts[tok.surface] >= min_count) vocab.insert(tok.surface);
    }
  }
  return vocab;
}

LabelSet build_labels(const Corpus& corpus) {
  LabelSet labels;
  for (const Sentence& sentence : corpus.sentences) {
    for (const Token& tok : sentence.tokens) labels.insert(tok.label);
  }
  return labels;
}

Corpus index_corpus(Corpus corpus, const Vocab& vocab,
                    const LabelSet& labels) {
  for (Sentence& sentence : corpus.sentences) {
    for (Token& tok : sentence.tokens) {
      tok.word_id = vocab.lookup(tok.surface);
      tok.label_id = labels.lookup(tok.label);
    }
  }
  return corpus;
}

WindowInputs make_windows(const Sentence& sentence, std::size_t t,
                          std::size_t n, std::size_t m, std::size_t cs) {
  const std::size_t len = sentence.tokens.size();
  if (t >= len) {
    throw IndexError("token position " + std::to_string(t) +
                     " out of range for sentence of length " +
                     std::to_string(len));
  }
  auto id_at = [&](std::ptrdiff_t pos) -> std::int32_t {
    if (pos < 0) return Vocab::kPadBegin;
    if (pos >= static_cast<std::ptrdiff_t>(len)) return Vocab::kPadEnd;
    return sentence.tokens[static_cast<std::size_t>(pos)].word_id;
  };
  const auto tt = static_cast<std::ptrdiff_t>(t);
  const auto sn = static_cast<std::ptrdiff_t>(n);
  const auto sm = static_cast<std::ptrdiff_t>(m);
  const auto scs = static_cast<std::ptrdiff_t>(cs);

  WindowInputs w;
  w.past.reserve(n + m + 1);
  for (std::ptrdiff_t pos = tt - sn; pos <= tt + sm; ++pos) {
    w.past.push_back(id_at(pos));
  }
  w.future.reserve(n + m + 1);
  for (std::ptrdiff_t pos = tt - sm; pos <= tt + sn; ++pos) {
    w.future.push_back(id_at(pos));
  }
  w.surrounding.reserve(2 * cs + 1);
  for (std::ptrdiff_t pos = tt - scs; pos <= tt + scs; ++pos) {
    w.surrounding.push_back(id_at(pos));
  }
  return w;
}

}  // namespace seqcnn
