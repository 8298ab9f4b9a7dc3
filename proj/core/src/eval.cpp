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

#include "seqcnn/eval.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "seqcnn/error.hpp"

namespace seqcnn {

namespace {

struct Tag {
  char prefix = 'O';  // 'B', 'I' or 'O'
  std::string type;
};

Tag parse_tag(const std::string& label, std::size_t position) {
  if (label == "O") return {};
  if (label.size() >= 2 && (label[0] == 'B' || label[0] == 'I') &&
      label[1] == '-') {
    return {label[0], label.substr(2)};
  }
  throw ParseError("label is not O, B-<type> or I-<type>: '" + label + "'",
                   position + 1);
}

double pct(std::size_t num, std::size_t den) {
  return den == 0 ? 0.0 : 100.0 * static_cast<double>(num) /
                              static_cast<double>(den);
}

double harmonic(double p, double r) {
  return p + r == 0.0 ? 0.0 : 2.0 * p * r / (p + r);
}

}  // namespace

std::vector<Chunk> extract_chunks(std::span<const std::string> labels) {
  std::vector<Chunk> chunks;
  Tag prev;
  bool open = false;
  std::size_t start = 0;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    Tag tag = parse_tag(labels[i], i);
    const bool continues =
        tag.prefix == 'I' && prev.prefix != 'O' && prev.type == tag.type;
    if (open && !continues) {
      chunks.push_back({prev.type, start, i - 1});
      open = false;
    }
    if (tag.prefix != 'O' && !continues) {
      open = true;
      start = i;
    }
    prev = tag;
  }
  if (open) chunks.push_back({prev.type, start, labels.size() - 1});
  return chunks;
}

double ChunkF1Report::precision_of(const TypeCounts& c) {
  return pct(c.correct, c.predicted);
}
double ChunkF1Report::recall_of(const TypeCounts& c) {
  return pct(c.correct, c.gold);
}
double ChunkF1Report::f1_of(const TypeCounts& c) {
  return harmonic(precision_of(c), recall_of(c));
}

double ChunkF1Report::precision() const {
  return pct(correct_chunks, predicted_chunks);
}
double ChunkF1Report::recall() const { return pct(correct_chunks, gold_chunks); }
double ChunkF1Report::f1() const { return harmonic(precision(), recall()); }
double ChunkF1Report::token_accuracy() const {
  return pct(correct_tokens, tokens);
}

ChunkF1Report chunk_f1(std::span<const std::vector<std::string>> gold,
                       std::span<const std::vector<std::string>> predicted) {
  if (gold.size() != predicted.size()) {
    throw DimensionError("gold and predicted sentence counts differ");
  }
  ChunkF1Report report;
  for (std::size_t s = 0; s < gold.size(); ++s) {
    if (gold[s].size() != predicted[s].size()) {
      throw DimensionError("label sequences differ in length at sentence " +
                           std::to_string(s));
    }
    report.tokens += gold[s].size();
    for (std::size_t i = 0; i < gold[s].size(); ++i) {
      if (gold[s][i] == predicted[s][i]) ++report.correct_tokens;
    }
    std::vector<Chunk> gold_chunks = extract_chunks(gold[s]);
    std::vector<Chunk> pred_chunks = extract_chunks(predicted[s]);
    for (const Chunk& c : gold_chunks) ++report.per_type[c.type].gold;
    for (const Chunk& c : pred_chunks) ++report.per_type[c.type].predicted;
    report.gold_chunks += gold_chunks.size();
    report.predicted_chunks += pred_chunks.size();
    // Both lists are sorted by begin position and non-overlapping.
    std::size_t gi = 0;
    std::size_t pi = 0;
    while (gi < gold_chunks.size() && pi < pred_chunks.size()) {
      if (gold_chunks[gi].begin < pred_chunks[pi].begin) {
        ++gi;
      } else if (pred_chunks[pi].begin < gold_chunks[gi].begin) {
        ++pi;
      } else {
        if (gold_chunks[gi] == pred_chunks[pi]) {
          ++report.correct_chunks;
          ++report.per_type[gold_chunks[gi].type].correct;
        }
        ++gi;
        ++pi;
      }
    }
  }
  return report;
}

std::string format_report(const ChunkF1Report& report) {
  std::ostringstream out;
  char buf[256];
  std::snprintf(buf, sizeof(buf),
                "processed %zu tokens with %zu phrases; found: %zu phrases; "
                "correct: %zu.\n",
                report.tokens, report.gold_chunks, report.predicted_chunks,
                report.correct_chunks);
  out << buf;
  std::snprintf(buf, sizeof(buf),
                "accuracy: %6.2f%%; precision: %6.2f%%; recall: %6.2f%%; "
                "FB1: %6.2f\n",
                report.token_accuracy(), report.precision(), report.recall(),
                report.f1());
  out << buf;
  for (const auto& [type, counts] : report.per_type) {
    std::snprintf(buf, sizeof(buf),
                  "%17s: precision: %6.2f%%; recall: %6.2f%%; FB1: %6.2f  %zu\n",
                  type.c_str(), ChunkF1Report::precision_of(counts),
                  ChunkF1Report::recall_of(counts),
                  ChunkF1Report::f1_of(counts), counts.predicted);
    out << buf;
  }
  return out.str();
}

std::string report_csv(const ChunkF1Report& report) {
  std::ostringstream out;
  char buf[256];
  out << "type,gold,predicted,correct,precision,recall,f1\n";
  std::snprintf(buf, sizeof(buf), "ALL,%zu,%zu,%zu,%.2f,%.2f,%.2f\n",
                report.gold_chunks, report.predicted_chunks,
                report.correct_chunks, report.precision(), report.recall(),
                report.f1());
  out << buf;
  for (const auto& [type, counts] : report.per_type) {
    std::snprintf(buf, sizeof(buf), "%s,%zu,%zu,%zu,%.2f,%.2f,%.2f\n",
                  type.c_str(), counts.gold, counts.predicted, counts.correct,
                  ChunkF1Report::precision_of(counts),
                  ChunkF1Report::recall_of(counts),
                  ChunkF1Report::f1_of(counts));
    out << buf;
  }
  return out.str();
}

std::vector<std::vector<TaggedToken>> read_tagged(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open tagged file: " + path);
  std::vector<std::vector<TaggedToken>> sentences;
  std::vector<TaggedToken> current;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream ss(line);
    std::vector<std::string> fields;
    std::string field;
    while (ss >> field) fields.push_back(std::move(field));
    if (fields.empty()) {
      if (!current.empty()) {
        sentences.push_back(std::move(current));
        current.clear();
      }
      continue;
    }
    if (fields.size() < 3) {
      throw ParseError("expected word, gold and predicted label", line_no);
    }
    TaggedToken tok;
    tok.word = std::move(fields.front());
    tok.gold = std::move(fields[fields.size() - 2]);
    tok.predicted = std::move(fields.back());
    current.push_back(std::move(tok));
  }
  if (!current.empty()) sentences.push_back(std::move(current));
  return sentences;
}

ChunkF1Report chunk_f1_file(const std::string& path) {
  std::vector<std::vector<TaggedToken>> sentences = read_tagged(path);
  std::vector<std::vector<std::string>> gold(sentences.size());
  std::vector<std::vector<std::string>> predicted(sentences.size());
  for (std::size_t s = 0; s < sentences.size(); ++s) {
    gold[s].reserve(sentences[s].size());
    predicted[s].reserve(sentences[s].size());
    for (const TaggedToken& tok : sentences[s]) {
      gold[s].push_back(tok.gold);
      predicted[s].push_back(tok.predicted);
    }
  }
  return chunk_f1(gold, predicted);
}

}  // namespace seqcnn
