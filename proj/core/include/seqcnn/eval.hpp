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

#ifndef SEQCNN_EVAL_HPP_
#define SEQCNN_EVAL_HPP_

#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <vector>

namespace seqcnn {

// Maximal labeled span derived from a BIO label sequence; end is inclusive.
struct Chunk {
  std::string type;
  std::size_t begin = 0;
  std::size_t end = 0;

  bool operator==(const Chunk&) const = default;
};

// Splits a BIO sequence into chunks with the CoNLL-2000 scorer's semantics:
// a chunk starts at B-X, or at I-X when the previous token is not B-X/I-X of
// the same type (lenient start); it ends before O, a new B, or a type
// change. Labels must be "O", "B-<type>" or "I-<type>"; anything else is a
// ParseError.
std::vector<Chunk> extract_chunks(std::span<const std::string> labels);

struct TypeCounts {
  std::size_t gold = 0;
  std::size_t predicted = 0;
  std::size_t correct = 0;
};

struct ChunkF1Report {
  std::size_t gold_chunks = 0;
  std::size_t predicted_chunks = 0;
  std::size_t correct_chunks = 0;
  std::size_t tokens = 0;
  std::size_t correct_tokens = 0;  // token accuracy is a diagnostic only
  std::map<std::string, TypeCounts> per_type;

  double precision() const;  // percent
  double recall() const;     // percent
  double f1() const;         // percent, 2PR/(P+R)
  double token_accuracy() const;

  static double precision_of(const TypeCounts& c);
  static double recall_of(const TypeCounts& c);
  static double f1_of(const TypeCounts& c);
};

// Exact-match (type, begin, end) chunk comparison over aligned per-sentence
// label sequences. Throws on sentence count or length mismatch.
ChunkF1Report chunk_f1(std::span<const std::vector<std::string>> gold,
                       std::span<const std::vector<std::string>> predicted);

// conlleval-style text report: the processed/accuracy header plus one line
// per chunk type sorted by name.
std::string format_report(const ChunkF1Report& report);

// Machine-readable rows: type,gold,predicted,correct,precision,recall,f1
// with an ALL summary row first.
std::string report_csv(const ChunkF1Report& report);

struct TaggedToken {
  std::string word;
  std::string gold;
  std::string predicted;
};

// Reads the three-column evaluation format (word, gold, predicted; extra
// middle columns are ignored, the last two are the labels).
std::vector<std::vector<TaggedToken>> read_tagged(const std::string& path);

ChunkF1Report chunk_f1_file(const std::string& path);

}  // namespace seqcnn

#endif  // SEQCNN_EVAL_HPP_
