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

#ifndef SEQCNN_ANALYSIS_HPP_
#define SEQCNN_ANALYSIS_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include "seqcnn/corpus.hpp"
#include "seqcnn/model.hpp"

namespace seqcnn {

enum class Branch { kPast, kFuture };

const char* branch_name(Branch b);

// Where a class score came from: the hidden unit with the largest
// contribution to the class dot product, and the feature map that fed it
// hardest through V.
struct AttributionTarget {
  Branch branch = Branch::kPast;
  std::size_t feature_map = 0;
  std::size_t hidden_unit = 0;
};

// Two-stage argmax: i* = argmax_i h_i * class_vec[i], then j* =
// argmax_j V[i*, j] * c_branch[j]. For the concat variant the winning half
// determines the branch; for the add variant the branch whose V c term
// contributes more to the winning pre-activation is chosen. Ties break
// toward the lowest index (and toward the past branch).
AttributionTarget top_feature_map(const Model& model, const TokenForward& fwd,
                                  std::int32_t class_index);

// The |f| consecutive window words that the pooled activation of the given
// feature map saw.
std::vector<std::int32_t> trace_ngram(const TokenForward& fwd, Branch branch,
                                      std::size_t feature_map,
                                      std::size_t filter_width);

struct NgramAttribution {
  std::string slot;   // chunk type without the B-/I- prefix
  std::string ngram;  // space-joined words, pads rendered as their surfaces
  std::size_t frequency = 0;
  Branch branch = Branch::kPast;
};

// Renders window word ids through the vocabulary (boundary pads appear as
// "sentence_begin" / "sentence_end").
std::string render_ngram(const Vocab& vocab,
                         std::span<const std::int32_t> ids);

// Frequency-ranked n-grams over the correctly classified tokens whose gold
// label has the given chunk type. One attribution per token, from the
// winning branch. Ties rank lexicographically by n-gram. Returns at most k
// entries; an absent slot yields an empty list.
std::vector<NgramAttribution> rank_ngrams(const Model& model,
                                          const Corpus& indexed_corpus,
                                          const std::string& slot_type,
                                          std::size_t k);

// Chunk types of the corpus ordered by descending gold-chunk frequency
// (ties lexicographic); used to pick default slots for analysis.
std::vector<std::string> slots_by_frequency(const Corpus& corpus);

}  // namespace seqcnn

#endif  // SEQCNN_ANALYSIS_HPP_
