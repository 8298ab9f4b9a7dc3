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

#include "seqcnn/analysis.hpp"

#include <algorithm>
#include <map>

#include "seqcnn/error.hpp"
#include "seqcnn/eval.hpp"

namespace seqcnn {

namespace {

std::size_t argmax_product(std::span<const double> a,
                           std::span<const double> b) {
  std::size_t best = 0;
  double best_value = a[0] * b[0];
  for (std::size_t i = 1; i < a.size(); ++i) {
    const double v = a[i] * b[i];
    if (v > best_value) {
      best_value = v;
      best = i;
    }
  }
  return best;
}

// argmax_j V(row, j) * c[j]
std::size_t argmax_routed(const Matrix& v, std::size_t row,
                          std::span<const double> c) {
  std::size_t best = 0;
  double best_value = v(row, 0) * c[0];
  for (std::size_t j = 1; j < c.size(); ++j) {
    const double value = v(row, j) * c[j];
    if (value > best_value) {
      best_value = value;
      best = j;
    }
  }
  return best;
}

std::string chunk_type_of(const std::string& label) {
  if (label.size() >= 2 && (label[0] == 'B' || label[0] == 'I') &&
      label[1] == '-') {
    return label.substr(2);
  }
  return {};
}

}  // namespace

const char* branch_name(Branch b) {
  return b == Branch::kPast ? "past" : "future";
}

AttributionTarget top_feature_map(const Model& model, const TokenForward& fwd,
                                  std::int32_t class_index) {
  const HyperParams& hp = model.hp();
  if (hp.variant == Variant::kWindowBaseline) {
    throw Error("n-gram attribution needs a convolution branch");
  }
  if (class_index < 0 ||
      static_cast<std::size_t>(class_index) >= model.class_count()) {
    throw IndexError("class index out of range (class O has no vectors)");
  }
  const ModelParams& p = model.params();
  const std::size_t s = hp.feature_maps;
  auto class_vec = p.class_vectors.row(static_cast<std::size_t>(class_index));

  AttributionTarget target;
  target.hidden_unit = argmax_product(fwd.hidden, class_vec);

  switch (hp.variant) {
    case Variant::kPastOnly:
      target.branch = Branch::kPast;
      target.feature_map =
          argmax_routed(p.v_past, target.hidden_unit, fwd.past.features);
      break;
    case Variant::kFutureOnly:
      target.branch = Branch::kFuture;
      target.feature_map =
          argmax_routed(p.v_future, target.hidden_unit, fwd.future.features);
      break;
    case Variant::kBiAdd: {
      // Both V c terms feed the winning unit; the larger one owns the trace.
      const double past_term =
          dot(p.v_past.row(target.hidden_unit), fwd.past.features);
      const double future_term =
          dot(p.v_future.row(target.hidden_unit), fwd.future.features);
      if (past_term >= future_term) {
        target.branch = Branch::kPast;
        target.feature_map =
            argmax_routed(p.v_past, target.hidden_unit, fwd.past.features);
      } else {
        target.branch = Branch::kFuture;
        target.feature_map = argmax_routed(p.v_future, target.hidden_unit,
                                           fwd.future.features);
      }
      break;
    }
    case Variant::kBiConcat:
      // The winning half owns the branch.
      if (target.hidden_unit < s) {
        target.branch = Branch::kPast;
        target.feature_map =
            argmax_routed(p.v_past, target.hidden_unit, fwd.past.features);
      } else {
        target.branch = Branch::kFuture;
        target.feature_map = argmax_routed(p.v_future, target.hidden_unit - s,
                                           fwd.future.features);
      }
      break;
    case Variant::kWindowBaseline:
      break;  // rejected above
  }
  return target;
}

std::vector<std::int32_t> trace_ngram(const TokenForward& fwd, Branch branch,
                                      std::size_t feature_map,
                                      std::size_t filter_width) {
  const BranchState& state =
      branch == Branch::kPast ? fwd.past : fwd.future;
  const std::vector<std::int32_t>& window =
      branch == Branch::kPast ? fwd.windows.past : fwd.windows.future;
  const std::vector<std::size_t>& trace = state.pool.trace();
  if (feature_map >= trace.size()) {
    throw IndexError("feature map index out of range");
  }
  const std::size_t start = trace[feature_map];
  if (start + filter_width > window.size()) {
    throw StateError("pool trace does not fit the window; stale trace?");
  }
  return {window.begin() + static_cast<std::ptrdiff_t>(start),
          window.begin() + static_cast<std::ptrdiff_t>(start + filter_width)};
}

std::string render_ngram(const Vocab& vocab,
                         std::span<const std::int32_t> ids) {
  std::string out;
  for (std::size_t i = 0; i < ids.size(); ++i) {
    if (i > 0) out += ' ';
    out += vocab.word(ids[i]);
  }
  return out;
}

std::vector<NgramAttribution> rank_ngrams(const Model& model,
                                          const Corpus& corpus,
                                          const std::string& slot_type,
                                          std::size_t k) {
  std::map<std::pair<std::string, Branch>, std::size_t> freq;
  for (const Sentence& sentence : corpus.sentences) {
    for (std::size_t t = 0; t < sentence.tokens.size(); ++t) {
      const Token& tok = sentence.tokens[t];
      if (tok.label_id <= 0) continue;  // O or out-of-inventory gold
      if (chunk_type_of(tok.label) != slot_type) continue;
      TokenForward fwd = model.forward(model.windows_for(sentence, t));
      if (model.predict_label(fwd.scores) != tok.label_id) continue;
      AttributionTarget target =
          top_feature_map(model, fwd, tok.label_id - 1);
      std::vector<std::int32_t> ids = trace_ngram(
          fwd, target.branch, target.feature_map, model.hp().filter_width);
      ++freq[{render_ngram(model.vocab(), ids), target.branch}];
    }
  }

  std::vector<NgramAttribution> ranked;
  ranked.reserve(freq.size());
  for (const auto& [key, count] : freq) {
    ranked.push_back({slot_type, key.first, count, key.second});
  }
  std::sort(ranked.begin(), ranked.end(),
            [](const NgramAttribution& a, const NgramAttribution& b) {
              if (a.frequency != b.frequency) return a.frequency > b.frequency;
              if (a.ngram != b.ngram) return a.ngram < b.ngram;
              return a.branch < b.branch;
            });
  if (ranked.size() > k) ranked.resize(k);
  return ranked;
}

std::vector<std::string> slots_by_frequency(const Corpus& corpus) {
  std::map<std::string, std::size_t> counts;
  for (const Sentence& sentence : corpus.sentences) {
    std::vector<std::string> labels;
    labels.reserve(sentence.tokens.size());
    for (const Token& tok : sentence.tokens) labels.push_back(tok.label);
    for (const Chunk& chunk : extract_chunks(labels)) ++counts[chunk.type];
  }
  std::vector<std::pair<std::string, std::size_t>> items(counts.begin(),
                                                         counts.end());
  std::sort(items.begin(), items.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });
  std::vector<std::string> slots;
  slots.reserve(items.size());
  for (const auto& [type, count] : items) slots.push_back(type);
  return slots;
}

}  // namespace seqcnn
