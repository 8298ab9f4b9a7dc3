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

#ifndef SEQCNN_MODEL_HPP_
#define SEQCNN_MODEL_HPP_

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "seqcnn/corpus.hpp"
#include "seqcnn/matrix.hpp"
#include "seqcnn/nn_math.hpp"

namespace seqcnn {

// Architecture selector.
//
//   kPastOnly    h = sig(U e + Vp cp)
//   kFutureOnly  h = sig(U e + Vf cf)
//   kBiAdd       h = sig(U e + Vp cp + Vf cf)
//   kBiConcat    h = [sig(U e + Vp cp), sig(U e + Vf cf)]
//   kWindowBaseline  feed-forward over the surrounding window only:
//                    h = sig(W1 e + b1)
//
// cp / cf are the max-pooled convolution features of the past and future
// windows; e is the concatenated embedding of the surrounding window.
enum class Variant {
  kPastOnly,
  kFutureOnly,
  kBiAdd,
  kBiConcat,
  kWindowBaseline,
};

const char* variant_name(Variant v);

struct HyperParams {
  std::size_t emb_dim = 50;        // d
  std::size_t feature_maps = 100;  // s
  std::size_t filter_width = 5;    // |f|
  std::size_t context_len = 9;     // n, past or future
  std::size_t pad_len = 2;         // m, boundary padding inside a window
  std::size_t surround = 3;        // cs, neighbours on each side of w_t
  Variant variant = Variant::kBiConcat;
  // Drops the U e(w_t) term entirely (the "no current word" ablation).
  bool use_current_word = true;

  double gamma = 2.0;        // ranking loss scale
  double margin_pos = 2.5;   // m+
  double margin_neg = 0.5;   // m-
  double l2_weight = 1e-7;
  double lr0 = 0.02;

  // Hidden width: 2s for the concat variant, s otherwise.
  std::size_t hidden_dim() const;
  std::size_t window_len() const { return context_len + pad_len + 1; }
  std::size_t surround_len() const { return 2 * surround + 1; }

  bool uses_past() const;
  bool uses_future() const;

  // Throws ConfigError on out-of-range values (counts must be >= 1,
  // context_len >= filter_width - pad_len, gamma > 0).
  void validate() const;
};

struct ModelParams {
  Matrix embeddings;  // |V| x d

  std::vector<Matrix> past_filters;    // s matrices, each |f| x d
  std::vector<double> past_bias;       // s
  std::vector<Matrix> future_filters;  // s matrices, each |f| x d
  std::vector<double> future_bias;     // s

  Matrix u;         // s x d(2cs+1)
  Matrix v_past;    // s x s
  Matrix v_future;  // s x s

  // One row per real class (class O has no row; it is realized purely by the
  // all-scores-negative prediction rule). score_c = <class_vectors.row(c), h>.
  Matrix class_vectors;  // C x hidden_dim

  Matrix w1;               // baseline hidden layer, s x d(2cs+1)
  std::vector<double> b1;  // s
};

enum class ParamKind { kWeight, kBias, kEmbedding };

struct TensorRef {
  std::string name;
  std::span<double> values;
  ParamKind kind;
};

// Every live tensor of the variant, in a fixed order shared with Gradients.
std::vector<TensorRef> tensor_refs(ModelParams& params, const HyperParams& hp);

// Per-token forward state kept for the backward pass and for the max-pooling
// n-gram traceback.
struct BranchState {
  nn::ConvOp conv;
  nn::MaxPoolOp pool;
  std::vector<double> features;  // pooled values (cp or cf)
};

struct TokenForward {
  WindowInputs windows;
  BranchState past;
  BranchState future;
  std::vector<double> surround_input;  // e(w_t), concatenated embeddings
  // Post-sigmoid hidden layer; for kBiConcat the first s entries are the
  // past half and the last s the future half.
  std::vector<double> hidden;
  std::vector<double> scores;  // one per real class
};

class Model;

// Gradient buffers shaped like the model's live tensors. Embedding gradients
// track touched rows so per-example clearing stays cheap.
class Gradients {
 public:
  explicit Gradients(const Model& model);

  Matrix embeddings;
  std::vector<Matrix> past_filters;
  std::vector<double> past_bias;
  std::vector<Matrix> future_filters;
  std::vector<double> future_bias;
  Matrix u;
  Matrix v_past;
  Matrix v_future;
  Matrix class_vectors;
  Matrix w1;
  std::vector<double> b1;

  void add_embedding_row(std::int32_t word_id, std::span<const double> g);
  const std::vector<std::int32_t>& touched_rows() const { return touched_; }
  // Forgets the touched-row bookkeeping; the caller must have zeroed the
  // rows themselves (apply_update does both in one pass).
  void reset_touched();
  void clear();

 private:
  std::vector<std::int32_t> touched_;
  std::vector<char> touched_flag_;
};

std::vector<TensorRef> tensor_refs(Gradients& grads, const HyperParams& hp);

// The bi-directional sequential CNN scorer (plus the window feed-forward
// baseline), bundled with its vocabulary and label inventory.
class Model {
 public:
  // Initializes weights uniformly in [-0.1, 0.1] from the seed; biases and
  // the UNK embedding row start at zero.
  Model(HyperParams hp, Vocab vocab, LabelSet labels, std::uint64_t seed);

  TokenForward forward(const WindowInputs& windows) const;

  // dscores has one entry per real class. Parameter gradients accumulate
  // into grads; embedding gradients are scattered to the touched rows.
  void backward(const TokenForward& fwd, std::span<const double> dscores,
                Gradients& grads) const;

  // Label id for a score vector: O (id 0) unless some real class has a
  // positive score, otherwise argmax with ties to the lowest class id.
  std::int32_t predict_label(std::span<const double> scores) const;

  // Convenience: windows for token t of an indexed sentence, per this
  // model's hyperparameters.
  WindowInputs windows_for(const Sentence& sentence, std::size_t t) const;

  void save(const std::string& path) const;
  static Model load(const std::string& path);

  const HyperParams& hp() const { return hp_; }
  const Vocab& vocab() const { return vocab_; }
  const LabelSet& labels() const { return labels_; }
  std::size_t class_count() const { return labels_.class_count(); }

  ModelParams& params() { return params_; }
  const ModelParams& params() const { return params_; }

 private:
  Model(HyperParams hp, Vocab vocab, LabelSet labels);  // uninitialized

  HyperParams hp_;
  Vocab vocab_;
  LabelSet labels_;
  ModelParams params_;
};

// Embedding lookup: row i of the result is the embedding of word_ids[i].
Matrix embed_window(std::span<const std::int32_t> word_ids,
                    const Matrix& embeddings);

// Concatenated embedding of a window, e.g. e(w_t) for the surrounding
// context: d * |window| values.
std::vector<double> embed_concat(std::span<const std::int32_t> word_ids,
                                 const Matrix& embeddings);

}  // namespace seqcnn

#endif  // SEQCNN_MODEL_HPP_
