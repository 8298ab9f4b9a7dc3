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

#include "seqcnn/model.hpp"

#include <fstream>

#include "binary_io.hpp"
#include "seqcnn/error.hpp"
#include "seqcnn/rng.hpp"

namespace seqcnn {

namespace {

constexpr std::uint64_t kCheckpointMagic = 0x314e4e4351455300ull;  // "\0SEQCNN1"
constexpr std::uint64_t kCheckpointVersion = 1;
constexpr double kInitRange = 0.1;

// ModelParams and Gradients share field names and shapes.
template <typename Params>
void allocate_params(Params& p, const HyperParams& hp,
                     std::size_t vocab_size, std::size_t class_count) {
  const std::size_t s = hp.feature_maps;
  const std::size_t d = hp.emb_dim;
  p.embeddings = Matrix(vocab_size, d);
  if (hp.uses_past()) {
    p.past_filters.assign(s, Matrix(hp.filter_width, d));
    p.past_bias.assign(s, 0.0);
    p.v_past = Matrix(s, s);
  }
  if (hp.uses_future()) {
    p.future_filters.assign(s, Matrix(hp.filter_width, d));
    p.future_bias.assign(s, 0.0);
    p.v_future = Matrix(s, s);
  }
  if (hp.variant == Variant::kWindowBaseline) {
    p.w1 = Matrix(s, d * hp.surround_len());
    p.b1.assign(s, 0.0);
  } else if (hp.use_current_word) {
    p.u = Matrix(s, d * hp.surround_len());
  }
  p.class_vectors = Matrix(class_count, hp.hidden_dim());
}

template <typename Params>
std::vector<TensorRef> collect_refs(Params& p, const HyperParams& hp) {
  std::vector<TensorRef> refs;
  refs.push_back({"embeddings", p.embeddings.values(), ParamKind::kEmbedding});
  if (hp.uses_past()) {
    for (std::size_t k = 0; k < p.past_filters.size(); ++k) {
      refs.push_back({"past_filter[" + std::to_string(k) + "]",
                      p.past_filters[k].values(), ParamKind::kWeight});
    }
    refs.push_back({"past_bias", p.past_bias, ParamKind::kBias});
  }
  if (hp.uses_future()) {
    for (std::size_t k = 0; k < p.future_filters.size(); ++k) {
      refs.push_back({"future_filter[" + std::to_string(k) + "]",
                      p.future_filters[k].values(), ParamKind::kWeight});
    }
    refs.push_back({"future_bias", p.future_bias, ParamKind::kBias});
  }
  if (!p.u.empty()) refs.push_back({"u", p.u.values(), ParamKind::kWeight});
  if (hp.uses_past()) {
    refs.push_back({"v_past", p.v_past.values(), ParamKind::kWeight});
  }
  if (hp.uses_future()) {
    refs.push_back({"v_future", p.v_future.values(), ParamKind::kWeight});
  }
  refs.push_back(
      {"class_vectors", p.class_vectors.values(), ParamKind::kWeight});
  if (hp.variant == Variant::kWindowBaseline) {
    refs.push_back({"w1", p.w1.values(), ParamKind::kWeight});
    refs.push_back({"b1", p.b1, ParamKind::kBias});
  }
  return refs;
}

// dpre = dh * h * (1 - h) over a slice of the hidden layer.
std::vector<double> sigmoid_grad_slice(std::span<const double> hidden,
                                       std::span<const double> dh) {
  std::vector<double> dpre(hidden.size());
  for (std::size_t i = 0; i < hidden.size(); ++i) {
    dpre[i] = dh[i] * hidden[i] * (1.0 - hidden[i]);
  }
  return dpre;
}

}  // namespace

const char* variant_name(Variant v) {
  switch (v) {
    case Variant::kPastOnly:
      return "past";
    case Variant::kFutureOnly:
      return "future";
    case Variant::kBiAdd:
      return "bi-add";
    case Variant::kBiConcat:
      return "bi-concat";
    case Variant::kWindowBaseline:
      return "baseline";
  }
  return "?";
}

std::size_t HyperParams::hidden_dim() const {
  return variant == Variant::kBiConcat ? 2 * feature_maps : feature_maps;
}

bool HyperParams::uses_past() const {
  return variant == Variant::kPastOnly || variant == Variant::kBiAdd ||
         variant == Variant::kBiConcat;
}

bool HyperParams::uses_future() const {
  return variant == Variant::kFutureOnly || variant == Variant::kBiAdd ||
         variant == Variant::kBiConcat;
}

void HyperParams::validate() const {
  if (emb_dim < 1) throw ConfigError("embedding_dim must be >= 1");
  if (feature_maps < 1) throw ConfigError("feature_maps must be >= 1");
  if (filter_width < 1) throw ConfigError("filter_width must be >= 1");
  if (context_len < 1) throw ConfigError("context_length must be >= 1");
  if (variant != Variant::kWindowBaseline &&
      context_len + pad_len < filter_width) {
    throw ConfigError(
        "context_length + pad_length must be >= filter_width so windows are "
        "long enough to convolve");
  }
  if (variant == Variant::kWindowBaseline && !use_current_word) {
    throw ConfigError("the window baseline has no model without the current "
                      "word");
  }
  if (gamma <= 0) throw ConfigError("gamma must be > 0");
  if (l2_weight < 0) throw ConfigError("l2_weight must be >= 0");
  if (lr0 < 0) throw ConfigError("learning_rate must be >= 0");
}

std::vector<TensorRef> tensor_refs(ModelParams& params,
                                   const HyperParams& hp) {
  return collect_refs(params, hp);
}

std::vector<TensorRef> tensor_refs(Gradients& grads, const HyperParams& hp) {
  return collect_refs(grads, hp);
}

Gradients::Gradients(const Model& model) {
  allocate_params(*this, model.hp(), model.vocab().size(),
                  model.class_count());
  touched_flag_.assign(model.vocab().size(), 0);
}

void Gradients::add_embedding_row(std::int32_t word_id,
                                  std::span<const double> g) {
  axpy(1.0, g, embeddings.row(static_cast<std::size_t>(word_id)));
  if (!touched_flag_[static_cast<std::size_t>(word_id)]) {
    touched_flag_[static_cast<std::size_t>(word_id)] = 1;
    touched_.push_back(word_id);
  }
}

void Gradients::reset_touched() {
  for (std::int32_t row : touched_) {
    touched_flag_[static_cast<std::size_t>(row)] = 0;
  }
  touched_.clear();
}

void Gradients::clear() {
  for (std::int32_t row : touched_) {
    auto r = embeddings.row(static_cast<std::size_t>(row));
    std::fill(r.begin(), r.end(), 0.0);
    touched_flag_[static_cast<std::size_t>(row)] = 0;
  }
  touched_.clear();
  for (Matrix& f : past_filters) f.fill(0.0);
  std::fill(past_bias.begin(), past_bias.end(), 0.0);
  for (Matrix& f : future_filters) f.fill(0.0);
  std::fill(future_bias.begin(), future_bias.end(), 0.0);
  u.fill(0.0);
  v_past.fill(0.0);
  v_future.fill(0.0);
  class_vectors.fill(0.0);
  w1.fill(0.0);
  std::fill(b1.begin(), b1.end(), 0.0);
}

Matrix embed_window(std::span<const std::int32_t> word_ids,
                    const Matrix& embeddings) {
  Matrix out(word_ids.size(), embeddings.cols());
  for (std::size_t i = 0; i < word_ids.size(); ++i) {
    const std::int32_t id = word_ids[i];
    if (id < 0 || static_cast<std::size_t>(id) >= embeddings.rows()) {
      throw IndexError("word id out of range: " + std::to_string(id));
    }
    auto src = embeddings.row(static_cast<std::size_t>(id));
    auto dst = out.row(i);
    std::copy(src.begin(), src.end(), dst.begin());
  }
  return out;
}

std::vector<double> embed_concat(std::span<const std::int32_t> word_ids,
                                 const Matrix& embeddings) {
  const std::size_t d = embeddings.cols();
  std::vector<double> out(word_ids.size() * d);
  for (std::size_t i = 0; i < word_ids.size(); ++i) {
    const std::int32_t id = word_ids[i];
    if (id < 0 || static_cast<std::size_t>(id) >= embeddings.rows()) {
      throw IndexError("word id out of range: " + std::to_string(id));
    }
    auto src = embeddings.row(static_cast<std::size_t>(id));
    std::copy(src.begin(), src.end(), out.begin() + i * d);
  }
  return out;
}

Model::Model(HyperParams hp, Vocab vocab, LabelSet labels)
    : hp_(hp), vocab_(std::move(vocab)), labels_(std::move(labels)) {
  hp_.validate();
  allocate_params(params_, hp_, vocab_.size(), labels_.class_count());
}

Model::Model(HyperParams hp, Vocab vocab, LabelSet labels, std::uint64_t seed)
    : Model(hp, std::move(vocab), std::move(labels)) {
  Rng rng(seed);
  for (TensorRef& ref : tensor_refs(params_, hp_)) {
    switch (ref.kind) {
      case ParamKind::kEmbedding:
        // The UNK row stays zero until min-count thresholding gives it
        // training exposure.
        for (std::size_t r = 0; r < params_.embeddings.rows(); ++r) {
          if (static_cast<std::int32_t>(r) == Vocab::kUnknown) continue;
          for (double& v : params_.embeddings.row(r)) {
            v = rng.uniform(-kInitRange, kInitRange);
          }
        }
        break;
      case ParamKind::kWeight:
        for (double& v : ref.values) v = rng.uniform(-kInitRange, kInitRange);
        break;
      case ParamKind::kBias:
        break;  // zero
    }
  }
}

WindowInputs Model::windows_for(const Sentence& sentence, std::size_t t) const {
  return make_windows(sentence, t, hp_.context_len, hp_.pad_len, hp_.surround);
}

TokenForward Model::forward(const WindowInputs& windows) const {
  TokenForward tf;
  tf.windows = windows;

  if (hp_.variant == Variant::kWindowBaseline) {
    if (windows.surrounding.size() != hp_.surround_len()) {
      throw DimensionError("surrounding window length mismatch");
    }
    tf.surround_input = embed_concat(windows.surrounding, params_.embeddings);
    std::vector<double> pre = matvec(params_.w1, tf.surround_input);
    for (std::size_t i = 0; i < pre.size(); ++i) pre[i] += params_.b1[i];
    tf.hidden = nn::sigmoid(pre);
    tf.scores = matvec(params_.class_vectors, tf.hidden);
    return tf;
  }

  const std::size_t s = hp_.feature_maps;
  if (hp_.uses_past()) {
    if (windows.past.size() != hp_.window_len()) {
      throw DimensionError("past window length mismatch");
    }
    Matrix fm = tf.past.conv.forward(
        embed_window(windows.past, params_.embeddings), params_.past_filters,
        params_.past_bias);
    tf.past.features = tf.past.pool.forward(fm).values;
  }
  if (hp_.uses_future()) {
    if (windows.future.size() != hp_.window_len()) {
      throw DimensionError("future window length mismatch");
    }
    Matrix fm = tf.future.conv.forward(
        embed_window(windows.future, params_.embeddings),
        params_.future_filters, params_.future_bias);
    tf.future.features = tf.future.pool.forward(fm).values;
  }
  if (hp_.use_current_word) {
    if (windows.surrounding.size() != hp_.surround_len()) {
      throw DimensionError("surrounding window length mismatch");
    }
    tf.surround_input = embed_concat(windows.surrounding, params_.embeddings);
  }

  // Branch pre-activation: U e(w_t) first, then V c, so that a zeroed V_f
  // leaves the add-combination bitwise identical to the past-only model.
  auto branch_pre = [&](const Matrix& v, std::span<const double> c) {
    std::vector<double> pre(s, 0.0);
    if (hp_.use_current_word) matvec_acc(params_.u, tf.surround_input, pre);
    matvec_acc(v, c, pre);
    return pre;
  };

  switch (hp_.variant) {
    case Variant::kPastOnly:
      tf.hidden = nn::sigmoid(branch_pre(params_.v_past, tf.past.features));
      break;
    case Variant::kFutureOnly:
      tf.hidden =
          nn::sigmoid(branch_pre(params_.v_future, tf.future.features));
      break;
    case Variant::kBiAdd: {
      std::vector<double> pre = branch_pre(params_.v_past, tf.past.features);
      matvec_acc(params_.v_future, tf.future.features, pre);
      tf.hidden = nn::sigmoid(pre);
      break;
    }
    case Variant::kBiConcat: {
      std::vector<double> hp_half =
          nn::sigmoid(branch_pre(params_.v_past, tf.past.features));
      std::vector<double> hf_half =
          nn::sigmoid(branch_pre(params_.v_future, tf.future.features));
      tf.hidden.reserve(2 * s);
      tf.hidden.insert(tf.hidden.end(), hp_half.begin(), hp_half.end());
      tf.hidden.insert(tf.hidden.end(), hf_half.begin(), hf_half.end());
      break;
    }
    case Variant::kWindowBaseline:
      break;  // handled above
  }

  tf.scores = matvec(params_.class_vectors, tf.hidden);
  return tf;
}

void Model::backward(const TokenForward& fwd, std::span<const double> dscores,
                     Gradients& grads) const {
  if (dscores.size() != class_count()) {
    throw DimensionError("dscores size does not match class count");
  }
  outer_acc(dscores, fwd.hidden, grads.class_vectors);
  std::vector<double> dh = matvec_t(params_.class_vectors, dscores);

  const std::size_t d = hp_.emb_dim;

  auto scatter_embedding_rows = [&](std::span<const std::int32_t> ids,
                                    const Matrix& row_grads) {
    for (std::size_t i = 0; i < ids.size(); ++i) {
      grads.add_embedding_row(ids[i], row_grads.row(i));
    }
  };
  auto scatter_concat = [&](std::span<const std::int32_t> ids,
                            std::span<const double> flat) {
    for (std::size_t i = 0; i < ids.size(); ++i) {
      grads.add_embedding_row(ids[i], flat.subspan(i * d, d));
    }
  };

  if (hp_.variant == Variant::kWindowBaseline) {
    std::vector<double> dpre = sigmoid_grad_slice(fwd.hidden, dh);
    outer_acc(dpre, fwd.surround_input, grads.w1);
    axpy(1.0, dpre, grads.b1);
    std::vector<double> de = matvec_t(params_.w1, dpre);
    scatter_concat(fwd.windows.surrounding, de);
    return;
  }

  const std::size_t s = hp_.feature_maps;
  std::span<const double> hidden(fwd.hidden);
  std::vector<double> dpre_past;
  std::vector<double> dpre_future;
  switch (hp_.variant) {
    case Variant::kPastOnly:
      dpre_past = sigmoid_grad_slice(hidden, dh);
      break;
    case Variant::kFutureOnly:
      dpre_future = sigmoid_grad_slice(hidden, dh);
      break;
    case Variant::kBiAdd:
      // One shared pre-activation feeds both V terms.
      dpre_past = sigmoid_grad_slice(hidden, dh);
      dpre_future = dpre_past;
      break;
    case Variant::kBiConcat:
      dpre_past = sigmoid_grad_slice(hidden.first(s),
                                     std::span<const double>(dh).first(s));
      dpre_future = sigmoid_grad_slice(
          hidden.subspan(s), std::span<const double>(dh).subspan(s));
      break;
    case Variant::kWindowBaseline:
      break;
  }

  if (hp_.use_current_word) {
    // U is shared: its gradient sums the contributions of every branch
    // pre-activation that contains the U e(w_t) term.
    std::vector<double> du(s, 0.0);
    if (hp_.variant == Variant::kBiAdd) {
      du = dpre_past;
    } else {
      if (!dpre_past.empty()) axpy(1.0, dpre_past, du);
      if (!dpre_future.empty()) axpy(1.0, dpre_future, du);
    }
    outer_acc(du, fwd.surround_input, grads.u);
    std::vector<double> de = matvec_t(params_.u, du);
    scatter_concat(fwd.windows.surrounding, de);
  }

  if (hp_.uses_past()) {
    outer_acc(dpre_past, fwd.past.features, grads.v_past);
    std::vector<double> dc = matvec_t(params_.v_past, dpre_past);
    Matrix dfm = fwd.past.pool.backward(dc);
    Matrix din = fwd.past.conv.backward(dfm, params_.past_filters,
                                        grads.past_filters, grads.past_bias);
    scatter_embedding_rows(fwd.windows.past, din);
  }
  if (hp_.uses_future()) {
    outer_acc(dpre_future, fwd.future.features, grads.v_future);
    std::vector<double> dc = matvec_t(params_.v_future, dpre_future);
    Matrix dfm = fwd.future.pool.backward(dc);
    Matrix din =
        fwd.future.conv.backward(dfm, params_.future_filters,
                                 grads.future_filters, grads.future_bias);
    scatter_embedding_rows(fwd.windows.future, din);
  }
}

std::int32_t Model::predict_label(std::span<const double> scores) const {
  if (scores.empty()) return LabelSet::kOutsideId;
  std::size_t best = 0;
  for (std::size_t c = 1; c < scores.size(); ++c) {
    if (scores[c] > scores[best]) best = c;
  }
  // A real class needs positive evidence; anything else is O.
  if (scores[best] <= 0.0) return LabelSet::kOutsideId;
  return static_cast<std::int32_t>(best) + 1;
}

void Model::save(const std::string& path) const {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw IoError("cannot write checkpoint: " + path);
  io::write_u64(os, kCheckpointMagic);
  io::write_u64(os, kCheckpointVersion);
  io::write_u64(os, static_cast<std::uint64_t>(hp_.variant));
  io::write_u64(os, hp_.emb_dim);
  io::write_u64(os, hp_.feature_maps);
  io::write_u64(os, hp_.filter_width);
  io::write_u64(os, hp_.context_len);
  io::write_u64(os, hp_.pad_len);
  io::write_u64(os, hp_.surround);
  io::write_u64(os, hp_.use_current_word ? 1 : 0);
  io::write_f64(os, hp_.gamma);
  io::write_f64(os, hp_.margin_pos);
  io::write_f64(os, hp_.margin_neg);
  io::write_f64(os, hp_.l2_weight);
  io::write_f64(os, hp_.lr0);
  vocab_.write(os);
  labels_.write(os);
  // Tensor shapes are implied by the header, so only values are stored.
  ModelParams& p = const_cast<ModelParams&>(params_);
  for (const TensorRef& ref : tensor_refs(p, hp_)) {
    io::write_f64_span(os, ref.values);
  }
  if (!os) throw IoError("checkpoint write failed: " + path);
}

Model Model::load(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw IoError("cannot open checkpoint: " + path);
  if (io::read_u64(is) != kCheckpointMagic) {
    throw IoError("not a seqcnn checkpoint: " + path);
  }
  if (io::read_u64(is) != kCheckpointVersion) {
    throw IoError("unsupported checkpoint version: " + path);
  }
  HyperParams hp;
  hp.variant = static_cast<Variant>(io::read_u64(is));
  hp.emb_dim = io::read_u64(is);
  hp.feature_maps = io::read_u64(is);
  hp.filter_width = io::read_u64(is);
  hp.context_len = io::read_u64(is);
  hp.pad_len = io::read_u64(is);
  hp.surround = io::read_u64(is);
  hp.use_current_word = io::read_u64(is) != 0;
  hp.gamma = io::read_f64(is);
  hp.margin_pos = io::read_f64(is);
  hp.margin_neg = io::read_f64(is);
  hp.l2_weight = io::read_f64(is);
  hp.lr0 = io::read_f64(is);
  Vocab vocab = Vocab::read(is);
  LabelSet labels = LabelSet::read(is);
  Model model(hp, std::move(vocab), std::move(labels));
  for (TensorRef& ref : tensor_refs(model.params_, hp)) {
    std::vector<double> values = io::read_f64_vec(is);
    if (values.size() != ref.values.size()) {
      throw IoError("checkpoint tensor size mismatch for " + ref.name);
    }
    std::copy(values.begin(), values.end(), ref.values.begin());
  }
  return model;
}

}  // namespace seqcnn
