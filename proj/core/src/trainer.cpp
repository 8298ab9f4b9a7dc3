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

#include "seqcnn/trainer.hpp"

#include <cmath>
#include <numeric>

#include "seqcnn/error.hpp"
#include "seqcnn/eval.hpp"

namespace seqcnn {

namespace {

bool all_finite(std::span<const double> values) {
  for (double v : values) {
    if (!std::isfinite(v)) return false;
  }
  return true;
}

// Names the first parameter tensor holding a non-finite value, if any.
std::string find_non_finite(Model& model) {
  for (const TensorRef& ref : tensor_refs(model.params(), model.hp())) {
    if (!all_finite(ref.values)) return ref.name;
  }
  return {};
}

[[noreturn]] void abort_non_finite(Model& model, std::size_t example_index) {
  std::string tensor = find_non_finite(model);
  std::string where = tensor.empty()
                          ? std::string("activations (parameters all finite)")
                          : "parameter '" + tensor + "'";
  throw Error("non-finite value in " + where + " at training example " +
              std::to_string(example_index));
}

// Fused SGD step: w -= lr (g + 2 lambda w) for weights, w -= lr g for
// biases; gradients are zeroed in the same pass. Embeddings update only
// their touched rows and carry no L2 term.
void apply_update(Model& model, Gradients& grads, double lr, double lambda,
                  bool train_embeddings) {
  std::vector<TensorRef> params = tensor_refs(model.params(), model.hp());
  std::vector<TensorRef> gradients = tensor_refs(grads, model.hp());
  const double shrink = 2.0 * lambda;
  for (std::size_t i = 0; i < params.size(); ++i) {
    std::span<double> w = params[i].values;
    std::span<double> g = gradients[i].values;
    switch (params[i].kind) {
      case ParamKind::kEmbedding: {
        if (train_embeddings) {
          for (std::int32_t row : grads.touched_rows()) {
            auto wr = model.params().embeddings.row(
                static_cast<std::size_t>(row));
            auto gr = grads.embeddings.row(static_cast<std::size_t>(row));
            for (std::size_t j = 0; j < wr.size(); ++j) {
              wr[j] -= lr * gr[j];
              gr[j] = 0.0;
            }
          }
        } else {
          for (std::int32_t row : grads.touched_rows()) {
            auto gr = grads.embeddings.row(static_cast<std::size_t>(row));
            std::fill(gr.begin(), gr.end(), 0.0);
          }
        }
        grads.reset_touched();
        break;
      }
      case ParamKind::kWeight:
        for (std::size_t j = 0; j < w.size(); ++j) {
          w[j] -= lr * (g[j] + shrink * w[j]);
          g[j] = 0.0;
        }
        break;
      case ParamKind::kBias:
        for (std::size_t j = 0; j < w.size(); ++j) {
          w[j] -= lr * g[j];
          g[j] = 0.0;
        }
        break;
    }
  }
}

}  // namespace

void TrainConfig::validate() const {
  if (epochs_total < 1) throw ConfigError("epochs must be >= 1");
  if (epochs_constant_lr > epochs_total) {
    throw ConfigError("constant_lr_epochs must be <= epochs");
  }
  if (min_word_count < 1) throw ConfigError("min_word_count must be >= 1");
}

double lr_at(double lr0, const TrainConfig& config, int epoch) {
  if (epoch < 1 || epoch > config.epochs_total) {
    throw IndexError("epoch " + std::to_string(epoch) +
                     " outside the training schedule");
  }
  if (epoch <= config.epochs_constant_lr) return lr0;
  return lr0 / std::exp2(static_cast<double>(epoch - config.epochs_constant_lr));
}

double sgd_epoch(Model& model, const Corpus& corpus, double lr,
                 const TrainConfig& config, Gradients& grads, Rng& rng) {
  std::vector<std::size_t> order(corpus.sentences.size());
  std::iota(order.begin(), order.end(), 0);
  if (config.shuffle) rng.shuffle(order);

  const HyperParams& hp = model.hp();
  const std::size_t classes = model.class_count();
  std::vector<double> dscores(classes, 0.0);

  double total_loss = 0.0;
  std::size_t example = 0;
  for (std::size_t si : order) {
    const Sentence& sentence = corpus.sentences[si];
    for (std::size_t t = 0; t < sentence.tokens.size(); ++t, ++example) {
      const Token& tok = sentence.tokens[t];
      if (tok.label_id < 0) {
        throw Error("token '" + tok.surface +
                    "' has a label outside the training inventory");
      }
      TokenForward fwd = model.forward(model.windows_for(sentence, t));

      const bool gold_is_o = tok.label_id == LabelSet::kOutsideId;
      const std::int32_t gold_class = tok.label_id - 1;
      const std::int32_t comp = best_competitor(fwd.scores, gold_class);
      const bool has_comp = comp >= 0;
      const double s_gold =
          gold_is_o ? 0.0 : fwd.scores[static_cast<std::size_t>(gold_class)];
      const double s_comp =
          has_comp ? fwd.scores[static_cast<std::size_t>(comp)] : 0.0;

      LossGrad lg;
      switch (config.loss) {
        case LossKind::kHinge:
          lg = hinge_loss(s_gold, s_comp, gold_is_o, has_comp);
          break;
        case LossKind::kRanking:
          lg = ranking_loss(s_gold, s_comp, hp.gamma, hp.margin_pos,
                            hp.margin_neg, gold_is_o, has_comp);
          break;
      }
      total_loss += lg.value;

      if (!std::isfinite(lg.value) || !all_finite(fwd.scores)) {
        abort_non_finite(model, example);
      }
      const bool has_grad = lg.d_gold != 0.0 || lg.d_comp != 0.0;
      if (has_grad) {
        if (!gold_is_o) {
          dscores[static_cast<std::size_t>(gold_class)] = lg.d_gold;
        }
        if (has_comp) dscores[static_cast<std::size_t>(comp)] = lg.d_comp;
        model.backward(fwd, dscores, grads);
        if (!gold_is_o) dscores[static_cast<std::size_t>(gold_class)] = 0.0;
        if (has_comp) dscores[static_cast<std::size_t>(comp)] = 0.0;
      }
      if (has_grad || hp.l2_weight != 0.0) {
        apply_update(model, grads, lr, hp.l2_weight,
                     config.train_embeddings);
      }
    }
  }
  return example == 0 ? 0.0 : total_loss / static_cast<double>(example);
}

std::vector<std::vector<std::string>> tag_corpus(const Model& model,
                                                 const Corpus& corpus) {
  std::vector<std::vector<std::string>> predictions;
  predictions.reserve(corpus.sentences.size());
  for (const Sentence& sentence : corpus.sentences) {
    std::vector<std::string> labels;
    labels.reserve(sentence.tokens.size());
    for (std::size_t t = 0; t < sentence.tokens.size(); ++t) {
      TokenForward fwd = model.forward(model.windows_for(sentence, t));
      labels.push_back(model.labels().label(model.predict_label(fwd.scores)));
    }
    predictions.push_back(std::move(labels));
  }
  return predictions;
}

double token_accuracy(const Model& model, const Corpus& corpus) {
  std::size_t total = 0;
  std::size_t correct = 0;
  std::vector<std::vector<std::string>> predicted = tag_corpus(model, corpus);
  for (std::size_t s = 0; s < corpus.sentences.size(); ++s) {
    const Sentence& sentence = corpus.sentences[s];
    for (std::size_t t = 0; t < sentence.tokens.size(); ++t) {
      ++total;
      if (sentence.tokens[t].label == predicted[s][t]) ++correct;
    }
  }
  return total == 0 ? 0.0 : static_cast<double>(correct) /
                                static_cast<double>(total);
}

std::pair<Model, TrainReport> train_final(const Corpus& raw_corpus,
                                          const HyperParams& hp,
                                          const TrainConfig& config) {
  hp.validate();
  config.validate();
  Vocab vocab = build_vocab(raw_corpus, config.min_word_count);
  LabelSet labels = build_labels(raw_corpus);
  Corpus corpus = index_corpus(raw_corpus, vocab, labels);

  Model model(hp, std::move(vocab), std::move(labels), config.seed);
  Gradients grads(model);
  Rng rng(config.seed ^ 0x9e3779b97f4a7c15ull);

  TrainReport report;
  for (int epoch = 1; epoch <= config.epochs_total; ++epoch) {
    const double lr = lr_at(hp.lr0, config, epoch);
    const double mean_loss = sgd_epoch(model, corpus, lr, config, grads, rng);
    report.learning_rate.push_back(lr);
    report.mean_loss.push_back(mean_loss);
  }
  return {std::move(model), std::move(report)};
}

std::vector<std::pair<std::size_t, std::size_t>> fold_spans(std::size_t n,
                                                            int folds) {
  std::vector<std::pair<std::size_t, std::size_t>> spans;
  spans.reserve(static_cast<std::size_t>(folds));
  for (int f = 0; f < folds; ++f) {
    const std::size_t lo =
        n * static_cast<std::size_t>(f) / static_cast<std::size_t>(folds);
    const std::size_t hi =
        n * static_cast<std::size_t>(f + 1) / static_cast<std::size_t>(folds);
    spans.emplace_back(lo, hi);
  }
  return spans;
}

CvOutcome cross_validate(const Corpus& raw_corpus,
                         std::span<const CvCandidate> grid, int folds,
                         std::uint64_t fold_seed) {
  if (grid.empty()) throw Error("cross-validation grid is empty");
  if (folds < 2) throw Error("cross-validation needs at least 2 folds");
  const std::size_t n = raw_corpus.sentences.size();
  if (n < static_cast<std::size_t>(folds)) {
    throw Error("fewer sentences than folds");
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  Rng rng(fold_seed);
  rng.shuffle(order);

  const std::vector<std::pair<std::size_t, std::size_t>> spans =
      fold_spans(n, folds);

  CvOutcome outcome;
  outcome.mean_f1.assign(grid.size(), 0.0);
  outcome.fold_f1.assign(grid.size(), {});

  for (std::size_t gi = 0; gi < grid.size(); ++gi) {
    const CvCandidate& cand = grid[gi];
    for (int f = 0; f < folds; ++f) {
      const auto [lo, hi] = spans[static_cast<std::size_t>(f)];
      Corpus train_split;
      Corpus dev_split;
      for (std::size_t i = 0; i < n; ++i) {
        const Sentence& s = raw_corpus.sentences[order[i]];
        if (i >= lo && i < hi) {
          dev_split.sentences.push_back(s);
        } else {
          train_split.sentences.push_back(s);
        }
      }
      auto [model, report] = train_final(train_split, cand.hp, cand.train);
      Corpus dev_indexed =
          index_corpus(dev_split, model.vocab(), model.labels());
      std::vector<std::vector<std::string>> predicted =
          tag_corpus(model, dev_indexed);
      std::vector<std::vector<std::string>> gold(dev_indexed.sentences.size());
      for (std::size_t s = 0; s < dev_indexed.sentences.size(); ++s) {
        for (const Token& tok : dev_indexed.sentences[s].tokens) {
          gold[s].push_back(tok.label);
        }
      }
      outcome.fold_f1[gi].push_back(chunk_f1(gold, predicted).f1());
    }
    double sum = 0.0;
    for (double v : outcome.fold_f1[gi]) sum += v;
    outcome.mean_f1[gi] = sum / static_cast<double>(folds);
  }

  outcome.best_index = 0;
  for (std::size_t gi = 1; gi < grid.size(); ++gi) {
    if (outcome.mean_f1[gi] > outcome.mean_f1[outcome.best_index]) {
      outcome.best_index = gi;
    }
  }
  return outcome;
}

}  // namespace seqcnn
