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

#ifndef SEQCNN_TRAINER_HPP_
#define SEQCNN_TRAINER_HPP_

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "seqcnn/corpus.hpp"
#include "seqcnn/loss.hpp"
#include "seqcnn/model.hpp"
#include "seqcnn/rng.hpp"

namespace seqcnn {

struct TrainConfig {
  int epochs_total = 25;
  // Learning rate stays at lr0 through this epoch, then halves every epoch.
  int epochs_constant_lr = 10;
  std::uint64_t seed = 1;
  bool shuffle = true;  // sentence order; token order inside stays fixed
  LossKind loss = LossKind::kRanking;
  bool train_embeddings = true;
  std::size_t min_word_count = 1;

  void validate() const;
};

struct TrainReport {
  // One entry per epoch, in order.
  std::vector<double> learning_rate;
  std::vector<double> mean_loss;
};

// Learning rate for a 1-based epoch: lr0 while epoch <= epochs_constant_lr,
// then lr0 / 2^(epoch - epochs_constant_lr). Out-of-range epochs throw.
double lr_at(double lr0, const TrainConfig& config, int epoch);

// One SGD pass over every (sentence, token) pair with per-example updates
// w <- w - lr (dLoss + dL2). Sentences are visited in shuffled order when
// config.shuffle is set. Returns the mean data loss. Aborts with a
// diagnostic Error when a non-finite value appears.
double sgd_epoch(Model& model, const Corpus& corpus, double lr,
                 const TrainConfig& config, Gradients& grads, Rng& rng);

// Tags every token of an indexed corpus; returns per-sentence predicted
// label strings.
std::vector<std::vector<std::string>> tag_corpus(const Model& model,
                                                 const Corpus& corpus);

// Fraction of tokens whose predicted label string equals the gold label.
double token_accuracy(const Model& model, const Corpus& corpus);

// Builds vocabulary and labels from the raw corpus, trains for the full
// schedule, and returns the model with its per-epoch report.
std::pair<Model, TrainReport> train_final(const Corpus& raw_corpus,
                                          const HyperParams& hp,
                                          const TrainConfig& config);

struct CvCandidate {
  HyperParams hp;
  TrainConfig train;
};

struct CvOutcome {
  std::size_t best_index = 0;
  std::vector<double> mean_f1;                 // per candidate
  std::vector<std::vector<double>> fold_f1;    // per candidate, per fold
};

// Contiguous [begin, end) index blocks partitioning n items into k folds.
std::vector<std::pair<std::size_t, std::size_t>> fold_spans(std::size_t n,
                                                            int folds);

// K-fold cross-validation over sentences: one seeded shuffle, contiguous
// blocks as folds. Each candidate trains on k-1 folds and is scored by chunk
// F1 on the held-out fold; the candidate with the best mean wins, ties to
// the first. Vocabulary and labels are rebuilt per training split.
CvOutcome cross_validate(const Corpus& raw_corpus,
                         std::span<const CvCandidate> grid, int folds = 5,
                         std::uint64_t fold_seed = 1);

}  // namespace seqcnn

#endif  // SEQCNN_TRAINER_HPP_
