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

#ifndef SEQCNN_LOSS_HPP_
#define SEQCNN_LOSS_HPP_

#include <cstdint>
#include <span>

#include "seqcnn/model.hpp"

namespace seqcnn {

enum class LossKind { kHinge, kRanking };

// Loss value with its two live partial derivatives. Gradients w.r.t. every
// other class score are zero.
struct LossGrad {
  double value = 0.0;
  double d_gold = 0.0;  // dL / ds_{y+}
  double d_comp = 0.0;  // dL / ds_{c-}
};

// Best competitive class: argmax over real classes excluding the gold class,
// or over all real classes when the gold label is O (gold_class < 0). Ties
// break toward the lowest class id. Returns -1 when no competitor exists
// (single-class corpora).
std::int32_t best_competitor(std::span<const double> scores,
                             std::int32_t gold_class);

// L = max(0, 1 - s_{y+} + s_{c-}). For gold O there is no gold score and the
// margin is pushed against the competitor alone: L = max(0, 1 + s_{c-}).
// A missing competitor drops the s_{c-} term.
LossGrad hinge_loss(double s_gold, double s_comp, bool gold_is_o,
                    bool has_comp = true);

// L = log(1 + exp(gamma (m+ - s_{y+}))) + log(1 + exp(gamma (m- + s_{c-}))).
// For gold O only the second summand is evaluated, so the model never learns
// a pattern for O; it still pushes the best competitor down. Evaluation is
// overflow-safe for any finite scores.
LossGrad ranking_loss(double s_gold, double s_comp, double gamma,
                      double margin_pos, double margin_neg, bool gold_is_o,
                      bool has_comp = true);

// lambda * sum w^2 over weight tensors (filters, U, V, class vectors, W1);
// biases and embeddings are exempt. The gradient contribution is 2 lambda w,
// applied inside the SGD step.
double l2_penalty(ModelParams& params, const HyperParams& hp, double lambda);

}  // namespace seqcnn

#endif  // SEQCNN_LOSS_HPP_
