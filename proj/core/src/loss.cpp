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

#include "seqcnn/loss.hpp"

#include <cmath>

#include "seqcnn/nn_math.hpp"

namespace seqcnn {

namespace {

// log(1 + exp(z)) without overflow: max(z, 0) + log1p(exp(-|z|)).
double softplus(double z) {
  return std::max(z, 0.0) + std::log1p(std::exp(-std::abs(z)));
}

}  // namespace

std::int32_t best_competitor(std::span<const double> scores,
                             std::int32_t gold_class) {
  std::int32_t best = -1;
  for (std::size_t c = 0; c < scores.size(); ++c) {
    if (static_cast<std::int32_t>(c) == gold_class) continue;
    if (best < 0 || scores[c] > scores[static_cast<std::size_t>(best)]) {
      best = static_cast<std::int32_t>(c);
    }
  }
  return best;
}

LossGrad hinge_loss(double s_gold, double s_comp, bool gold_is_o,
                    bool has_comp) {
  LossGrad out;
  double margin = 1.0;
  if (!gold_is_o) margin -= s_gold;
  if (has_comp) margin += s_comp;
  if (margin > 0.0) {
    out.value = margin;
    if (!gold_is_o) out.d_gold = -1.0;
    if (has_comp) out.d_comp = 1.0;
  }
  return out;
}

LossGrad ranking_loss(double s_gold, double s_comp, double gamma,
                      double margin_pos, double margin_neg, bool gold_is_o,
                      bool has_comp) {
  LossGrad out;
  if (!gold_is_o) {
    const double z = gamma * (margin_pos - s_gold);
    out.value += softplus(z);
    out.d_gold = -gamma * nn::sigmoid(z);
  }
  if (has_comp) {
    const double z = gamma * (margin_neg + s_comp);
    out.value += softplus(z);
    out.d_comp = gamma * nn::sigmoid(z);
  }
  return out;
}

double l2_penalty(ModelParams& params, const HyperParams& hp, double lambda) {
  if (lambda == 0.0) return 0.0;
  double sum_sq = 0.0;
  for (const TensorRef& ref : tensor_refs(params, hp)) {
    if (ref.kind != ParamKind::kWeight) continue;
    for (double v : ref.values) sum_sq += v * v;
  }
  return lambda * sum_sq;
}

}  // namespace seqcnn
