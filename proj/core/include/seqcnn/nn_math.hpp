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

#ifndef SEQCNN_NN_MATH_HPP_
#define SEQCNN_NN_MATH_HPP_

#include <cstddef>
#include <span>
#include <vector>

#include "seqcnn/matrix.hpp"

namespace seqcnn::nn {

double sigmoid(double x);
std::vector<double> sigmoid(std::span<const double> x);

// Result of max pooling over the time (row) axis: one value per filter
// column plus the row it came from. Ties break toward the lowest row, which
// keeps the n-gram traceback deterministic.
struct PoolResult {
  std::vector<double> values;
  std::vector<std::size_t> argmax;
};

// Valid cross-correlation of an (L x d) input against s full-width filters
// (each |f| x d), producing an (L-|f|+1 x s) feature map:
//
//   out(t, k) = bias_k + sum_j sum_i input(t+j, i) * filter_k(j, i)
//
// A flipped-kernel convolution differs only by a fixed reindexing of the
// learned filters, so the two are interchangeable for trained parameters.
Matrix conv_full_width(const Matrix& input, std::span<const Matrix> filters,
                       std::span<const double> biases);

PoolResult max_pool_over_time(const Matrix& featmap);

// The op classes below cache whatever the backward pass needs. Each is a
// single forward/backward pair; calling backward first is a StateError.

class ConvOp {
 public:
  // Takes ownership of the input window. Filters and biases are only read.
  Matrix forward(Matrix input, std::span<const Matrix> filters,
                 std::span<const double> biases);

  // upstream is (L' x s); zero entries are skipped, which makes the
  // pool-routed gradient (one live row per column) cheap. Accumulates into
  // filter_grads/bias_grads and returns the gradient w.r.t. the input.
  // filters must be the ones passed to forward.
  Matrix backward(const Matrix& upstream, std::span<const Matrix> filters,
                  std::span<Matrix> filter_grads,
                  std::span<double> bias_grads) const;

  const Matrix& input() const { return input_; }

 private:
  Matrix input_;
  std::size_t out_rows_ = 0;
  std::size_t out_cols_ = 0;
  bool ran_ = false;
};

class MaxPoolOp {
 public:
  PoolResult forward(const Matrix& featmap);

  // Routes upstream[k] to the argmax row of column k, zeros elsewhere.
  Matrix backward(std::span<const double> upstream) const;

  const std::vector<std::size_t>& trace() const;

 private:
  std::vector<std::size_t> argmax_;
  std::size_t in_rows_ = 0;
  bool ran_ = false;
};

class SigmoidOp {
 public:
  std::vector<double> forward(std::span<const double> x);

  // dL/dx_i = upstream_i * y_i * (1 - y_i)
  std::vector<double> backward(std::span<const double> upstream) const;

 private:
  std::vector<double> output_;
  bool ran_ = false;
};

// y = W x
class AffineOp {
 public:
  std::vector<double> forward(const Matrix& w, std::vector<double> x);

  // Accumulates dW = upstream x^T into w_grad and returns dx = W^T upstream.
  std::vector<double> backward(const Matrix& w,
                               std::span<const double> upstream,
                               Matrix& w_grad) const;

 private:
  std::vector<double> input_;
  bool ran_ = false;
};

}  // namespace seqcnn::nn

#endif  // SEQCNN_NN_MATH_HPP_
