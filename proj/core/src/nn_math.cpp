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

#include "seqcnn/nn_math.hpp"

#include <cmath>

#include "seqcnn/error.hpp"

namespace seqcnn::nn {

namespace {

void check_conv_shapes(const Matrix& input, std::span<const Matrix> filters,
                       std::span<const double> biases) {
  if (filters.empty()) throw DimensionError("conv: no filters");
  if (biases.size() != filters.size()) {
    throw DimensionError("conv: bias count does not match filter count");
  }
  const std::size_t width = filters[0].rows();
  const std::size_t dim = filters[0].cols();
  if (width == 0 || dim == 0) throw DimensionError("conv: empty filter");
  for (const Matrix& f : filters) {
    if (f.rows() != width || f.cols() != dim) {
      throw DimensionError("conv: filters disagree on shape");
    }
  }
  if (input.cols() != dim) {
    throw DimensionError("conv: input dim does not span filter dim");
  }
  if (input.rows() < width) {
    throw WindowTooShortError("conv: input shorter than filter width");
  }
}

}  // namespace

double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

std::vector<double> sigmoid(std::span<const double> x) {
  std::vector<double> y(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) y[i] = sigmoid(x[i]);
  return y;
}

Matrix conv_full_width(const Matrix& input, std::span<const Matrix> filters,
                       std::span<const double> biases) {
  check_conv_shapes(input, filters, biases);
  const std::size_t width = filters[0].rows();
  const std::size_t out_len = input.rows() - width + 1;
  Matrix out(out_len, filters.size());
  for (std::size_t k = 0; k < filters.size(); ++k) {
    const Matrix& f = filters[k];
    for (std::size_t t = 0; t < out_len; ++t) {
      double acc = biases[k];
      for (std::size_t j = 0; j < width; ++j) {
        acc += dot(input.row(t + j), f.row(j));
      }
      out(t, k) = acc;
    }
  }
  return out;
}

PoolResult max_pool_over_time(const Matrix& featmap) {
  if (featmap.rows() == 0 || featmap.cols() == 0) {
    throw DimensionError("max_pool: empty feature map");
  }
  PoolResult res;
  res.values.resize(featmap.cols());
  res.argmax.resize(featmap.cols());
  for (std::size_t k = 0; k < featmap.cols(); ++k) {
    double best = featmap(0, k);
    std::size_t best_row = 0;
    for (std::size_t t = 1; t < featmap.rows(); ++t) {
      if (featmap(t, k) > best) {
        best = featmap(t, k);
        best_row = t;
      }
    }
    res.values[k] = best;
    res.argmax[k] = best_row;
  }
  return res;
}

Matrix ConvOp::forward(Matrix input, std::span<const Matrix> filters,
                       std::span<const double> biases) {
  Matrix out = conv_full_width(input, filters, biases);
  input_ = std::move(input);
  out_rows_ = out.rows();
  out_cols_ = out.cols();
  ran_ = true;
  return out;
}

Matrix ConvOp::backward(const Matrix& upstream,
                        std::span<const Matrix> filters,
                        std::span<Matrix> filter_grads,
                        std::span<double> bias_grads) const {
  if (!ran_) throw StateError("conv backward before forward");
  if (upstream.rows() != out_rows_ || upstream.cols() != out_cols_) {
    throw DimensionError("conv backward: upstream shape mismatch");
  }
  if (filters.size() != out_cols_ || filter_grads.size() != out_cols_ ||
      bias_grads.size() != out_cols_) {
    throw DimensionError("conv backward: gradient shape mismatch");
  }
  const std::size_t width = filters[0].rows();
  Matrix input_grad(input_.rows(), input_.cols());
  for (std::size_t k = 0; k < out_cols_; ++k) {
    for (std::size_t t = 0; t < out_rows_; ++t) {
      const double g = upstream(t, k);
      if (g == 0.0) continue;
      bias_grads[k] += g;
      for (std::size_t j = 0; j < width; ++j) {
        axpy(g, input_.row(t + j), filter_grads[k].row(j));
        axpy(g, filters[k].row(j), input_grad.row(t + j));
      }
    }
  }
  return input_grad;
}

PoolResult MaxPoolOp::forward(const Matrix& featmap) {
  PoolResult res = max_pool_over_time(featmap);
  argmax_ = res.argmax;
  in_rows_ = featmap.rows();
  ran_ = true;
  return res;
}

Matrix MaxPoolOp::backward(std::span<const double> upstream) const {
  if (!ran_) throw StateError("max_pool backward before forward");
  if (upstream.size() != argmax_.size()) {
    throw DimensionError("max_pool backward: upstream size mismatch");
  }
  Matrix grad(in_rows_, argmax_.size());
  for (std::size_t k = 0; k < argmax_.size(); ++k) {
    grad(argmax_[k], k) = upstream[k];
  }
  return grad;
}

const std::vector<std::size_t>& MaxPoolOp::trace() const {
  if (!ran_) throw StateError("max_pool trace before forward");
  return argmax_;
}

std::vector<double> SigmoidOp::forward(std::span<const double> x) {
  output_ = sigmoid(x);
  ran_ = true;
  return output_;
}

std::vector<double> SigmoidOp::backward(
    std::span<const double> upstream) const {
  if (!ran_) throw StateError("sigmoid backward before forward");
  if (upstream.size() != output_.size()) {
    throw DimensionError("sigmoid backward: upstream size mismatch");
  }
  std::vector<double> grad(output_.size());
  for (std::size_t i = 0; i < output_.size(); ++i) {
    grad[i] = upstream[i] * output_[i] * (1.0 - output_[i]);
  }
  return grad;
}

std::vector<double> AffineOp::forward(const Matrix& w, std::vector<double> x) {
  std::vector<double> y = matvec(w, x);
  input_ = std::move(x);
  ran_ = true;
  return y;
}

std::vector<double> AffineOp::backward(const Matrix& w,
                                       std::span<const double> upstream,
                                       Matrix& w_grad) const {
  if (!ran_) throw StateError("affine backward before forward");
  outer_acc(upstream, input_, w_grad);
  return matvec_t(w, upstream);
}

}  // namespace seqcnn::nn
