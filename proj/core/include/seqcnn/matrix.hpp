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

#ifndef SEQCNN_MATRIX_HPP_
#define SEQCNN_MATRIX_HPP_

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "seqcnn/error.hpp"

namespace seqcnn {

// Dense row-major matrix of doubles. All model arithmetic runs in double
// precision; gradient-check tolerances depend on it.
class Matrix {
 public:
  Matrix() = default;

  Matrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), data_(rows * cols, 0.0) {}

  Matrix(std::size_t rows, std::size_t cols, std::vector<double> data)
      : rows_(rows), cols_(cols), data_(std::move(data)) {
    if (data_.size() != rows_ * cols_) {
      throw DimensionError("matrix data size does not match rows*cols");
    }
  }

  double& operator()(std::size_t r, std::size_t c) {
    return data_[r * cols_ + c];
  }
  double operator()(std::size_t r, std::size_t c) const {
    return data_[r * cols_ + c];
  }

  std::span<double> row(std::size_t r) {
    return std::span<double>(data_.data() + r * cols_, cols_);
  }
  std::span<const double> row(std::size_t r) const {
    return std::span<const double>(data_.data() + r * cols_, cols_);
  }

  std::span<double> values() { return data_; }
  std::span<const double> values() const { return data_; }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool empty() const { return data_.empty(); }

  void fill(double v) { data_.assign(data_.size(), v); }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

inline double dot(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw DimensionError("dot: size mismatch");
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
  return acc;
}

// y += a * x
inline void axpy(double a, std::span<const double> x, std::span<double> y) {
  if (x.size() != y.size()) throw DimensionError("axpy: size mismatch");
  for (std::size_t i = 0; i < x.size(); ++i) y[i] += a * x[i];
}

// y += W x
inline void matvec_acc(const Matrix& w, std::span<const double> x,
                       std::span<double> y) {
  if (w.cols() != x.size() || w.rows() != y.size()) {
    throw DimensionError("matvec: shape mismatch");
  }
  for (std::size_t r = 0; r < w.rows(); ++r) y[r] += dot(w.row(r), x);
}

inline std::vector<double> matvec(const Matrix& w, std::span<const double> x) {
  std::vector<double> y(w.rows(), 0.0);
  matvec_acc(w, x, y);
  return y;
}

// out += W^T y; rows with y[r] == 0 are skipped.
inline void matvec_t_acc(const Matrix& w, std::span<const double> y,
                         std::span<double> out) {
  if (w.rows() != y.size() || w.cols() != out.size()) {
    throw DimensionError("matvec_t: shape mismatch");
  }
  for (std::size_t r = 0; r < w.rows(); ++r) {
    if (y[r] != 0.0) axpy(y[r], w.row(r), out);
  }
}

inline std::vector<double> matvec_t(const Matrix& w,
                                    std::span<const double> y) {
  std::vector<double> out(w.cols(), 0.0);
  matvec_t_acc(w, y, out);
  return out;
}

// W += u v^T; rows with u[r] == 0 are skipped.
inline void outer_acc(std::span<const double> u, std::span<const double> v,
                      Matrix& w) {
  if (w.rows() != u.size() || w.cols() != v.size()) {
    throw DimensionError("outer: shape mismatch");
  }
  for (std::size_t r = 0; r < u.size(); ++r) {
    if (u[r] != 0.0) axpy(u[r], v, w.row(r));
  }
}

}  // namespace seqcnn

#endif  // SEQCNN_MATRIX_HPP_
