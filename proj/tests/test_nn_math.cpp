#include <cmath>
#include <vector>

#include "doctest.h"
#include "seqcnn/error.hpp"
#include "seqcnn/nn_math.hpp"
#include "seqcnn/rng.hpp"
#include "test_util.hpp"

using namespace seqcnn;
using namespace seqcnn::nn;
namespace tu = seqcnn::testutil;

namespace {

Matrix random_matrix(std::size_t rows, std::size_t cols, Rng& rng) {
  Matrix m(rows, cols);
  for (double& v : m.values()) v = rng.uniform(-1.0, 1.0);
  return m;
}

// Independent brute-force oracle: plain nested sums, no shared code with
// conv_full_width.
double conv_oracle_at(const Matrix& input, const Matrix& filter, double bias,
                      std::size_t t) {
  double acc = bias;
  for (std::size_t j = 0; j < filter.rows(); ++j) {
    for (std::size_t i = 0; i < filter.cols(); ++i) {
      acc += input(t + j, i) * filter(j, i);
    }
  }
  return acc;
}

}  // namespace

TEST_CASE("conv with all-zero filter and bias yields a zero column") {
  Rng rng(7);
  Matrix input = random_matrix(6, 4, rng);
  std::vector<Matrix> filters = {Matrix(2, 4)};
  std::vector<double> biases = {0.0};
  Matrix out = conv_full_width(input, filters, biases);
  REQUIRE(out.rows() == 5);
  REQUIRE(out.cols() == 1);
  for (double v : out.values()) CHECK(v == 0.0);
}

TEST_CASE("conv with a width-1 all-ones filter reduces to row sums") {
  Rng rng(8);
  Matrix input = random_matrix(5, 3, rng);
  Matrix ones(1, 3);
  ones.fill(1.0);
  std::vector<Matrix> filters = {ones};
  std::vector<double> biases = {0.0};
  Matrix out = conv_full_width(input, filters, biases);
  REQUIRE(out.rows() == 5);
  for (std::size_t t = 0; t < 5; ++t) {
    double row_sum = 0.0;
    for (double v : input.row(t)) row_sum += v;
    CHECK(out(t, 0) == doctest::Approx(row_sum).epsilon(1e-12));
  }
}

TEST_CASE("conv matches the double-loop oracle on a random 4x3 input") {
  Rng rng(9);
  Matrix input = random_matrix(4, 3, rng);
  Matrix filter = random_matrix(2, 3, rng);
  std::vector<Matrix> filters = {filter};
  std::vector<double> biases = {0.0};
  Matrix out = conv_full_width(input, filters, biases);
  REQUIRE(out.rows() == 3);
  REQUIRE(out.cols() == 1);
  for (std::size_t t = 0; t < 3; ++t) {
    CHECK(out(t, 0) ==
          doctest::Approx(conv_oracle_at(input, filter, 0.0, t))
              .epsilon(1e-12));
  }
}

TEST_CASE("conv rejects mismatched dimensions and short inputs") {
  Matrix input(4, 3);
  std::vector<double> one_bias = {0.0};
  std::vector<Matrix> wrong_dim = {Matrix(2, 5)};
  CHECK_THROWS_AS(conv_full_width(input, wrong_dim, one_bias),
                  DimensionError);
  std::vector<Matrix> too_wide = {Matrix(6, 3)};
  CHECK_THROWS_AS(conv_full_width(input, too_wide, one_bias),
                  WindowTooShortError);
  std::vector<Matrix> ok = {Matrix(2, 3)};
  std::vector<double> no_bias;
  CHECK_THROWS_AS(conv_full_width(input, ok, no_bias), DimensionError);
}

TEST_CASE("conv is linear in its input for fixed filters") {
  Rng rng(10);
  std::vector<Matrix> filters = {random_matrix(2, 3, rng),
                                 random_matrix(2, 3, rng)};
  std::vector<double> biases = {0.0, 0.0};
  for (int rep = 0; rep < 20; ++rep) {
    Matrix x = random_matrix(5, 3, rng);
    Matrix y = random_matrix(5, 3, rng);
    const double a = rng.uniform(-2.0, 2.0);
    const double b = rng.uniform(-2.0, 2.0);
    Matrix mix(5, 3);
    for (std::size_t i = 0; i < mix.values().size(); ++i) {
      mix.values()[i] = a * x.values()[i] + b * y.values()[i];
    }
    Matrix out_mix = conv_full_width(mix, filters, biases);
    Matrix out_x = conv_full_width(x, filters, biases);
    Matrix out_y = conv_full_width(y, filters, biases);
    for (std::size_t i = 0; i < out_mix.values().size(); ++i) {
      CHECK(std::abs(out_mix.values()[i] -
                     (a * out_x.values()[i] + b * out_y.values()[i])) <
            1e-10);
    }
  }
}

TEST_CASE("max pool of a single row is the row itself with zero trace") {
  Matrix fm(1, 3);
  fm(0, 0) = -1.0;
  fm(0, 1) = 2.0;
  fm(0, 2) = 0.5;
  PoolResult res = max_pool_over_time(fm);
  CHECK(res.values == std::vector<double>{-1.0, 2.0, 0.5});
  CHECK(res.argmax == std::vector<std::size_t>{0, 0, 0});
}

TEST_CASE("max pool picks the maximum and its row") {
  Matrix fm(3, 1);
  fm(0, 0) = 1.0;
  fm(1, 0) = 3.0;
  fm(2, 0) = 2.0;
  PoolResult res = max_pool_over_time(fm);
  CHECK(res.values[0] == 3.0);
  CHECK(res.argmax[0] == 1);
}

TEST_CASE("max pool ties break toward the lowest row") {
  Matrix fm(3, 1);
  fm(0, 0) = 2.0;
  fm(1, 0) = 2.0;
  fm(2, 0) = 1.0;
  CHECK(max_pool_over_time(fm).argmax[0] == 0);
}

TEST_CASE("max pool matches a linear-scan oracle on a random 7x5 matrix") {
  Rng rng(11);
  Matrix fm = random_matrix(7, 5, rng);
  PoolResult res = max_pool_over_time(fm);
  for (std::size_t k = 0; k < 5; ++k) {
    double best = fm(0, k);
    std::size_t best_row = 0;
    for (std::size_t t = 1; t < 7; ++t) {
      if (fm(t, k) > best) {
        best = fm(t, k);
        best_row = t;
      }
    }
    CHECK(res.values[k] == best);
    CHECK(res.argmax[k] == best_row);
  }
}

TEST_CASE("max pool values are invariant under row permutation") {
  Rng rng(12);
  Matrix fm = random_matrix(6, 4, rng);
  PoolResult base = max_pool_over_time(fm);
  std::vector<std::size_t> perm = {5, 0, 3, 1, 4, 2};
  Matrix shuffled(6, 4);
  for (std::size_t t = 0; t < 6; ++t) {
    for (std::size_t k = 0; k < 4; ++k) shuffled(t, k) = fm(perm[t], k);
  }
  PoolResult after = max_pool_over_time(shuffled);
  CHECK(after.values == base.values);
}

TEST_CASE("max pool rejects an empty feature map") {
  CHECK_THROWS_AS(max_pool_over_time(Matrix()), DimensionError);
}

TEST_CASE("sigmoid values") {
  CHECK(sigmoid(0.0) == 0.5);
  CHECK(sigmoid(2.0) == doctest::Approx(0.8807970779778823).epsilon(1e-15));
  Rng rng(13);
  for (int i = 0; i < 100; ++i) {
    const double x = rng.uniform(-20.0, 20.0);
    CHECK(sigmoid(x) + sigmoid(-x) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(sigmoid(x) > 0.0);
    CHECK(sigmoid(x) < 1.0);
  }
  // monotone
  double prev = sigmoid(-30.0);
  for (double x = -29.0; x <= 30.0; x += 1.0) {
    const double cur = sigmoid(x);
    CHECK(cur > prev);
    prev = cur;
  }
}

TEST_CASE("sigmoid backward at 0 with unit upstream is 0.25") {
  SigmoidOp op;
  std::vector<double> x = {0.0};
  op.forward(x);
  std::vector<double> up = {1.0};
  CHECK(op.backward(up)[0] == 0.25);
}

TEST_CASE("max pool backward routes upstream to the argmax rows only") {
  Matrix fm(4, 2);
  fm(2, 0) = 5.0;
  fm(1, 1) = 3.0;
  MaxPoolOp op;
  op.forward(fm);
  std::vector<double> up = {1.5, -2.0};
  Matrix g = op.backward(up);
  CHECK(g(2, 0) == 1.5);
  CHECK(g(1, 1) == -2.0);
  double total = 0.0;
  for (double v : g.values()) total += std::abs(v);
  CHECK(total == 3.5);
}

TEST_CASE("backward before forward is a state error") {
  ConvOp conv;
  std::vector<Matrix> filters = {Matrix(2, 3)};
  std::vector<Matrix> fgrads = {Matrix(2, 3)};
  std::vector<double> bgrads = {0.0};
  CHECK_THROWS_AS(conv.backward(Matrix(3, 1), filters, fgrads, bgrads),
                  StateError);
  MaxPoolOp pool;
  std::vector<double> up = {1.0};
  CHECK_THROWS_AS(pool.backward(up), StateError);
  CHECK_THROWS_AS(pool.trace(), StateError);
  SigmoidOp sig;
  CHECK_THROWS_AS(sig.backward(up), StateError);
  AffineOp affine;
  Matrix w(1, 1);
  Matrix wg(1, 1);
  CHECK_THROWS_AS(affine.backward(w, up, wg), StateError);
}

// Finite-difference check of the composed graph
//   loss = sum(affine(sigmoid(pool(conv(input)))))
// over every filter, bias, affine weight and input entry.
TEST_CASE("op-node gradients match central finite differences") {
  Rng rng(14);
  const std::size_t rows = 5, dim = 3, n_filters = 2, width = 2;
  Matrix input = random_matrix(rows, dim, rng);
  std::vector<Matrix> filters = {random_matrix(width, dim, rng),
                                 random_matrix(width, dim, rng)};
  std::vector<double> biases = {rng.uniform(-0.5, 0.5),
                                rng.uniform(-0.5, 0.5)};
  Matrix w = random_matrix(2, n_filters, rng);

  auto loss = [&]() {
    Matrix fm = conv_full_width(input, filters, biases);
    PoolResult pooled = max_pool_over_time(fm);
    std::vector<double> h = sigmoid(std::span<const double>(pooled.values));
    std::vector<double> y = matvec(w, h);
    double total = 0.0;
    for (double v : y) total += v;
    return total;
  };

  // analytic pass
  ConvOp conv;
  MaxPoolOp pool;
  SigmoidOp sig;
  AffineOp affine;
  Matrix fm = conv.forward(Matrix(input), filters, biases);
  PoolResult pooled = pool.forward(fm);
  std::vector<double> h = sig.forward(pooled.values);
  Matrix w_grad(w.rows(), w.cols());
  affine.forward(w, h);
  std::vector<double> dy(w.rows(), 1.0);
  std::vector<double> dh = affine.backward(w, dy, w_grad);
  std::vector<double> dpool = sig.backward(dh);
  Matrix dfm = pool.backward(dpool);
  std::vector<Matrix> filter_grads = {Matrix(width, dim), Matrix(width, dim)};
  std::vector<double> bias_grads = {0.0, 0.0};
  Matrix dinput = conv.backward(dfm, filters, filter_grads, bias_grads);

  const double eps = 1e-4;
  auto check_tensor = [&](std::span<double> params,
                          std::span<const double> analytic) {
    for (std::size_t i = 0; i < params.size(); ++i) {
      const double numeric = tu::central_diff(&params[i], eps, loss);
      CHECK(tu::rel_err(analytic[i], numeric) < 1e-4);
    }
  };
  for (std::size_t k = 0; k < n_filters; ++k) {
    check_tensor(filters[k].values(), filter_grads[k].values());
    const double numeric = tu::central_diff(&biases[k], eps, loss);
    CHECK(tu::rel_err(bias_grads[k], numeric) < 1e-4);
  }
  check_tensor(w.values(), w_grad.values());
  check_tensor(input.values(), dinput.values());
}
