#include <cmath>
#include <vector>

#include "doctest.h"
#include "seqcnn/loss.hpp"
#include "seqcnn/rng.hpp"
#include "test_util.hpp"

using namespace seqcnn;
namespace tu = seqcnn::testutil;

TEST_CASE("best competitor excludes the gold class") {
  std::vector<double> scores = {5.0, 1.0, 3.0};
  CHECK(best_competitor(scores, 0) == 2);
}

TEST_CASE("best competitor for gold O searches all classes") {
  std::vector<double> scores = {-2.0, -1.0};
  CHECK(best_competitor(scores, -1) == 1);
}

TEST_CASE("best competitor matches a linear-scan oracle") {
  Rng rng(3);
  for (int rep = 0; rep < 200; ++rep) {
    const std::size_t n = 2 + rng.index(8);
    std::vector<double> scores(n);
    for (double& v : scores) v = rng.uniform(-3.0, 3.0);
    const std::int32_t gold =
        static_cast<std::int32_t>(rng.index(n + 1)) - 1;  // -1 = O
    std::int32_t expected = -1;
    for (std::size_t c = 0; c < n; ++c) {
      if (static_cast<std::int32_t>(c) == gold) continue;
      if (expected < 0 ||
          scores[c] > scores[static_cast<std::size_t>(expected)]) {
        expected = static_cast<std::int32_t>(c);
      }
    }
    CHECK(best_competitor(scores, gold) == expected);
  }
}

TEST_CASE("best competitor returns -1 when no competitor exists") {
  std::vector<double> one = {0.7};
  CHECK(best_competitor(one, 0) == -1);
  std::vector<double> none;
  CHECK(best_competitor(none, -1) == -1);
}

TEST_CASE("hinge boundary cases are exact") {
  CHECK(hinge_loss(2.0, 1.0, false).value == 0.0);     // margin exactly met
  CHECK(hinge_loss(0.5, 0.5, false).value == 1.0);     // zero margin
  CHECK(hinge_loss(0.2, 0.5, false).value == 1.0 - 0.2 + 0.5);
  LossGrad violated = hinge_loss(0.2, 0.5, false);
  CHECK(violated.d_gold == -1.0);
  CHECK(violated.d_comp == 1.0);
  LossGrad satisfied = hinge_loss(3.0, 1.0, false);
  CHECK(satisfied.d_gold == 0.0);
  CHECK(satisfied.d_comp == 0.0);
}

TEST_CASE("hinge for gold O pushes only the competitor") {
  LossGrad lg = hinge_loss(0.0, 0.5, true);
  CHECK(lg.value == 1.5);
  CHECK(lg.d_gold == 0.0);
  CHECK(lg.d_comp == 1.0);
  CHECK(hinge_loss(0.0, -1.5, true).value == 0.0);
}

TEST_CASE("ranking loss closed forms") {
  const double gamma = 2.0, mp = 2.5, mn = 0.5;
  // both exponents zero -> 2 ln 2
  CHECK(ranking_loss(mp, -mn, gamma, mp, mn, false).value ==
        doctest::Approx(1.3862943611198906).epsilon(1e-14));
  // gold O, single summand with zero exponent -> ln 2
  CHECK(ranking_loss(0.0, -mn, gamma, mp, mn, true).value ==
        doctest::Approx(0.6931471805599453).epsilon(1e-14));
  // direct scalar evaluation
  CHECK(ranking_loss(3.0, -1.0, gamma, mp, mn, false).value ==
        doctest::Approx(0.6265233750364457).epsilon(1e-12));
}

TEST_CASE("ranking loss is overflow-safe for large scores") {
  LossGrad big = ranking_loss(-1e6, 1e6, 2.0, 2.5, 0.5, false);
  CHECK(std::isfinite(big.value));
  CHECK(big.value > 1e6);
  LossGrad small = ranking_loss(1e6, -1e6, 2.0, 2.5, 0.5, false);
  CHECK(std::isfinite(small.value));
  CHECK(small.value >= 0.0);
}

TEST_CASE("ranking loss is positive, monotone, with matching gradient signs") {
  Rng rng(5);
  for (int rep = 0; rep < 200; ++rep) {
    const double g = rng.uniform(0.5, 4.0);
    const double mp = rng.uniform(0.0, 3.0);
    const double mn = rng.uniform(0.0, 3.0);
    const double sg = rng.uniform(-5.0, 5.0);
    const double sc = rng.uniform(-5.0, 5.0);
    LossGrad lg = ranking_loss(sg, sc, g, mp, mn, false);
    CHECK(lg.value > 0.0);
    CHECK(lg.d_gold < 0.0);  // decreasing in s_gold
    CHECK(lg.d_comp > 0.0);  // increasing in s_comp
    const double step = 0.1;
    CHECK(ranking_loss(sg + step, sc, g, mp, mn, false).value < lg.value);
    CHECK(ranking_loss(sg, sc + step, g, mp, mn, false).value > lg.value);
  }
}

TEST_CASE("gold O ranking has exactly zero gradient for the gold score") {
  LossGrad lg = ranking_loss(1.23, 0.5, 2.0, 2.5, 0.5, true);
  CHECK(lg.d_gold == 0.0);
  CHECK(lg.d_comp > 0.0);
}

TEST_CASE("loss gradients pass scalar finite-difference checks") {
  Rng rng(6);
  const double eps = 1e-6;
  for (int rep = 0; rep < 50; ++rep) {
    double sg = rng.uniform(-3.0, 3.0);
    double sc = rng.uniform(-3.0, 3.0);
    const double g = rng.uniform(0.5, 4.0);
    const double mp = rng.uniform(0.5, 3.0);
    const double mn = rng.uniform(0.0, 2.0);

    LossGrad an = ranking_loss(sg, sc, g, mp, mn, false);
    double num_gold = tu::central_diff(&sg, eps, [&] {
      return ranking_loss(sg, sc, g, mp, mn, false).value;
    });
    double num_comp = tu::central_diff(&sc, eps, [&] {
      return ranking_loss(sg, sc, g, mp, mn, false).value;
    });
    CHECK(tu::rel_err(an.d_gold, num_gold) < 1e-6);
    CHECK(tu::rel_err(an.d_comp, num_comp) < 1e-6);

    // hinge, away from the kink
    if (std::abs(1.0 - sg + sc) > 1e-3) {
      LossGrad ah = hinge_loss(sg, sc, false);
      double hg = tu::central_diff(&sg, eps, [&] {
        return hinge_loss(sg, sc, false).value;
      });
      double hc = tu::central_diff(&sc, eps, [&] {
        return hinge_loss(sg, sc, false).value;
      });
      CHECK(tu::rel_err(ah.d_gold, hg) < 1e-6);
      CHECK(tu::rel_err(ah.d_comp, hc) < 1e-6);
    }
  }
}

TEST_CASE("l2 penalty sums squared weights only") {
  Vocab vocab;
  LabelSet labels;
  labels.insert("B-x");
  labels.insert("B-y");
  HyperParams hp = tu::micro_hp(Variant::kBiConcat);
  Model model(hp, vocab, labels, 99);

  CHECK(l2_penalty(model.params(), hp, 0.0) == 0.0);

  // single-weight arithmetic: zero everything, set one weight to 3
  for (TensorRef& ref : tensor_refs(model.params(), hp)) {
    for (double& v : ref.values) v = 0.0;
  }
  model.params().u(0, 0) = 3.0;
  CHECK(l2_penalty(model.params(), hp, 1.0) == 9.0);

  // summation oracle over random parameters
  Rng rng(7);
  double expected = 0.0;
  for (TensorRef& ref : tensor_refs(model.params(), hp)) {
    for (double& v : ref.values) v = rng.uniform(-1.0, 1.0);
  }
  for (const TensorRef& ref : tensor_refs(model.params(), hp)) {
    if (ref.kind != ParamKind::kWeight) continue;
    for (double v : ref.values) expected += v * v;
  }
  const double lambda = 0.37;
  CHECK(l2_penalty(model.params(), hp, lambda) ==
        doctest::Approx(lambda * expected).epsilon(1e-12));
  // embeddings and biases are exempt
  model.params().embeddings(0, 0) = 100.0;
  model.params().past_bias[0] = 100.0;
  CHECK(l2_penalty(model.params(), hp, lambda) ==
        doctest::Approx(lambda * expected).epsilon(1e-12));
}
