// Microbenchmarks for the hot paths: convolution, per-token forward and
// forward+backward at the full default model size, and the chunk scorer.

#include <benchmark/benchmark.h>

#include "seqcnn/eval.hpp"
#include "seqcnn/loss.hpp"
#include "seqcnn/model.hpp"
#include "seqcnn/nn_math.hpp"
#include "seqcnn/rng.hpp"

using namespace seqcnn;

namespace {

Matrix random_matrix(std::size_t rows, std::size_t cols, Rng& rng) {
  Matrix m(rows, cols);
  for (double& v : m.values()) v = rng.uniform(-0.1, 0.1);
  return m;
}

// Default dimensions: 12x50 window, 100 filters of 5x50.
struct ConvFixture {
  Matrix input;
  std::vector<Matrix> filters;
  std::vector<double> biases;

  ConvFixture() {
    Rng rng(1);
    input = random_matrix(12, 50, rng);
    for (int k = 0; k < 100; ++k) filters.push_back(random_matrix(5, 50, rng));
    biases.assign(100, 0.0);
  }
};

struct ModelFixture {
  Vocab vocab;
  LabelSet labels;
  Model model;
  WindowInputs windows;

  static Vocab make_vocab() {
    Vocab v;
    for (int i = 0; i < 900; ++i) v.insert("w" + std::to_string(i));
    return v;
  }
  static LabelSet make_labels() {
    LabelSet l;
    for (int i = 0; i < 126; ++i) l.insert("B-slot" + std::to_string(i));
    return l;
  }

  ModelFixture()
      : vocab(make_vocab()),
        labels(make_labels()),
        model(HyperParams{}, vocab, labels, 42) {
    Rng rng(7);
    auto draw = [&](std::size_t len) {
      std::vector<std::int32_t> ids(len);
      for (auto& id : ids) {
        id = static_cast<std::int32_t>(rng.index(vocab.size()));
      }
      return ids;
    };
    windows.past = draw(model.hp().window_len());
    windows.future = draw(model.hp().window_len());
    windows.surrounding = draw(model.hp().surround_len());
  }
};

void BM_ConvFullWidth(benchmark::State& state) {
  ConvFixture f;
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        nn::conv_full_width(f.input, f.filters, f.biases));
  }
}
BENCHMARK(BM_ConvFullWidth);

void BM_TokenForward(benchmark::State& state) {
  ModelFixture f;
  for (auto _ : state) {
    benchmark::DoNotOptimize(f.model.forward(f.windows));
  }
}
BENCHMARK(BM_TokenForward);

void BM_TokenForwardBackwardUpdate(benchmark::State& state) {
  ModelFixture f;
  Gradients grads(f.model);
  std::vector<double> dscores(f.model.class_count(), 0.0);
  for (auto _ : state) {
    TokenForward fwd = f.model.forward(f.windows);
    const std::int32_t comp = best_competitor(fwd.scores, 0);
    LossGrad lg = ranking_loss(
        fwd.scores[0], fwd.scores[static_cast<std::size_t>(comp)], 2.0, 2.5,
        0.5, false);
    dscores[0] = lg.d_gold;
    dscores[static_cast<std::size_t>(comp)] = lg.d_comp;
    f.model.backward(fwd, dscores, grads);
    dscores[0] = 0.0;
    dscores[static_cast<std::size_t>(comp)] = 0.0;
    grads.clear();
  }
}
BENCHMARK(BM_TokenForwardBackwardUpdate);

void BM_ChunkF1(benchmark::State& state) {
  Rng rng(3);
  const std::vector<std::string> inventory = {"O",   "B-a", "I-a",
                                              "B-b", "I-b"};
  std::vector<std::vector<std::string>> gold(1000), pred(1000);
  for (std::size_t s = 0; s < 1000; ++s) {
    const std::size_t len = 5 + rng.index(10);
    for (std::size_t i = 0; i < len; ++i) {
      gold[s].push_back(inventory[rng.index(inventory.size())]);
      pred[s].push_back(rng.unit() < 0.8
                            ? gold[s].back()
                            : inventory[rng.index(inventory.size())]);
    }
  }
  for (auto _ : state) {
    benchmark::DoNotOptimize(chunk_f1(gold, pred));
  }
}
BENCHMARK(BM_ChunkF1);

}  // namespace

BENCHMARK_MAIN();
