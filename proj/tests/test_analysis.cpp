#include <algorithm>
#include <set>
#include <vector>

#include "doctest.h"
#include "seqcnn/analysis.hpp"
#include "seqcnn/error.hpp"
#include "seqcnn/trainer.hpp"
#include "test_util.hpp"

using namespace seqcnn;
namespace tu = seqcnn::testutil;

namespace {

LabelSet two_labels() {
  LabelSet labels;
  labels.insert("B-x");
  labels.insert("B-y");
  return labels;
}

// Exhaustive enumeration oracle for the two-stage argmax.
AttributionTarget brute_force_target(const Model& model,
                                     const TokenForward& fwd,
                                     std::int32_t class_index) {
  const HyperParams& hp = model.hp();
  const ModelParams& p = model.params();
  const std::size_t s = hp.feature_maps;
  auto cv = p.class_vectors.row(static_cast<std::size_t>(class_index));
  std::size_t best_i = 0;
  double best_v = fwd.hidden[0] * cv[0];
  for (std::size_t i = 1; i < fwd.hidden.size(); ++i) {
    if (fwd.hidden[i] * cv[i] > best_v) {
      best_v = fwd.hidden[i] * cv[i];
      best_i = i;
    }
  }
  AttributionTarget t;
  t.hidden_unit = best_i;
  auto scan = [&](const Matrix& v, std::size_t row,
                  const std::vector<double>& c) {
    std::size_t best_j = 0;
    double best = v(row, 0) * c[0];
    for (std::size_t j = 1; j < c.size(); ++j) {
      if (v(row, j) * c[j] > best) {
        best = v(row, j) * c[j];
        best_j = j;
      }
    }
    return best_j;
  };
  switch (hp.variant) {
    case Variant::kPastOnly:
      t.branch = Branch::kPast;
      t.feature_map = scan(p.v_past, best_i, fwd.past.features);
      break;
    case Variant::kFutureOnly:
      t.branch = Branch::kFuture;
      t.feature_map = scan(p.v_future, best_i, fwd.future.features);
      break;
    case Variant::kBiConcat:
      if (best_i < s) {
        t.branch = Branch::kPast;
        t.feature_map = scan(p.v_past, best_i, fwd.past.features);
      } else {
        t.branch = Branch::kFuture;
        t.feature_map = scan(p.v_future, best_i - s, fwd.future.features);
      }
      break;
    case Variant::kBiAdd: {
      double past_sum = 0.0, future_sum = 0.0;
      for (std::size_t j = 0; j < s; ++j) {
        past_sum += p.v_past(best_i, j) * fwd.past.features[j];
        future_sum += p.v_future(best_i, j) * fwd.future.features[j];
      }
      if (past_sum >= future_sum) {
        t.branch = Branch::kPast;
        t.feature_map = scan(p.v_past, best_i, fwd.past.features);
      } else {
        t.branch = Branch::kFuture;
        t.feature_map = scan(p.v_future, best_i, fwd.future.features);
      }
      break;
    }
    case Variant::kWindowBaseline:
      break;
  }
  return t;
}

WindowInputs random_windows(const HyperParams& hp, std::size_t vocab_size,
                            Rng& rng) {
  WindowInputs w;
  auto draw = [&](std::size_t len) {
    std::vector<std::int32_t> ids(len);
    for (auto& id : ids) {
      id = static_cast<std::int32_t>(rng.index(vocab_size));
    }
    return ids;
  };
  w.past = draw(hp.window_len());
  w.future = draw(hp.window_len());
  w.surrounding = draw(hp.surround_len());
  return w;
}

// Corpus in which every B-city token sits in an identical window: each
// sentence opens "fly to paris now" and only the O tail varies.
Corpus patterned_corpus(std::size_t n_sentences) {
  Corpus corpus;
  Rng rng(99);
  for (std::size_t i = 0; i < n_sentences; ++i) {
    Sentence s;
    auto add = [&](const std::string& w, const std::string& l) {
      Token t;
      t.surface = w;
      t.label = l;
      s.tokens.push_back(t);
    };
    add("fly", "O");
    add("to", "O");
    add("paris", "B-city");
    add("now", "O");
    const std::size_t tail = rng.index(3);
    for (std::size_t j = 0; j < tail; ++j) {
      add("o" + std::to_string(rng.index(4)), "O");
    }
    corpus.sentences.push_back(std::move(s));
  }
  return corpus;
}

}  // namespace

TEST_CASE("top_feature_map basis case: one-hot hidden, one positive entry") {
  HyperParams hp = tu::micro_hp(Variant::kPastOnly);
  Vocab vocab;
  Model model(hp, vocab, two_labels(), 3);
  const std::size_t s = hp.feature_maps;
  TokenForward fwd;
  fwd.hidden.assign(s, 0.0);
  fwd.hidden[2] = 1.0;
  fwd.past.features.assign(s, 1.0);
  model.params().class_vectors.fill(0.0);
  model.params().class_vectors(0, 2) = 1.0;
  AttributionTarget t = top_feature_map(model, fwd, 0);
  CHECK(t.hidden_unit == 2);
  CHECK(t.branch == Branch::kPast);
}

TEST_CASE("top_feature_map with identity V routes to the strongest feature") {
  HyperParams hp = tu::micro_hp(Variant::kPastOnly);
  Vocab vocab;
  Model model(hp, vocab, two_labels(), 4);
  const std::size_t s = hp.feature_maps;
  model.params().v_past.fill(0.0);
  for (std::size_t i = 0; i < s; ++i) model.params().v_past(i, i) = 1.0;
  model.params().class_vectors.fill(0.0);
  model.params().class_vectors(0, 1) = 2.0;
  TokenForward fwd;
  fwd.hidden.assign(s, 0.5);
  fwd.past.features = {0.3, 0.9, 0.1, 0.2};
  AttributionTarget t = top_feature_map(model, fwd, 0);
  CHECK(t.hidden_unit == 1);
  // identity row 1 leaves only feature 1 with positive routed value
  CHECK(t.feature_map == 1);
}

TEST_CASE("bi-add branch choice follows the larger V c contribution") {
  HyperParams hp = tu::micro_hp(Variant::kBiAdd);
  Vocab vocab;
  Model model(hp, vocab, two_labels(), 5);
  const std::size_t s = hp.feature_maps;
  TokenForward fwd;
  fwd.hidden.assign(s, 0.5);
  fwd.hidden[0] = 0.9;
  model.params().class_vectors.fill(0.0);
  model.params().class_vectors(0, 0) = 1.0;
  fwd.past.features.assign(s, 1.0);
  fwd.future.features.assign(s, 1.0);
  model.params().v_past.fill(0.0);
  model.params().v_future.fill(0.0);
  model.params().v_past(0, 1) = 3.0;    // past term 3
  model.params().v_future(0, 2) = 2.0;  // future term 2
  AttributionTarget t = top_feature_map(model, fwd, 0);
  CHECK(t.branch == Branch::kPast);
  CHECK(t.feature_map == 1);
  model.params().v_future(0, 2) = 5.0;  // flip the winner
  t = top_feature_map(model, fwd, 0);
  CHECK(t.branch == Branch::kFuture);
  CHECK(t.feature_map == 2);
}

TEST_CASE("bi-concat branch ownership follows the winning half") {
  HyperParams hp = tu::micro_hp(Variant::kBiConcat);
  Vocab vocab;
  Model model(hp, vocab, two_labels(), 6);
  const std::size_t s = hp.feature_maps;
  TokenForward fwd;
  fwd.hidden.assign(2 * s, 0.1);
  fwd.hidden[s + 1] = 0.9;  // future half wins
  fwd.past.features.assign(s, 0.5);
  fwd.future.features.assign(s, 0.5);
  model.params().class_vectors.fill(1.0);
  AttributionTarget t = top_feature_map(model, fwd, 0);
  CHECK(t.branch == Branch::kFuture);
  CHECK(t.hidden_unit == s + 1);
}

TEST_CASE("top_feature_map rejects the baseline and bad classes") {
  HyperParams hp = tu::micro_hp(Variant::kWindowBaseline);
  Vocab vocab;
  Model model(hp, vocab, two_labels(), 7);
  TokenForward fwd;
  fwd.hidden.assign(hp.feature_maps, 0.5);
  CHECK_THROWS_AS(top_feature_map(model, fwd, 0), Error);

  HyperParams hp2 = tu::micro_hp(Variant::kPastOnly);
  Model model2(hp2, vocab, two_labels(), 8);
  TokenForward fwd2;
  fwd2.hidden.assign(hp2.feature_maps, 0.5);
  fwd2.past.features.assign(hp2.feature_maps, 0.5);
  CHECK_THROWS_AS(top_feature_map(model2, fwd2, -1), IndexError);
  CHECK_THROWS_AS(top_feature_map(model2, fwd2, 99), IndexError);
}

TEST_CASE("top_feature_map agrees with exhaustive enumeration") {
  Rng rng(9);
  Vocab vocab;
  for (int i = 0; i < 10; ++i) vocab.insert("w" + std::to_string(i));
  for (Variant variant : {Variant::kPastOnly, Variant::kFutureOnly,
                          Variant::kBiAdd, Variant::kBiConcat}) {
    CAPTURE(variant_name(variant));
    for (int rep = 0; rep < 200; ++rep) {
      HyperParams hp = tu::micro_hp(variant);
      hp.feature_maps = 1 + rng.index(8);  // s <= 8
      Model model(hp, vocab, two_labels(), rng.next());
      TokenForward fwd =
          model.forward(random_windows(hp, vocab.size(), rng));
      const std::int32_t cls = static_cast<std::int32_t>(rng.index(2));
      AttributionTarget got = top_feature_map(model, fwd, cls);
      AttributionTarget want = brute_force_target(model, fwd, cls);
      CHECK(got.branch == want.branch);
      CHECK(got.hidden_unit == want.hidden_unit);
      CHECK(got.feature_map == want.feature_map);
    }
  }
}

TEST_CASE("trace_ngram returns the pooled window slice") {
  TokenForward fwd;
  fwd.windows.past = {10, 11, 12, 13, 14};

  SUBCASE("single-position feature map covers the whole filter-width gram") {
    Matrix fm(1, 2);
    fm(0, 0) = 1.0;
    fm(0, 1) = 2.0;
    fwd.past.pool.forward(fm);
    // L' = 1 with a window of exactly |f| words
    fwd.windows.past = {10, 11, 12};
    auto ids = trace_ngram(fwd, Branch::kPast, 1, 3);
    CHECK(ids == std::vector<std::int32_t>{10, 11, 12});
  }

  SUBCASE("pooled row 0 gives the window prefix") {
    Matrix fm(3, 1);
    fm(0, 0) = 9.0;
    fm(1, 0) = 1.0;
    fm(2, 0) = 1.0;
    fwd.past.pool.forward(fm);
    auto ids = trace_ngram(fwd, Branch::kPast, 0, 3);
    CHECK(ids == std::vector<std::int32_t>{10, 11, 12});
  }

  SUBCASE("an unpooled branch is a state error") {
    CHECK_THROWS_AS(trace_ngram(fwd, Branch::kPast, 0, 3), StateError);
  }
}

TEST_CASE("trace_ngram matches a recompute-and-scan oracle") {
  HyperParams hp = tu::micro_hp(Variant::kPastOnly);
  Vocab vocab;
  for (int i = 0; i < 12; ++i) vocab.insert("w" + std::to_string(i));
  Model model(hp, vocab, two_labels(), 10);
  Rng rng(11);
  for (int rep = 0; rep < 50; ++rep) {
    WindowInputs w = random_windows(hp, vocab.size(), rng);
    TokenForward fwd = model.forward(w);
    const std::size_t j = rng.index(hp.feature_maps);
    auto ids = trace_ngram(fwd, Branch::kPast, j, hp.filter_width);
    // oracle: recompute the convolution column and scan for its max row
    Matrix in = embed_window(w.past, model.params().embeddings);
    double best = -1e300;
    std::size_t best_row = 0;
    for (std::size_t t = 0; t + hp.filter_width <= in.rows(); ++t) {
      double acc = model.params().past_bias[j];
      for (std::size_t r = 0; r < hp.filter_width; ++r) {
        acc += dot(in.row(t + r), model.params().past_filters[j].row(r));
      }
      if (acc > best) {
        best = acc;
        best_row = t;
      }
    }
    std::vector<std::int32_t> expected(
        w.past.begin() + static_cast<std::ptrdiff_t>(best_row),
        w.past.begin() + static_cast<std::ptrdiff_t>(best_row +
                                                     hp.filter_width));
    CHECK(ids == expected);
  }
}

TEST_CASE("render_ngram shows pad surfaces") {
  Vocab vocab;
  vocab.insert("hello");
  std::vector<std::int32_t> ids = {Vocab::kPadBegin, 3, Vocab::kPadEnd};
  CHECK(render_ngram(vocab, ids) == "sentence_begin hello sentence_end");
}

TEST_CASE("rank_ngrams surfaces the co-occurring pattern first") {
  Corpus raw = patterned_corpus(30);
  HyperParams hp = tu::micro_hp();
  hp.emb_dim = 12;
  hp.feature_maps = 12;
  hp.lr0 = 0.05;
  TrainConfig config;
  config.epochs_total = 60;
  config.epochs_constant_lr = 60;
  config.seed = 12;
  auto [model, report] = train_final(raw, hp, config);
  Corpus indexed = index_corpus(raw, model.vocab(), model.labels());
  REQUIRE(token_accuracy(model, indexed) == 1.0);

  auto ranked = rank_ngrams(model, indexed, "city", 3);
  REQUIRE(!ranked.empty());
  // identical windows for every city token -> a single attribution key
  CHECK(ranked.size() == 1);
  CHECK(ranked[0].frequency == 30);
  CHECK(ranked[0].slot == "city");

  // membership: the n-gram occurs verbatim in a window of a correct token
  std::set<std::string> window_grams;
  for (const Sentence& s : indexed.sentences) {
    for (std::size_t t = 0; t < s.tokens.size(); ++t) {
      if (s.tokens[t].label != "B-city") continue;
      WindowInputs w = model.windows_for(s, t);
      for (const auto& win : {w.past, w.future}) {
        for (std::size_t i = 0; i + hp.filter_width <= win.size(); ++i) {
          window_grams.insert(render_ngram(
              model.vocab(),
              std::span<const std::int32_t>(win).subspan(i,
                                                         hp.filter_width)));
        }
      }
    }
  }
  CHECK(window_grams.count(ranked[0].ngram) == 1);
}

TEST_CASE("rank_ngrams frequency totals stay within the correct-token count") {
  Corpus raw = tu::make_separable_corpus(40, 500);
  HyperParams hp = tu::micro_hp();
  hp.emb_dim = 12;
  hp.feature_maps = 12;
  hp.lr0 = 0.05;
  TrainConfig config;
  config.epochs_total = 80;
  config.epochs_constant_lr = 80;
  config.seed = 7;
  auto [model, report] = train_final(raw, hp, config);
  Corpus indexed = index_corpus(raw, model.vocab(), model.labels());

  std::size_t correct_color_tokens = 0;
  std::vector<std::vector<std::string>> predicted =
      tag_corpus(model, indexed);
  for (std::size_t s = 0; s < indexed.sentences.size(); ++s) {
    for (std::size_t t = 0; t < indexed.sentences[s].tokens.size(); ++t) {
      const Token& tok = indexed.sentences[s].tokens[t];
      if (tok.label == predicted[s][t] && tok.label.size() > 2 &&
          tok.label.substr(2) == "color") {
        ++correct_color_tokens;
      }
    }
  }
  auto ranked = rank_ngrams(model, indexed, "color", 1000);
  std::size_t total = 0;
  for (const NgramAttribution& a : ranked) total += a.frequency;
  CHECK(total <= correct_color_tokens);
  CHECK(total > 0);
}

TEST_CASE("rank_ngrams boundary cases") {
  Corpus raw = patterned_corpus(5);
  HyperParams hp = tu::micro_hp();
  TrainConfig config;
  config.epochs_total = 1;
  config.epochs_constant_lr = 1;
  auto [model, report] = train_final(raw, hp, config);
  Corpus indexed = index_corpus(raw, model.vocab(), model.labels());
  CHECK(rank_ngrams(model, indexed, "city", 0).empty());
  CHECK(rank_ngrams(model, indexed, "no_such_slot", 5).empty());
}

TEST_CASE("slots are ordered by gold chunk frequency") {
  Corpus corpus;
  auto add_sentence = [&](std::initializer_list<const char*> labels) {
    Sentence s;
    int i = 0;
    for (const char* l : labels) {
      Token t;
      t.surface = "w" + std::to_string(i++);
      t.label = l;
      s.tokens.push_back(t);
    }
    corpus.sentences.push_back(std::move(s));
  };
  add_sentence({"B-a", "O", "B-b"});
  add_sentence({"B-b", "I-b", "B-c"});
  add_sentence({"B-b", "O", "B-a"});
  auto slots = slots_by_frequency(corpus);
  REQUIRE(slots.size() == 3);
  CHECK(slots[0] == "b");  // 3 chunks
  CHECK(slots[1] == "a");  // 2 chunks
  CHECK(slots[2] == "c");  // 1 chunk
}
