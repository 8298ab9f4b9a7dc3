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

#include "commands.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "seqcnn/analysis.hpp"
#include "seqcnn/error.hpp"
#include "seqcnn/eval.hpp"

namespace seqcnn::cli {

namespace {

namespace fs = std::filesystem;

void ensure_dir(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create output directory: " + dir);
}

std::string path_join(const std::string& dir, const std::string& name) {
  return (fs::path(dir) / name).string();
}

void write_train_report(const std::string& path, const TrainReport& report) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write train report: " + path);
  out << "epoch,learning_rate,mean_loss\n";
  char buf[128];
  for (std::size_t e = 0; e < report.mean_loss.size(); ++e) {
    std::snprintf(buf, sizeof(buf), "%zu,%.10g,%.10g\n", e + 1,
                  report.learning_rate[e], report.mean_loss[e]);
    out << buf;
  }
}

// Tags an indexed corpus and writes word / gold / predicted columns.
ChunkF1Report tag_and_score(const Model& model, const Corpus& indexed,
                            const std::string& tagged_path) {
  std::vector<std::vector<std::string>> predicted =
      tag_corpus(model, indexed);
  if (!tagged_path.empty()) {
    std::ofstream out(tagged_path);
    if (!out) throw IoError("cannot write tagged file: " + tagged_path);
    for (std::size_t s = 0; s < indexed.sentences.size(); ++s) {
      const Sentence& sentence = indexed.sentences[s];
      for (std::size_t t = 0; t < sentence.tokens.size(); ++t) {
        out << sentence.tokens[t].surface << ' ' << sentence.tokens[t].label
            << ' ' << predicted[s][t] << '\n';
      }
      out << '\n';
    }
  }
  std::vector<std::vector<std::string>> gold(indexed.sentences.size());
  for (std::size_t s = 0; s < indexed.sentences.size(); ++s) {
    for (const Token& tok : indexed.sentences[s].tokens) {
      gold[s].push_back(tok.label);
    }
  }
  return chunk_f1(gold, predicted);
}

// One ablation cell: train on the training corpus, score F1 on the test set.
double run_cell(const Corpus& train_corpus, const Corpus& test_corpus,
                const HyperParams& hp, const TrainConfig& train) {
  auto [model, report] = train_final(train_corpus, hp, train);
  Corpus indexed = index_corpus(test_corpus, model.vocab(), model.labels());
  return tag_and_score(model, indexed, "").f1();
}

std::string csv_quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

}  // namespace

void cmd_train(const TrainOptions& opts) {
  opts.config.validate();
  Corpus corpus = load_conll(opts.data_path);
  std::cout << "training on " << opts.data_path << " ("
            << corpus.sentences.size() << " sentences, "
            << corpus.token_count() << " tokens)\n"
            << "variant " << variant_name(opts.config.hp.variant) << ", "
            << loss_name(opts.config.train.loss) << " loss, seed "
            << opts.config.train.seed << "\n";

  auto [model, report] = train_final(corpus, opts.config.hp,
                                     opts.config.train);
  ensure_dir(opts.out_dir);
  const std::string model_path = path_join(opts.out_dir, "model.bin");
  model.save(model_path);
  write_train_report(path_join(opts.out_dir, "train_report.csv"), report);
  std::cout << "final mean loss " << report.mean_loss.back() << "\n"
            << "checkpoint written to " << model_path << "\n";

  if (!opts.test_path.empty()) {
    Corpus test = load_conll(opts.test_path);
    Corpus indexed = index_corpus(test, model.vocab(), model.labels());
    ChunkF1Report f1 = tag_and_score(
        model, indexed, path_join(opts.out_dir, "test_tagged.txt"));
    std::cout << format_report(f1);
    std::ofstream csv(path_join(opts.out_dir, "test_report.csv"));
    csv << report_csv(f1);
  }
}

void cmd_tag(const TagOptions& opts) {
  Model model = Model::load(opts.model_path);

  // Lenient input: a bare word per line is allowed (no gold column), and an
  // empty file tags to an empty file.
  std::ifstream in(opts.data_path);
  if (!in) throw IoError("cannot open input file: " + opts.data_path);
  Corpus corpus;
  Sentence current;
  std::string line;
  while (std::getline(in, line)) {
    std::istringstream ss(line);
    std::vector<std::string> fields;
    std::string field;
    while (ss >> field) fields.push_back(std::move(field));
    if (fields.empty()) {
      if (!current.tokens.empty()) {
        corpus.sentences.push_back(std::move(current));
        current = Sentence{};
      }
      continue;
    }
    Token tok;
    tok.surface = fields.front();
    if (fields.size() > 1) tok.label = fields.back();
    current.tokens.push_back(std::move(tok));
  }
  if (!current.tokens.empty()) corpus.sentences.push_back(std::move(current));

  Corpus indexed = index_corpus(corpus, model.vocab(), model.labels());
  std::vector<std::vector<std::string>> predicted =
      tag_corpus(model, indexed);

  std::ofstream file_out;
  if (!opts.out_path.empty()) {
    file_out.open(opts.out_path);
    if (!file_out) throw IoError("cannot write output: " + opts.out_path);
  }
  std::ostream& out = opts.out_path.empty() ? std::cout : file_out;
  for (std::size_t s = 0; s < indexed.sentences.size(); ++s) {
    const Sentence& sentence = indexed.sentences[s];
    for (std::size_t t = 0; t < sentence.tokens.size(); ++t) {
      const Token& tok = sentence.tokens[t];
      out << tok.surface;
      if (!tok.label.empty()) out << ' ' << tok.label;
      out << ' ' << predicted[s][t] << '\n';
    }
    out << '\n';
  }
}

void cmd_eval(const EvalOptions& opts) {
  ChunkF1Report report = chunk_f1_file(opts.data_path);
  std::cout << format_report(report);
  if (!opts.csv_path.empty()) {
    std::ofstream out(opts.csv_path);
    if (!out) throw IoError("cannot write csv: " + opts.csv_path);
    out << report_csv(report);
  }
}

void cmd_ablate(const AblateOptions& opts) {
  opts.config.validate();
  Corpus train_corpus = load_conll(opts.data_path);
  Corpus test_corpus = load_conll(opts.test_path);
  ensure_dir(opts.out_dir);

  struct Cell {
    std::string name;
    HyperParams hp;
    TrainConfig train;
  };
  std::vector<Cell> cells;
  const HyperParams& base_hp = opts.config.hp;
  const TrainConfig& base_train = opts.config.train;

  if (opts.dimension == "variant-loss") {
    for (LossKind loss : {LossKind::kHinge, LossKind::kRanking}) {
      Cell cell{std::string(loss_name(loss)) + "/baseline(surrounding=5)",
                base_hp, base_train};
      cell.hp.variant = Variant::kWindowBaseline;
      cell.hp.surround = 5;
      cell.hp.use_current_word = true;
      cell.train.loss = loss;
      cells.push_back(std::move(cell));
    }
    for (LossKind loss : {LossKind::kHinge, LossKind::kRanking}) {
      for (Variant variant : {Variant::kPastOnly, Variant::kFutureOnly,
                              Variant::kBiAdd, Variant::kBiConcat}) {
        Cell cell{std::string(loss_name(loss)) + "/" + variant_name(variant),
                  base_hp, base_train};
        cell.hp.variant = variant;
        cell.train.loss = loss;
        cells.push_back(std::move(cell));
      }
    }
  } else if (opts.dimension == "context-length") {
    for (std::size_t n : {5, 7, 9, 10, 11}) {
      Cell cell{"context=" + std::to_string(n), base_hp, base_train};
      cell.hp.context_len = n;
      cells.push_back(std::move(cell));
    }
  } else if (opts.dimension == "surrounding") {
    {
      Cell cell{"- current word", base_hp, base_train};
      cell.hp.use_current_word = false;
      cells.push_back(std::move(cell));
    }
    {
      Cell cell{"+ current word w/o context", base_hp, base_train};
      cell.hp.surround = 0;
      cells.push_back(std::move(cell));
    }
    for (std::size_t cs : {1, 2, 3, 4}) {
      Cell cell{"+ surrounding context = " + std::to_string(cs), base_hp,
                base_train};
      cell.hp.surround = cs;
      cells.push_back(std::move(cell));
    }
  } else {
    throw ConfigError("unknown ablation dimension '" + opts.dimension +
                      "' (expected variant-loss, context-length or "
                      "surrounding)");
  }

  const std::string csv_path =
      path_join(opts.out_dir, "ablation_" + opts.dimension + ".csv");
  std::ofstream csv(csv_path);
  if (!csv) throw IoError("cannot write " + csv_path);
  csv << "cell,f1\n";
  std::printf("%-36s %8s\n", "cell", "F1");
  for (const Cell& cell : cells) {
    cell.hp.validate();
    const double f1 = run_cell(train_corpus, test_corpus, cell.hp,
                               cell.train);
    std::printf("%-36s %8.2f\n", cell.name.c_str(), f1);
    std::fflush(stdout);
    char buf[64];
    std::snprintf(buf, sizeof(buf), ",%.2f\n", f1);
    csv << csv_quote(cell.name) << buf;
  }
  std::cout << "table written to " << csv_path << "\n";
}

void cmd_analyze(const AnalyzeOptions& opts) {
  Model model = Model::load(opts.model_path);
  Corpus corpus = load_conll(opts.data_path);
  Corpus indexed = index_corpus(corpus, model.vocab(), model.labels());

  std::vector<std::string> available = slots_by_frequency(indexed);
  std::vector<std::string> slots = opts.slots;
  if (slots.empty()) {
    // the four most frequent slots of the evaluated data
    slots.assign(available.begin(),
                 available.begin() +
                     std::min<std::size_t>(4, available.size()));
  } else {
    for (const std::string& slot : slots) {
      if (std::find(available.begin(), available.end(), slot) ==
          available.end()) {
        throw ConfigError("slot '" + slot +
                          "' does not occur in the corpus");
      }
    }
  }

  std::ofstream file_out;
  if (!opts.out_path.empty()) {
    file_out.open(opts.out_path);
    if (!file_out) throw IoError("cannot write output: " + opts.out_path);
  }
  std::ostream& out = opts.out_path.empty() ? std::cout : file_out;
  out << "slot,ngram,frequency,branch\n";
  for (const std::string& slot : slots) {
    for (const NgramAttribution& a :
         rank_ngrams(model, indexed, slot, opts.top_k)) {
      out << csv_quote(a.slot) << ',' << csv_quote(a.ngram) << ','
          << a.frequency << ',' << branch_name(a.branch) << '\n';
    }
  }
}

}  // namespace seqcnn::cli
