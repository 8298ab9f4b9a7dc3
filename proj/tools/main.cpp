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

// seqcnn command-line front end: train, tag, eval, ablate, analyze.
//
// Exit codes: 0 success, 2 usage error, 3 config/data parse error,
// 4 runtime failure.

#include <iostream>
#include <optional>

#include "CLI11.hpp"
#include "commands.hpp"
#include "seqcnn/error.hpp"

namespace {

using seqcnn::cli::RunConfig;

constexpr int kExitUsage = 2;
constexpr int kExitParse = 3;
constexpr int kExitRuntime = 4;

// Flags shared by the training commands; values override the config file.
struct ConfigFlags {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> loss;
  std::optional<std::string> variant;
  std::optional<std::size_t> context_length;
  std::optional<std::size_t> surrounding;
  std::optional<double> gamma;
  std::optional<double> m_plus;
  std::optional<double> m_minus;
  std::optional<int> epochs;

  void attach(CLI::App* cmd) {
    cmd->add_option("--config", config_path,
                    "Config file (sections [model] [loss] [train] [corpus])");
    cmd->add_option("--seed", seed, "Random seed");
    cmd->add_option("--loss", loss, "Training objective: hinge | ranking");
    cmd->add_option("--variant", variant,
                    "Architecture: past | future | bi-add | bi-concat | "
                    "baseline");
    cmd->add_option("--context-length", context_length,
                    "Past/future context length n");
    cmd->add_option("--surrounding", surrounding,
                    "Surrounding context length cs");
    cmd->add_option("--gamma", gamma, "Ranking loss scale");
    cmd->add_option("--m-plus", m_plus, "Ranking margin for the gold class");
    cmd->add_option("--m-minus", m_minus,
                    "Ranking margin for the competitor class");
    cmd->add_option("--epochs", epochs, "Total training epochs");
  }

  RunConfig resolve() const {
    RunConfig config;
    if (!config_path.empty()) {
      config = seqcnn::cli::load_run_config(config_path);
    }
    if (seed) config.train.seed = *seed;
    if (loss) config.train.loss = seqcnn::cli::parse_loss(*loss);
    if (variant) config.hp.variant = seqcnn::cli::parse_variant(*variant);
    if (context_length) config.hp.context_len = *context_length;
    if (surrounding) config.hp.surround = *surrounding;
    if (gamma) config.hp.gamma = *gamma;
    if (m_plus) config.hp.margin_pos = *m_plus;
    if (m_minus) config.hp.margin_neg = *m_minus;
    if (epochs) {
      config.train.epochs_total = *epochs;
      if (config.train.epochs_constant_lr > *epochs) {
        config.train.epochs_constant_lr = *epochs;
      }
    }
    return config;
  }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bi-directional sequential CNN slot tagger"};
  app.require_subcommand(1);

  seqcnn::cli::TrainOptions train_opts;
  ConfigFlags train_flags;
  CLI::App* train = app.add_subcommand("train", "Train a tagger");
  train->add_option("--data", train_opts.data_path, "Training corpus")
      ->required();
  train->add_option("--test", train_opts.test_path,
                    "Optional test corpus scored after training");
  train->add_option("--out", train_opts.out_dir, "Output directory")
      ->required();
  train_flags.attach(train);

  seqcnn::cli::TagOptions tag_opts;
  CLI::App* tag = app.add_subcommand("tag", "Tag a corpus with a checkpoint");
  tag->add_option("--model", tag_opts.model_path, "Checkpoint file")
      ->required();
  tag->add_option("--data", tag_opts.data_path, "Input corpus")->required();
  tag->add_option("--out", tag_opts.out_path,
                  "Output file (default: stdout)");

  seqcnn::cli::EvalOptions eval_opts;
  CLI::App* eval = app.add_subcommand(
      "eval", "Chunk precision/recall/F1 of a tagged file");
  eval->add_option("--data", eval_opts.data_path,
                   "Tagged file (word gold predicted)")
      ->required();
  eval->add_option("--csv", eval_opts.csv_path, "Also write a CSV report");

  seqcnn::cli::AblateOptions ablate_opts;
  ConfigFlags ablate_flags;
  CLI::App* ablate =
      app.add_subcommand("ablate", "Train one model per ablation cell");
  ablate->add_option("--data", ablate_opts.data_path, "Training corpus")
      ->required();
  ablate->add_option("--test", ablate_opts.test_path, "Test corpus")
      ->required();
  ablate->add_option("--out", ablate_opts.out_dir, "Output directory")
      ->required();
  ablate
      ->add_option("--dimension", ablate_opts.dimension,
                   "variant-loss | context-length | surrounding")
      ->required();
  ablate_flags.attach(ablate);

  seqcnn::cli::AnalyzeOptions analyze_opts;
  CLI::App* analyze = app.add_subcommand(
      "analyze", "Most important n-grams per slot via max-pool traceback");
  analyze->add_option("--model", analyze_opts.model_path, "Checkpoint file")
      ->required();
  analyze->add_option("--data", analyze_opts.data_path, "Labeled corpus")
      ->required();
  analyze->add_option("--out", analyze_opts.out_path,
                      "CSV output (default: stdout)");
  analyze->add_option("--slots", analyze_opts.slots,
                      "Slot types (default: four most frequent)")
      ->delimiter(',');
  analyze->add_option("--k", analyze_opts.top_k,
                      "N-grams per slot (default 3)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (train->parsed()) {
      train_opts.config = train_flags.resolve();
      seqcnn::cli::cmd_train(train_opts);
    } else if (tag->parsed()) {
      seqcnn::cli::cmd_tag(tag_opts);
    } else if (eval->parsed()) {
      seqcnn::cli::cmd_eval(eval_opts);
    } else if (ablate->parsed()) {
      ablate_opts.config = ablate_flags.resolve();
      seqcnn::cli::cmd_ablate(ablate_opts);
    } else if (analyze->parsed()) {
      seqcnn::cli::cmd_analyze(analyze_opts);
    }
  } catch (const seqcnn::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitParse;
  } catch (const seqcnn::ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitParse;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
  return 0;
}
