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

#ifndef SEQCNN_TOOLS_COMMANDS_HPP_
#define SEQCNN_TOOLS_COMMANDS_HPP_

#include <string>
#include <vector>

#include "cli_config.hpp"

namespace seqcnn::cli {

struct TrainOptions {
  std::string data_path;
  std::string test_path;  // optional
  std::string out_dir;
  RunConfig config;
};

struct TagOptions {
  std::string model_path;
  std::string data_path;
  std::string out_path;  // empty = stdout
};

struct EvalOptions {
  std::string data_path;
  std::string csv_path;  // optional
};

struct AblateOptions {
  std::string data_path;
  std::string test_path;
  std::string out_dir;
  std::string dimension;  // variant-loss | context-length | surrounding
  RunConfig config;
};

struct AnalyzeOptions {
  std::string model_path;
  std::string data_path;
  std::string out_path;            // empty = stdout
  std::vector<std::string> slots;  // empty = four most frequent
  std::size_t top_k = 3;
};

void cmd_train(const TrainOptions& opts);
void cmd_tag(const TagOptions& opts);
void cmd_eval(const EvalOptions& opts);
void cmd_ablate(const AblateOptions& opts);
void cmd_analyze(const AnalyzeOptions& opts);

}  // namespace seqcnn::cli

#endif  // SEQCNN_TOOLS_COMMANDS_HPP_
