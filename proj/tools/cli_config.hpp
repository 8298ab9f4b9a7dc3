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

#ifndef SEQCNN_TOOLS_CLI_CONFIG_HPP_
#define SEQCNN_TOOLS_CLI_CONFIG_HPP_

#include <string>

#include "seqcnn/model.hpp"
#include "seqcnn/trainer.hpp"

namespace seqcnn::cli {

// Merged run settings. The built-in defaults are the reference
// configuration:
// 50-dim embeddings, 100 feature maps, width-5 filters, context length 9,
// surrounding context 3, L2 1e-7, initial learning rate 0.02, 25 epochs
// with 10 at constant rate, bi-concat variant under the ranking loss.
struct RunConfig {
  HyperParams hp;
  TrainConfig train;

  void validate() const {
    hp.validate();
    train.validate();
  }
};

// Strict INI-style parser: sections [model], [loss], [train], [corpus];
// `key = value` lines; '#' or ';' comments. Unknown sections or keys are
// ConfigErrors, as are unparsable values.
RunConfig load_run_config(const std::string& path);

// Shared string mappings for config values and CLI flags.
Variant parse_variant(const std::string& name);
LossKind parse_loss(const std::string& name);
const char* loss_name(LossKind kind);

}  // namespace seqcnn::cli

#endif  // SEQCNN_TOOLS_CLI_CONFIG_HPP_
