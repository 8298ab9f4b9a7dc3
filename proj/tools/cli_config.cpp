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

#include "cli_config.hpp"

#include <fstream>

#include "seqcnn/error.hpp"

namespace seqcnn::cli {

namespace {

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r");
  if (begin == std::string::npos) return {};
  const auto end = s.find_last_not_of(" \t\r");
  return s.substr(begin, end - begin + 1);
}

std::size_t parse_count(const std::string& key, const std::string& value) {
  try {
    const long long v = std::stoll(value);
    if (v < 0) throw ConfigError(key + " must be non-negative");
    return static_cast<std::size_t>(v);
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception&) {
    throw ConfigError("cannot parse integer for " + key + ": '" + value +
                      "'");
  }
}

double parse_real(const std::string& key, const std::string& value) {
  try {
    std::size_t used = 0;
    const double v = std::stod(value, &used);
    if (used != value.size()) throw std::invalid_argument(value);
    return v;
  } catch (const std::exception&) {
    throw ConfigError("cannot parse number for " + key + ": '" + value + "'");
  }
}

bool parse_bool(const std::string& key, const std::string& value) {
  if (value == "true" || value == "1" || value == "yes") return true;
  if (value == "false" || value == "0" || value == "no") return false;
  throw ConfigError("cannot parse boolean for " + key + ": '" + value + "'");
}

}  // namespace

Variant parse_variant(const std::string& name) {
  if (name == "past") return Variant::kPastOnly;
  if (name == "future") return Variant::kFutureOnly;
  if (name == "bi-add") return Variant::kBiAdd;
  if (name == "bi-concat") return Variant::kBiConcat;
  if (name == "baseline") return Variant::kWindowBaseline;
  throw ConfigError("unknown variant '" + name +
                    "' (expected past, future, bi-add, bi-concat or "
                    "baseline)");
}

LossKind parse_loss(const std::string& name) {
  if (name == "hinge") return LossKind::kHinge;
  if (name == "ranking") return LossKind::kRanking;
  throw ConfigError("unknown loss '" + name +
                    "' (expected hinge or ranking)");
}

const char* loss_name(LossKind kind) {
  return kind == LossKind::kHinge ? "hinge" : "ranking";
}

RunConfig load_run_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config file: " + path);

  RunConfig config;
  std::string section;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string text = trim(line);
    if (text.empty() || text[0] == '#' || text[0] == ';') continue;
    if (text.front() == '[') {
      if (text.back() != ']') {
        throw ConfigError("unterminated section header at line " +
                          std::to_string(line_no));
      }
      section = trim(text.substr(1, text.size() - 2));
      if (section != "model" && section != "loss" && section != "train" &&
          section != "corpus") {
        throw ConfigError("unknown config section [" + section + "]");
      }
      continue;
    }
    const auto eq = text.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("expected key = value at line " +
                        std::to_string(line_no));
    }
    const std::string key = trim(text.substr(0, eq));
    const std::string value = trim(text.substr(eq + 1));
    if (section.empty()) {
      throw ConfigError("key '" + key + "' appears before any section");
    }

    HyperParams& hp = config.hp;
    TrainConfig& train = config.train;
    if (section == "model") {
      if (key == "embedding_dim") {
        hp.emb_dim = parse_count(key, value);
      } else if (key == "feature_maps") {
        hp.feature_maps = parse_count(key, value);
      } else if (key == "filter_width") {
        hp.filter_width = parse_count(key, value);
      } else if (key == "context_length") {
        hp.context_len = parse_count(key, value);
      } else if (key == "pad_length") {
        hp.pad_len = parse_count(key, value);
      } else if (key == "surrounding_context") {
        hp.surround = parse_count(key, value);
      } else if (key == "variant") {
        hp.variant = parse_variant(value);
      } else if (key == "use_current_word") {
        hp.use_current_word = parse_bool(key, value);
      } else {
        throw ConfigError("unknown key '" + key + "' in section [model]");
      }
    } else if (section == "loss") {
      if (key == "objective") {
        train.loss = parse_loss(value);
      } else if (key == "gamma") {
        hp.gamma = parse_real(key, value);
      } else if (key == "margin_positive") {
        hp.margin_pos = parse_real(key, value);
      } else if (key == "margin_negative") {
        hp.margin_neg = parse_real(key, value);
      } else if (key == "l2_weight") {
        hp.l2_weight = parse_real(key, value);
      } else {
        throw ConfigError("unknown key '" + key + "' in section [loss]");
      }
    } else if (section == "train") {
      if (key == "epochs") {
        train.epochs_total = static_cast<int>(parse_count(key, value));
      } else if (key == "constant_lr_epochs") {
        train.epochs_constant_lr = static_cast<int>(parse_count(key, value));
      } else if (key == "learning_rate") {
        hp.lr0 = parse_real(key, value);
      } else if (key == "seed") {
        train.seed = parse_count(key, value);
      } else if (key == "shuffle") {
        train.shuffle = parse_bool(key, value);
      } else if (key == "train_embeddings") {
        train.train_embeddings = parse_bool(key, value);
      } else {
        throw ConfigError("unknown key '" + key + "' in section [train]");
      }
    } else if (section == "corpus") {
      if (key == "min_word_count") {
        train.min_word_count = parse_count(key, value);
        if (train.min_word_count < 1) {
          throw ConfigError("min_word_count must be >= 1");
        }
      } else {
        throw ConfigError("unknown key '" + key + "' in section [corpus]");
      }
    }
  }
  return config;
}

}  // namespace seqcnn::cli
