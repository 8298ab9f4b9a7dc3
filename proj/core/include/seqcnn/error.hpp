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

#ifndef SEQCNN_ERROR_HPP_
#define SEQCNN_ERROR_HPP_

#include <cstddef>
#include <stdexcept>
#include <string>

namespace seqcnn {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Incompatible tensor or vector shapes.
class DimensionError : public Error {
 public:
  using Error::Error;
};

// Input sequence shorter than the convolution filter; the caller must pad.
class WindowTooShortError : public Error {
 public:
  using Error::Error;
};

// Operation invoked out of order, e.g. backward before forward.
class StateError : public Error {
 public:
  using Error::Error;
};

// Out-of-range token position or vocabulary id.
class IndexError : public Error {
 public:
  using Error::Error;
};

// Malformed input text; carries the 1-based line number.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line)
      : Error(what + " (line " + std::to_string(line) + ")"), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

// Invalid configuration value or unknown key.
class ConfigError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace seqcnn

#endif  // SEQCNN_ERROR_HPP_
