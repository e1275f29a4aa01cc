// Copyright 2026 The evotab Authors.
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

#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace evotab {

/// Bad input data: a dataset file or a generator spec.
class DatasetError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed CSV. line() is 1-based and counts the header.
class ParseError : public DatasetError {
 public:
  ParseError(std::size_t line, const std::string& what)
      : DatasetError("line " + std::to_string(line) + ": " + what),
        line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// One or more broken table or generator invariants. All violations found are
/// collected before throwing.
class ValidationError : public DatasetError {
 public:
  explicit ValidationError(std::vector<std::string> violations)
      : DatasetError(join(violations)), violations_(std::move(violations)) {}

  const std::vector<std::string>& violations() const noexcept {
    return violations_;
  }

 private:
  static std::string join(const std::vector<std::string>& v) {
    std::string out;
    for (const auto& s : v) {
      if (!out.empty()) out += "; ";
      out += s;
    }
    return out.empty() ? std::string("validation failed") : out;
  }

  std::vector<std::string> violations_;
};

/// A caller broke an operation's precondition.
class ContractViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Roulette selection is impossible (zero total fitness, or too few
/// positive-fitness members to form a pair).
class SelectionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Bad experiment or optimizer configuration.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace evotab
