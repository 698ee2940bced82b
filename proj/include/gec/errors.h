// Copyright 2026 The gec-eval Authors.
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

#ifndef GEC_ERRORS_H_
#define GEC_ERRORS_H_

#include <cstddef>
#include <stdexcept>
#include <string>

namespace gec {

// Base class for every domain error raised by the library. The CLI maps these
// to exit code 1.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A caller broke a documented precondition (mismatched lengths, overlapping
// edits, out-of-range weights, ...).
class ContractViolation : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& message)
      : Error("line " + std::to_string(line) + ": " + message), line_(line) {}

  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

// Too few samples or zero variance for a statistic to be defined.
class InsufficientData : public Error {
 public:
  using Error::Error;
};

// A required provider or option is missing for the selected mode.
class ConfigError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

// A remote provider (perplexity, judge) failed to answer.
class ProviderError : public Error {
 public:
  using Error::Error;
};

}  // namespace gec

#endif  // GEC_ERRORS_H_
