// Copyright 2026 The ssrpu Authors.
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

namespace ssrpu {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A value is outside the mathematical domain of an operation (a prior
/// outside (0, 1), an empty batch, a shape mismatch).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// An invalid configuration, e.g. a ranking loss with margin 0.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Malformed input text. Carries the 1-based line number.
class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& what);
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// Input that parses but contradicts its own header or the data model.
class SchemaError : public Error {
 public:
  using Error::Error;
};

/// Training produced a non-finite risk or gradient.
class TrainingError : public Error {
 public:
  using Error::Error;
};

}  // namespace ssrpu
