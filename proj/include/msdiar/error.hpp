// Copyright (c) 2026 The msdiar Authors
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

namespace msdiar {

// Root of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Bad parameters or a config that disagrees with its inputs.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// Malformed text input (RTTM, UEM). Carries the 1-based line number.
class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

// Structural problems in a binary feature container.
class FormatError : public Error {
 public:
  using Error::Error;
};

// Well-formed data whose values break an invariant.
class ValidationError : public Error {
 public:
  using Error::Error;
};

// Invalid argument to a numeric operation (zero-norm rows, bad intervals).
class InputError : public Error {
 public:
  using Error::Error;
};

// DER requested where nothing is scored but errors were counted.
class UndefinedDerError : public Error {
 public:
  using Error::Error;
};

}  // namespace msdiar
