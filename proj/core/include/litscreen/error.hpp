// Copyright 2026 The litscreen Authors. All Rights Reserved.
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//     http://www.apache.org/licenses/LICENSE-2.0
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace litscreen {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed input file. line() is 1-based; 0 when the error is not tied to a line.
class ParseError : public Error {
 public:
  ParseError(const std::string& source, std::size_t line, const std::string& message)
      : Error(source + (line ? ":" + std::to_string(line) : std::string()) + ": " + message),
        source_(source), line_(line), message_(message) {}

  const std::string& source() const noexcept { return source_; }
  std::size_t line() const noexcept { return line_; }
  const std::string& message() const noexcept { return message_; }

 private:
  std::string source_;
  std::size_t line_;
  std::string message_;
};

// Feature matrix columns do not match what a model was trained on.
class SchemaError : public Error {
 public:
  using Error::Error;
};

// Held-out question data reached a fitted state or a training batch.
class LeakageError : public Error {
 public:
  using Error::Error;
};

// Transformer sidecar failures: transport, protocol or payload.
class BridgeError : public Error {
 public:
  using Error::Error;
};

}  // namespace litscreen
