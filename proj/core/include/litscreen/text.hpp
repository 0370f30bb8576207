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

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace litscreen {

using TokenList = std::vector<std::string>;

// Lowercased alphanumeric runs of `text`, in order. Any code point that is
// not a letter or digit separates tokens.
TokenList tokenize(std::string_view text);

// Sorted, duplicate-free token collection.
class TokenSet {
 public:
  TokenSet() = default;
  explicit TokenSet(TokenList tokens);

  std::size_t size() const noexcept { return tokens_.size(); }
  bool empty() const noexcept { return tokens_.empty(); }
  bool contains(std::string_view token) const;
  const std::vector<std::string>& tokens() const noexcept { return tokens_; }

  std::size_t intersection_size(const TokenSet& other) const;

 private:
  std::vector<std::string> tokens_;
};

class StopwordList {
 public:
  // The pinned built-in English list.
  static const StopwordList& english();

  // One word per line; blank lines and lines starting with '#' are skipped.
  static StopwordList from_file(const std::filesystem::path& path);

  explicit StopwordList(std::vector<std::string> words);

  bool contains(std::string_view token) const;
  std::size_t size() const noexcept { return words_.size(); }
  const std::vector<std::string>& words() const noexcept { return words_; }

  // SHA-256 of the sorted words joined by '\n'.
  std::string checksum() const;

 private:
  std::vector<std::string> words_;
};

// Checksum of the built-in English list; asserted by the test suite.
inline constexpr std::string_view kEnglishStopwordsSha256 =
    "8f398858102890a8c751f9797da591152e180ae3324531b93ea8d6c7e87eefd4";

}  // namespace litscreen
