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
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "litscreen/text.hpp"

namespace litscreen {

struct SparseVector {
  std::vector<std::uint32_t> indices;  // ascending
  std::vector<double> values;

  bool empty() const noexcept { return indices.empty(); }
  double norm() const;
};

// 0.0 when either vector is all-zero.
double cosine(const SparseVector& a, const SparseVector& b);

struct TfidfConfig {
  std::size_t max_features = 20000;
  std::size_t min_df = 2;
};

// Smoothed inverse document frequency, idf(t) = ln((1 + N) / (1 + df(t))) + 1,
// over raw term counts; transformed vectors are L2-normalized.
// Immutable once fitted.
class TfidfVectorizer {
 public:
  // Vocabulary: tokens with document frequency >= min_df, the max_features
  // most frequent kept (ties by token order), indexed in token order.
  // Throws Error on an empty training set.
  static TfidfVectorizer fit(std::span<const std::string> documents, const TfidfConfig& config = {});
  static TfidfVectorizer fit_tokens(std::span<const TokenList> documents, const TfidfConfig& config = {});

  SparseVector transform(std::string_view text) const;
  SparseVector transform_tokens(const TokenList& tokens) const;

  std::size_t size() const noexcept { return vocabulary_.size(); }
  const std::vector<std::string>& vocabulary() const noexcept { return vocabulary_; }
  const std::vector<double>& idf() const noexcept { return idf_; }
  std::optional<std::uint32_t> index_of(std::string_view token) const;
  bool contains(std::string_view token) const { return index_of(token).has_value(); }
  std::size_t document_count() const noexcept { return documents_; }
  const TfidfConfig& config() const noexcept { return config_; }

 private:
  TfidfConfig config_;
  std::size_t documents_ = 0;
  std::vector<std::string> vocabulary_;
  std::vector<double> idf_;
  std::unordered_map<std::string, std::uint32_t> index_;
};

double tfidf_cosine(const TfidfVectorizer& vectorizer, std::string_view a, std::string_view b);

}  // namespace litscreen
