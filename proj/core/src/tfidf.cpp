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
#include "litscreen/tfidf.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "litscreen/error.hpp"

namespace litscreen {

double SparseVector::norm() const {
  double s = 0;
  for (double v : values) s += v * v;
  return std::sqrt(s);
}

double cosine(const SparseVector& a, const SparseVector& b) {
  const double na = a.norm();
  const double nb = b.norm();
  if (na == 0.0 || nb == 0.0) return 0.0;
  double dot = 0;
  std::size_t i = 0, j = 0;
  while (i < a.indices.size() && j < b.indices.size()) {
    if (a.indices[i] < b.indices[j]) {
      ++i;
    } else if (b.indices[j] < a.indices[i]) {
      ++j;
    } else {
      dot += a.values[i++] * b.values[j++];
    }
  }
  return std::clamp(dot / (na * nb), 0.0, 1.0);
}

TfidfVectorizer TfidfVectorizer::fit(std::span<const std::string> documents, const TfidfConfig& config) {
  std::vector<TokenList> tokens;
  tokens.reserve(documents.size());
  for (const auto& d : documents) tokens.push_back(tokenize(d));
  return fit_tokens(tokens, config);
}

TfidfVectorizer TfidfVectorizer::fit_tokens(std::span<const TokenList> documents, const TfidfConfig& config) {
  if (documents.empty()) throw Error("cannot fit TFIDF on an empty training set");
  std::map<std::string, std::size_t> df;
  for (const auto& doc : documents) {
    TokenSet distinct{TokenList(doc)};
    for (const auto& t : distinct.tokens()) ++df[t];
  }
  std::vector<std::pair<std::string, std::size_t>> candidates;
  for (auto& [token, count] : df) {
    if (count >= config.min_df) candidates.emplace_back(token, count);
  }
  // map iteration is already in token order; stable sort keeps it for ties
  std::stable_sort(candidates.begin(), candidates.end(),
                   [](const auto& a, const auto& b) { return a.second > b.second; });
  if (candidates.size() > config.max_features) candidates.resize(config.max_features);
  std::sort(candidates.begin(), candidates.end());

  TfidfVectorizer v;
  v.config_ = config;
  v.documents_ = documents.size();
  const double n = static_cast<double>(documents.size());
  for (const auto& [token, count] : candidates) {
    v.index_.emplace(token, static_cast<std::uint32_t>(v.vocabulary_.size()));
    v.vocabulary_.push_back(token);
    v.idf_.push_back(std::log((1.0 + n) / (1.0 + static_cast<double>(count))) + 1.0);
  }
  return v;
}

std::optional<std::uint32_t> TfidfVectorizer::index_of(std::string_view token) const {
  auto it = index_.find(std::string(token));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

SparseVector TfidfVectorizer::transform(std::string_view text) const { return transform_tokens(tokenize(text)); }

SparseVector TfidfVectorizer::transform_tokens(const TokenList& tokens) const {
  std::map<std::uint32_t, double> counts;
  for (const auto& t : tokens) {
    auto it = index_.find(t);
    if (it != index_.end()) counts[it->second] += 1.0;
  }
  SparseVector out;
  double norm2 = 0;
  for (auto& [index, tf] : counts) {
    const double w = tf * idf_[index];
    out.indices.push_back(index);
    out.values.push_back(w);
    norm2 += w * w;
  }
  if (norm2 > 0) {
    const double inv = 1.0 / std::sqrt(norm2);
    for (double& w : out.values) w *= inv;
  }
  return out;
}

double tfidf_cosine(const TfidfVectorizer& vectorizer, std::string_view a, std::string_view b) {
  return cosine(vectorizer.transform(a), vectorizer.transform(b));
}

}  // namespace litscreen
