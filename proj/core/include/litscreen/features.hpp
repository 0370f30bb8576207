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

#include <array>
#include <cstddef>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "litscreen/corpus.hpp"
#include "litscreen/matrix.hpp"
#include "litscreen/questions.hpp"
#include "litscreen/text.hpp"
#include "litscreen/tfidf.hpp"

namespace litscreen {

// ---- article block descriptors -------------------------------------------

struct BlockFeatures {
  double length = 0;   // characters (code points)
  double wc = 0;       // tokens
  double wl_max = 0;   // longest token, characters
  double wl_mean = 0;  // mean token length, characters
  double cwd = 0;      // share of tokens that are not stopwords
};

BlockFeatures block_features(std::string_view text, const StopwordList& stopwords = StopwordList::english());

// ---- question/article match scores ---------------------------------------

// Share of the distinct non-stopword question tokens found in the article.
// 0 when the question has no keywords.
double match_prop(std::string_view question, std::string_view article,
                  const StopwordList& stopwords = StopwordList::english());

// Jaro similarity over code points. Both empty -> 1, one empty -> 0.
double jaro(std::u32string_view a, std::u32string_view b);
// UTF-8 overload; each side truncated to max_chars code points (0 = no limit).
double jaro(std::string_view a, std::string_view b, std::size_t max_chars = 0);

struct EditDistance {
  std::size_t raw = 0;
  double normalized = 1.0;  // 1 - raw / max(|a|, |b|); 1 when both empty
};

EditDistance levenshtein(std::u32string_view a, std::u32string_view b);
EditDistance levenshtein(std::string_view a, std::string_view b, std::size_t max_chars = 0);

// |a n b| / |a u b|; both empty -> 1.
double jaccard(const TokenSet& a, const TokenSet& b);
// 2 |a n b| / (|a| + |b|); both empty -> 1.
double sorensen(const TokenSet& a, const TokenSet& b);

// ---- per-pair feature vectors --------------------------------------------

enum class FeatureMode { kStandard, kPico };

struct FeatureOptions {
  // Jaro and Levenshtein see at most this many leading code points per text.
  std::size_t distance_max_chars = 2000;
  const StopwordList* stopwords = nullptr;  // nullptr -> StopwordList::english()
};

inline constexpr std::array<std::string_view, 11> kBaseFeatureNames = {
    "length", "wc", "wl_max", "wl_mean", "cwd", "match_prop", "jaro", "lev_raw", "lev_norm", "jaccard", "sorensen"};

// Question-dependent scores; repeated per PICO element in pico mode as
// "<element>.<name>" alongside "<element>.present".
inline constexpr std::array<std::string_view, 6> kMatchFeatureNames = {
    "match_prop", "jaro", "lev_raw", "lev_norm", "jaccard", "sorensen"};

inline constexpr std::string_view kTfidfCosineName = "tfidf_cos";
inline constexpr std::string_view kPresenceName = "present";
inline constexpr std::string_view kTfidfColumnPrefix = "tfidf:";

class FeatureVector {
 public:
  std::string question_id;
  std::string article_id;
  // Article TFIDF document vector, set when a vectorizer was supplied.
  std::optional<SparseVector> tfidf;

  // Throws Error if the name is already present.
  void set(std::string name, double value);
  std::optional<double> get(std::string_view name) const;
  const std::vector<std::string>& names() const noexcept { return names_; }
  const std::vector<double>& values() const noexcept { return values_; }
  std::size_t size() const noexcept { return names_.size(); }

 private:
  std::vector<std::string> names_;
  std::vector<double> values_;
};

// Prepares the question side once and featurizes any number of articles.
// An absent PICO element yields zeros for its match features and a 0
// presence flag, so every row of one question set shares the same schema.
class PairFeaturizer {
 public:
  PairFeaturizer(const ResearchQuestion& question, FeatureMode mode, const TfidfVectorizer* vectorizer,
                 FeatureOptions options = {});
  ~PairFeaturizer();
  PairFeaturizer(PairFeaturizer&&) noexcept;
  PairFeaturizer& operator=(PairFeaturizer&&) noexcept;

  FeatureVector operator()(const ArticleRecord& record) const;

 private:
  struct Query;
  std::string question_id_;
  FeatureMode mode_;
  const TfidfVectorizer* vectorizer_;
  FeatureOptions options_;
  std::vector<Query> queries_;  // [0] standard text, then one per PICO element
};

FeatureVector pair_features(const ResearchQuestion& question, const ArticleRecord& record, FeatureMode mode,
                            const TfidfVectorizer* vectorizer, const FeatureOptions& options = {});

// Stacks feature vectors into a matrix. Named features come first in the
// order of the first row, then, when `vectorizer` is non-null, one
// "tfidf:<token>" column per vocabulary entry. Columns listed in
// `drop` are omitted. Throws SchemaError if rows disagree on feature names.
FeatureMatrix to_matrix(std::span<const FeatureVector> rows, const TfidfVectorizer* vectorizer,
                        std::span<const std::string> drop = {});

// Columnar export: question_id,article_id,<features...>[,tfidf] where the
// tfidf cell holds space-separated index:value pairs.
void write_feature_csv(std::ostream& out, std::span<const FeatureVector> rows);

}  // namespace litscreen
