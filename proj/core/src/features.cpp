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
#include "litscreen/features.hpp"

#include <algorithm>
#include <ostream>

#include "csv.hpp"
#include "litscreen/error.hpp"
#include "litscreen/unicode.hpp"
#include "num_format.hpp"

namespace litscreen {
namespace {

const StopwordList& stopwords_of(const FeatureOptions& options) {
  return options.stopwords ? *options.stopwords : StopwordList::english();
}

TokenSet keywords_of(const TokenList& tokens, const StopwordList& stopwords) {
  TokenList keep;
  for (const auto& t : tokens) {
    if (!stopwords.contains(t)) keep.push_back(t);
  }
  return TokenSet(std::move(keep));
}

double keyword_share(const TokenSet& keywords, const TokenSet& article) {
  if (keywords.empty()) return 0.0;
  return static_cast<double>(keywords.intersection_size(article)) / static_cast<double>(keywords.size());
}

}  // namespace

BlockFeatures block_features(std::string_view text, const StopwordList& stopwords) {
  BlockFeatures f;
  f.length = static_cast<double>(code_point_count(text));
  const auto tokens = tokenize(text);
  if (tokens.empty()) return f;
  f.wc = static_cast<double>(tokens.size());
  std::size_t total = 0, longest = 0, content = 0;
  for (const auto& t : tokens) {
    const std::size_t n = code_point_count(t);
    total += n;
    longest = std::max(longest, n);
    if (!stopwords.contains(t)) ++content;
  }
  f.wl_max = static_cast<double>(longest);
  f.wl_mean = static_cast<double>(total) / f.wc;
  f.cwd = static_cast<double>(content) / f.wc;
  return f;
}

double match_prop(std::string_view question, std::string_view article, const StopwordList& stopwords) {
  return keyword_share(keywords_of(tokenize(question), stopwords), TokenSet(tokenize(article)));
}

double jaro(std::u32string_view a, std::u32string_view b) {
  if (a.empty() && b.empty()) return 1.0;
  if (a.empty() || b.empty()) return 0.0;
  const std::size_t longer = std::max(a.size(), b.size());
  const std::size_t window = longer / 2 > 0 ? longer / 2 - 1 : 0;
  std::vector<char> a_matched(a.size(), 0), b_matched(b.size(), 0);
  std::size_t matches = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const std::size_t lo = i > window ? i - window : 0;
    const std::size_t hi = std::min(b.size(), i + window + 1);
    for (std::size_t j = lo; j < hi; ++j) {
      if (b_matched[j] || a[i] != b[j]) continue;
      a_matched[i] = b_matched[j] = 1;
      ++matches;
      break;
    }
  }
  if (matches == 0) return 0.0;
  std::size_t half_transpositions = 0;
  for (std::size_t i = 0, j = 0; i < a.size(); ++i) {
    if (!a_matched[i]) continue;
    while (!b_matched[j]) ++j;
    if (a[i] != b[j]) ++half_transpositions;
    ++j;
  }
  const double m = static_cast<double>(matches);
  // t is half the out-of-order count, kept fractional when that count is odd
  const double t = static_cast<double>(half_transpositions) / 2.0;
  return (m / static_cast<double>(a.size()) + m / static_cast<double>(b.size()) + (m - t) / m) / 3.0;
}

double jaro(std::string_view a, std::string_view b, std::size_t max_chars) {
  return jaro(to_code_points(a, max_chars), to_code_points(b, max_chars));
}

EditDistance levenshtein(std::u32string_view a, std::u32string_view b) {
  EditDistance out;
  const std::size_t longest = std::max(a.size(), b.size());
  // shared prefix and suffix never cost an edit
  while (!a.empty() && !b.empty() && a.front() == b.front()) {
    a.remove_prefix(1);
    b.remove_prefix(1);
  }
  while (!a.empty() && !b.empty() && a.back() == b.back()) {
    a.remove_suffix(1);
    b.remove_suffix(1);
  }
  if (a.size() < b.size()) std::swap(a, b);
  std::vector<std::size_t> row(b.size() + 1);
  for (std::size_t j = 0; j <= b.size(); ++j) row[j] = j;
  for (std::size_t i = 1; i <= a.size(); ++i) {
    std::size_t diagonal = row[0];
    row[0] = i;
    for (std::size_t j = 1; j <= b.size(); ++j) {
      const std::size_t above = row[j];
      row[j] = std::min({above + 1, row[j - 1] + 1, diagonal + (a[i - 1] == b[j - 1] ? 0 : 1)});
      diagonal = above;
    }
  }
  out.raw = row[b.size()];
  out.normalized = longest == 0 ? 1.0 : 1.0 - static_cast<double>(out.raw) / static_cast<double>(longest);
  return out;
}

EditDistance levenshtein(std::string_view a, std::string_view b, std::size_t max_chars) {
  return levenshtein(to_code_points(a, max_chars), to_code_points(b, max_chars));
}

double jaccard(const TokenSet& a, const TokenSet& b) {
  if (a.empty() && b.empty()) return 1.0;
  const std::size_t common = a.intersection_size(b);
  return static_cast<double>(common) / static_cast<double>(a.size() + b.size() - common);
}

// Evaluated through the Jaccard value so that the Dice-Jaccard identity
// holds bit for bit; the direct 2c/(|a|+|b|) quotient can differ from it
// in the last place.
double sorensen(const TokenSet& a, const TokenSet& b) {
  const double j = jaccard(a, b);
  return 2.0 * j / (1.0 + j);
}

// ---- FeatureVector -------------------------------------------------------

void FeatureVector::set(std::string name, double value) {
  if (get(name)) throw Error("feature " + name + " set twice");
  names_.push_back(std::move(name));
  values_.push_back(value);
}

std::optional<double> FeatureVector::get(std::string_view name) const {
  for (std::size_t i = 0; i < names_.size(); ++i) {
    if (names_[i] == name) return values_[i];
  }
  return std::nullopt;
}

// ---- PairFeaturizer ------------------------------------------------------

struct PairFeaturizer::Query {
  std::string prefix;  // "" for the standard text, "<element>." for PICO
  bool present = true;
  std::string text;
  std::u32string chars;
  TokenSet tokens;
  TokenSet keywords;
  std::optional<SparseVector> tfidf;
};

PairFeaturizer::PairFeaturizer(const ResearchQuestion& question, FeatureMode mode, const TfidfVectorizer* vectorizer,
                               FeatureOptions options)
    : question_id_(question.question_id), mode_(mode), vectorizer_(vectorizer), options_(options) {
  const StopwordList& stopwords = stopwords_of(options_);
  auto make = [&](std::string prefix, const std::optional<std::string>& text) {
    Query q;
    q.prefix = std::move(prefix);
    q.present = text.has_value();
    if (q.present) {
      q.text = *text;
      q.chars = to_code_points(q.text, options_.distance_max_chars);
      auto tokens = tokenize(q.text);
      q.keywords = keywords_of(tokens, stopwords);
      if (vectorizer_) q.tfidf = vectorizer_->transform_tokens(tokens);
      q.tokens = TokenSet(std::move(tokens));
    }
    queries_.push_back(std::move(q));
  };
  make("", question.standard_text);
  if (mode_ == FeatureMode::kPico) {
    for (PicoElement e : kPicoOrder) make(std::string(pico_name(e)) + ".", question.pico.get(e));
  }
}

PairFeaturizer::~PairFeaturizer() = default;
PairFeaturizer::PairFeaturizer(PairFeaturizer&&) noexcept = default;
PairFeaturizer& PairFeaturizer::operator=(PairFeaturizer&&) noexcept = default;

FeatureVector PairFeaturizer::operator()(const ArticleRecord& record) const {
  const StopwordList& stopwords = stopwords_of(options_);
  FeatureVector fv;
  fv.question_id = record.question_id;
  fv.article_id = record.article_id;

  const std::string text = article_text(record);
  const auto block = block_features(text, stopwords);
  fv.set("length", block.length);
  fv.set("wc", block.wc);
  fv.set("wl_max", block.wl_max);
  fv.set("wl_mean", block.wl_mean);
  fv.set("cwd", block.cwd);

  auto tokens = tokenize(text);
  std::optional<SparseVector> article_vector;
  if (vectorizer_) article_vector = vectorizer_->transform_tokens(tokens);
  const TokenSet article_tokens(std::move(tokens));
  const std::u32string article_chars = to_code_points(text, options_.distance_max_chars);

  for (const auto& q : queries_) {
    if (!q.present) {
      for (auto name : kMatchFeatureNames) fv.set(q.prefix + std::string(name), 0.0);
      if (vectorizer_) fv.set(q.prefix + std::string(kTfidfCosineName), 0.0);
      fv.set(q.prefix + std::string(kPresenceName), 0.0);
      continue;
    }
    const auto edit = levenshtein(q.chars, article_chars);
    fv.set(q.prefix + "match_prop", keyword_share(q.keywords, article_tokens));
    fv.set(q.prefix + "jaro", jaro(q.chars, article_chars));
    fv.set(q.prefix + "lev_raw", static_cast<double>(edit.raw));
    fv.set(q.prefix + "lev_norm", edit.normalized);
    fv.set(q.prefix + "jaccard", jaccard(q.tokens, article_tokens));
    fv.set(q.prefix + "sorensen", sorensen(q.tokens, article_tokens));
    if (vectorizer_) fv.set(q.prefix + std::string(kTfidfCosineName), cosine(*q.tfidf, *article_vector));
    if (!q.prefix.empty()) fv.set(q.prefix + std::string(kPresenceName), 1.0);
  }
  fv.tfidf = std::move(article_vector);
  return fv;
}

FeatureVector pair_features(const ResearchQuestion& question, const ArticleRecord& record, FeatureMode mode,
                            const TfidfVectorizer* vectorizer, const FeatureOptions& options) {
  return PairFeaturizer(question, mode, vectorizer, options)(record);
}

FeatureMatrix to_matrix(std::span<const FeatureVector> rows, const TfidfVectorizer* vectorizer,
                        std::span<const std::string> drop) {
  auto dropped = [&](const std::string& name) { return std::find(drop.begin(), drop.end(), name) != drop.end(); };
  std::vector<std::string> names;
  std::vector<std::size_t> keep;  // positions within a FeatureVector
  if (!rows.empty()) {
    const auto& first = rows.front().names();
    for (std::size_t i = 0; i < first.size(); ++i) {
      if (dropped(first[i])) continue;
      names.push_back(first[i]);
      keep.push_back(i);
    }
  }
  const std::size_t dense = names.size();
  if (vectorizer) {
    for (const auto& token : vectorizer->vocabulary()) names.push_back(std::string(kTfidfColumnPrefix) + token);
  }
  FeatureMatrix matrix(std::move(names));
  std::vector<std::pair<std::uint32_t, double>> entries;
  for (const auto& row : rows) {
    if (row.names() != rows.front().names()) {
      throw SchemaError("feature rows disagree on feature names at (" + row.question_id + ", " + row.article_id + ")");
    }
    entries.clear();
    for (std::size_t k = 0; k < keep.size(); ++k) entries.emplace_back(static_cast<std::uint32_t>(k), row.values()[keep[k]]);
    if (vectorizer) {
      if (!row.tfidf) throw SchemaError("row (" + row.question_id + ", " + row.article_id + ") has no TFIDF vector");
      for (std::size_t k = 0; k < row.tfidf->indices.size(); ++k) {
        entries.emplace_back(static_cast<std::uint32_t>(dense + row.tfidf->indices[k]), row.tfidf->values[k]);
      }
    }
    matrix.add_row(entries);
  }
  return matrix;
}

void write_feature_csv(std::ostream& out, std::span<const FeatureVector> rows) {
  std::vector<std::string> header = {"question_id", "article_id"};
  const bool has_tfidf = !rows.empty() && rows.front().tfidf.has_value();
  if (!rows.empty()) header.insert(header.end(), rows.front().names().begin(), rows.front().names().end());
  if (has_tfidf) header.emplace_back("tfidf");
  csv::write_row(out, header);
  std::vector<std::string> fields;
  for (const auto& row : rows) {
    if (row.names() != rows.front().names()) {
      throw SchemaError("feature rows disagree on feature names at (" + row.question_id + ", " + row.article_id + ")");
    }
    fields.assign({row.question_id, row.article_id});
    for (double v : row.values()) fields.push_back(num::shortest(v));
    if (has_tfidf) {
      std::string cell;
      if (row.tfidf) {
        for (std::size_t k = 0; k < row.tfidf->indices.size(); ++k) {
          if (k) cell += ' ';
          cell += std::to_string(row.tfidf->indices[k]) + ':' + num::shortest(row.tfidf->values[k]);
        }
      }
      fields.push_back(std::move(cell));
    }
    csv::write_row(out, fields);
  }
}

}  // namespace litscreen
