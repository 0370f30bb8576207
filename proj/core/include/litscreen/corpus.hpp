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
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace litscreen {

// One candidate article screened for one research question.
struct ArticleRecord {
  std::string question_id;
  std::string article_id;
  std::string title;
  std::string abstract;
  int label = 0;  // 1 = relevant (included), 0 = not relevant

  bool relevant() const noexcept { return label == 1; }
  friend bool operator==(const ArticleRecord&, const ArticleRecord&) = default;
};

// Returns the violated invariant, or nullopt when the record is valid.
std::optional<std::string> validate_record(const ArticleRecord& record);

// Title and abstract joined by a single space; an empty part adds no separator.
std::string article_text(const ArticleRecord& record);

// Immutable, ordered set of validated records. Record order is the
// tie-breaking order for every downstream ranking.
class Corpus {
 public:
  Corpus() = default;
  // Validates every record and (question_id, article_id) uniqueness.
  explicit Corpus(std::vector<ArticleRecord> records, std::string source_path = {});

  std::span<const ArticleRecord> records() const noexcept { return records_; }
  const ArticleRecord& operator[](std::size_t i) const { return records_[i]; }
  std::size_t size() const noexcept { return records_.size(); }
  bool empty() const noexcept { return records_.empty(); }
  const std::string& source_path() const noexcept { return source_path_; }

  // Distinct question ids in order of first appearance.
  std::vector<std::string> question_ids() const;
  // Indices of the records belonging to `question_id`, in corpus order.
  std::vector<std::size_t> indices_of(std::string_view question_id) const;

  friend bool operator==(const Corpus& a, const Corpus& b) { return a.records_ == b.records_; }

 private:
  std::vector<ArticleRecord> records_;
  std::string source_path_;
};

enum class CorpusFormat { kJsonl, kCsv };

// ".csv" selects CSV; everything else is treated as JSONL.
CorpusFormat corpus_format_for(const std::filesystem::path& path);

Corpus parse_corpus(const std::filesystem::path& path, CorpusFormat format);
Corpus parse_corpus(std::istream& in, CorpusFormat format, const std::string& source_name);

void write_corpus(std::ostream& out, const Corpus& corpus, CorpusFormat format);

struct QuestionStats {
  std::string question_id;
  std::size_t record_count = 0;
  std::size_t relevant_count = 0;
  double inclusion_rate = 0.0;
};

inline constexpr std::string_view kOverallStatsId = "ALL";

// One row per question (first-appearance order) followed by the pooled row
// with question_id kOverallStatsId.
std::vector<QuestionStats> corpus_stats(const Corpus& corpus);

// Percentage with one decimal, rounded half-up on the exact fraction, e.g.
// 314/766 -> "41.0%". Zero records renders "0.0%".
std::string format_inclusion_rate(std::size_t relevant, std::size_t records);

// CSV with header question_id,records,relevant,inclusion_rate.
void write_stats_csv(std::ostream& out, std::span<const QuestionStats> stats);

}  // namespace litscreen
