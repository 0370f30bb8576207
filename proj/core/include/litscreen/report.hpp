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

// Result tables with best-per-question markers, and ranked screening lists.

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "litscreen/corpus.hpp"
#include "litscreen/eval.hpp"

namespace litscreen {

enum class TableFormat { kMarkdown, kCsv };
TableFormat parse_table_format(std::string_view name);

struct ResultTable {
  Metric metric = Metric::kAuc;
  std::vector<std::string> experiments;      // rows
  std::vector<std::string> questions;        // columns
  std::vector<std::vector<double>> values;   // [row][column]
  std::vector<std::vector<bool>> best;       // equals the column maximum

  std::vector<std::string> best_experiments(const std::string& question_id) const;
};

// Throws Error listing every missing (experiment, question) cell.
ResultTable make_result_table(const EvaluationResult& result, Metric metric);

// Markdown: three decimals, best cells in **bold**.
// CSV: experiment,<q>,<q>_best,... with values at full precision so that
// parse_table_csv reads back the same doubles.
std::string render_table(const ResultTable& table, TableFormat format);
std::string render_table(const EvaluationResult& result, Metric metric, TableFormat format);

ResultTable parse_table_csv(std::istream& in, Metric metric, const std::string& source_name);

// Round-half-even at the third decimal of the exact binary value.
std::string format_3dp(double value);

struct RankedEntry {
  std::string article_id;
  double score = 0.0;
  std::size_t corpus_index = 0;
};

struct RankedList {
  std::string question_id;
  std::vector<RankedEntry> entries;  // descending score, ties in corpus order
  std::size_t boundary = 0;          // entries [boundary, n) are the bottom floor(n/2)
};

// `scores` follows the corpus order of the question's records. Throws
// Error on a count mismatch or a non-finite score.
RankedList make_ranked_list(const std::string& question_id, std::span<const double> scores, const Corpus& corpus);

// CSV: rank,article_id,score,bottom_half
void write_ranked_list(std::ostream& out, const RankedList& list);

}  // namespace litscreen
