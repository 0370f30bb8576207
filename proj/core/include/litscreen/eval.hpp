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

// Leave-One-Question-Out folds, ranking metrics, and the result grid.

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace litscreen {

class Corpus;

struct Fold {
  std::string held_out;
  std::vector<std::string> train;
};

struct FoldPlan {
  std::vector<Fold> folds;
};

// One fold per question in first-appearance order. Needs two or more
// questions.
FoldPlan loqo_folds(const Corpus& corpus);
FoldPlan loqo_folds(std::span<const std::string> question_ids);

struct ScoredRecord {
  std::string question_id;
  std::size_t index = 0;  // stable corpus position, the tie-break key
  double score = 0.0;
  int label = 0;
};

// Positions into `records` sorted by descending score, ties by ascending
// index. This is the order of a ranked list.
std::vector<std::size_t> ranking_order(std::span<const ScoredRecord> records);

// Mann-Whitney AUC with ties counted 1/2. Throws Error("AUC undefined ...")
// unless both labels occur.
double auc(std::span<const ScoredRecord> records);

struct BottomThreshold {
  double cutoff = 0.0;                    // highest score inside the bottom set
  std::vector<std::size_t> bottom_indices;  // ScoredRecord::index values, ascending
};

// The floor(n/2) records at the tail of ranking_order. Among tied scores the
// later corpus positions fall into the bottom set first, which keeps it
// identical to the rows below the boundary of a ranked list.
BottomThreshold bottom_half(std::span<const ScoredRecord> records);

// Fraction of label-0 records in bottom_half. Throws Error for n < 2.
double acc_bot50(std::span<const ScoredRecord> records);

// ---- result grid -----------------------------------------------------------

struct MetricCell {
  double auc = 0.0;        // NaN when not recorded
  double acc_bot50 = 0.0;  // NaN when not recorded
  std::size_t n = 0;
  std::size_t positives = 0;
};

enum class Metric { kAuc, kAccBot50 };
std::string_view metric_name(Metric metric);
Metric parse_metric(std::string_view name);
double metric_value(const MetricCell& cell, Metric metric);

class EvaluationResult {
 public:
  // Rows and columns keep first-insertion order. Throws Error on a
  // duplicate (experiment, question) cell.
  void add(const std::string& experiment, const std::string& question_id, const MetricCell& cell);
  void set_metadata(const std::string& experiment, std::uint64_t seed, const std::string& config_digest);
  void merge(const EvaluationResult& other);

  const std::vector<std::string>& experiments() const noexcept { return experiments_; }
  const std::vector<std::string>& questions() const noexcept { return questions_; }
  const MetricCell* find(const std::string& experiment, const std::string& question_id) const;
  std::uint64_t seed(const std::string& experiment) const;
  std::string config_digest(const std::string& experiment) const;

  // Cells of the experiments x questions product that are absent, or that
  // lack a value for `metric` when one is given.
  std::vector<std::pair<std::string, std::string>> missing_cells(std::optional<Metric> metric = std::nullopt) const;

  friend bool operator==(const EvaluationResult&, const EvaluationResult&);

 private:
  std::vector<std::string> experiments_;
  std::vector<std::string> questions_;
  std::map<std::pair<std::string, std::string>, MetricCell> cells_;
  std::map<std::string, std::pair<std::uint64_t, std::string>> metadata_;
};

// Long format, one row per cell in grid order:
// experiment,question_id,auc,acc_bot50,n,positives,seed,config_digest
// Values use the shortest decimal form that reads back to the same double.
void write_results_csv(std::ostream& out, const EvaluationResult& result);
EvaluationResult read_results_csv(std::istream& in, const std::string& source_name);

// Wide format: experiment,<q1>,<q2>,... holding one metric; other fields
// stay unrecorded.
EvaluationResult read_wide_table(std::istream& in, Metric metric, const std::string& source_name);

}  // namespace litscreen
