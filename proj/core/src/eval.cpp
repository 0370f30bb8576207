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
#include "litscreen/eval.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <ostream>
#include <set>

#include "csv.hpp"
#include "litscreen/corpus.hpp"
#include "litscreen/error.hpp"
#include "num_format.hpp"

namespace litscreen {

FoldPlan loqo_folds(std::span<const std::string> question_ids) {
  std::vector<std::string> ids;
  std::set<std::string> seen;
  for (const auto& q : question_ids)
    if (seen.insert(q).second) ids.push_back(q);
  if (ids.size() < 2) throw Error("leave-one-question-out needs at least 2 questions, got " + std::to_string(ids.size()));
  FoldPlan plan;
  for (const auto& held : ids) {
    Fold fold{held, {}};
    for (const auto& q : ids)
      if (q != held) fold.train.push_back(q);
    plan.folds.push_back(std::move(fold));
  }
  return plan;
}

FoldPlan loqo_folds(const Corpus& corpus) {
  const auto ids = corpus.question_ids();
  return loqo_folds(ids);
}

namespace {

void validate(std::span<const ScoredRecord> records) {
  for (const auto& r : records) {
    if (!std::isfinite(r.score))
      throw Error("non-finite score for record " + std::to_string(r.index) + " of question '" + r.question_id + "'");
    if (r.label != 0 && r.label != 1)
      throw Error("label outside {0,1} for record " + std::to_string(r.index) + " of question '" + r.question_id + "'");
  }
}

}  // namespace

std::vector<std::size_t> ranking_order(std::span<const ScoredRecord> records) {
  validate(records);
  std::vector<std::size_t> order(records.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (records[a].score != records[b].score) return records[a].score > records[b].score;
    return records[a].index < records[b].index;
  });
  return order;
}

double auc(std::span<const ScoredRecord> records) {
  validate(records);
  std::vector<std::size_t> order(records.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return records[a].score < records[b].score; });

  // Rank sum of positives with mid-ranks for ties. Ranks are half-integers,
  // so every partial sum below is exact in double precision.
  double positive_rank_sum = 0;
  std::size_t positives = 0;
  for (std::size_t i = 0; i < order.size();) {
    std::size_t j = i;
    std::size_t group_positives = 0;
    while (j < order.size() && records[order[j]].score == records[order[i]].score) {
      group_positives += static_cast<std::size_t>(records[order[j]].label);
      ++j;
    }
    const double mid_rank = (static_cast<double>(i + 1) + static_cast<double>(j)) / 2.0;
    positive_rank_sum += mid_rank * static_cast<double>(group_positives);
    positives += group_positives;
    i = j;
  }
  const std::size_t negatives = records.size() - positives;
  if (positives == 0 || negatives == 0) {
    throw Error("AUC undefined: " + std::to_string(positives) + " positive and " + std::to_string(negatives) +
                " negative records");
  }
  const double p = static_cast<double>(positives);
  const double u = positive_rank_sum - p * (p + 1.0) / 2.0;
  return u / (p * static_cast<double>(negatives));
}

BottomThreshold bottom_half(std::span<const ScoredRecord> records) {
  if (records.size() < 2) throw Error("bottom-50% accuracy needs at least 2 records, got " + std::to_string(records.size()));
  const auto order = ranking_order(records);
  const std::size_t k = records.size() / 2;
  BottomThreshold out;
  out.cutoff = -std::numeric_limits<double>::infinity();
  for (std::size_t pos = records.size() - k; pos < records.size(); ++pos) {
    const auto& r = records[order[pos]];
    out.bottom_indices.push_back(r.index);
    out.cutoff = std::max(out.cutoff, r.score);
  }
  std::sort(out.bottom_indices.begin(), out.bottom_indices.end());
  return out;
}

double acc_bot50(std::span<const ScoredRecord> records) {
  if (records.size() < 2) throw Error("bottom-50% accuracy needs at least 2 records, got " + std::to_string(records.size()));
  const auto order = ranking_order(records);
  const std::size_t k = records.size() / 2;
  std::size_t negatives = 0;
  for (std::size_t pos = records.size() - k; pos < records.size(); ++pos)
    negatives += records[order[pos]].label == 0 ? 1 : 0;
  return static_cast<double>(negatives) / static_cast<double>(k);
}

// ---- result grid -----------------------------------------------------------

std::string_view metric_name(Metric metric) { return metric == Metric::kAuc ? "auc" : "acc_bot50"; }

Metric parse_metric(std::string_view name) {
  if (name == "auc") return Metric::kAuc;
  if (name == "acc_bot50") return Metric::kAccBot50;
  throw Error("unknown metric '" + std::string(name) + "' (expected auc or acc_bot50)");
}

double metric_value(const MetricCell& cell, Metric metric) {
  return metric == Metric::kAuc ? cell.auc : cell.acc_bot50;
}

void EvaluationResult::add(const std::string& experiment, const std::string& question_id, const MetricCell& cell) {
  if (experiment.empty() || question_id.empty()) throw Error("result cell needs an experiment label and a question id");
  for (double v : {cell.auc, cell.acc_bot50}) {
    if (!std::isnan(v) && (v < 0.0 || v > 1.0))
      throw Error("metric value " + num::shortest(v) + " outside [0,1] for (" + experiment + ", " + question_id + ")");
  }
  if (!cells_.emplace(std::make_pair(experiment, question_id), cell).second)
    throw Error("duplicate result cell (" + experiment + ", " + question_id + ")");
  if (std::find(experiments_.begin(), experiments_.end(), experiment) == experiments_.end()) experiments_.push_back(experiment);
  if (std::find(questions_.begin(), questions_.end(), question_id) == questions_.end()) questions_.push_back(question_id);
}

void EvaluationResult::set_metadata(const std::string& experiment, std::uint64_t seed, const std::string& config_digest) {
  metadata_[experiment] = {seed, config_digest};
}

void EvaluationResult::merge(const EvaluationResult& other) {
  for (const auto& e : other.experiments_)
    for (const auto& q : other.questions_)
      if (const auto* cell = other.find(e, q)) add(e, q, *cell);
  for (const auto& [e, m] : other.metadata_) metadata_[e] = m;
}

const MetricCell* EvaluationResult::find(const std::string& experiment, const std::string& question_id) const {
  auto it = cells_.find({experiment, question_id});
  return it == cells_.end() ? nullptr : &it->second;
}

std::uint64_t EvaluationResult::seed(const std::string& experiment) const {
  auto it = metadata_.find(experiment);
  return it == metadata_.end() ? 0 : it->second.first;
}

std::string EvaluationResult::config_digest(const std::string& experiment) const {
  auto it = metadata_.find(experiment);
  return it == metadata_.end() ? std::string() : it->second.second;
}

std::vector<std::pair<std::string, std::string>> EvaluationResult::missing_cells(std::optional<Metric> metric) const {
  std::vector<std::pair<std::string, std::string>> out;
  for (const auto& e : experiments_) {
    for (const auto& q : questions_) {
      const MetricCell* cell = find(e, q);
      if (!cell || (metric && std::isnan(metric_value(*cell, *metric)))) out.emplace_back(e, q);
    }
  }
  return out;
}

bool operator==(const EvaluationResult& a, const EvaluationResult& b) {
  if (a.experiments_ != b.experiments_ || a.questions_ != b.questions_ || a.metadata_ != b.metadata_) return false;
  if (a.cells_.size() != b.cells_.size()) return false;
  auto same = [](double x, double y) { return (std::isnan(x) && std::isnan(y)) || x == y; };
  for (const auto& [key, cell] : a.cells_) {
    auto it = b.cells_.find(key);
    if (it == b.cells_.end()) return false;
    const MetricCell& other = it->second;
    if (!same(cell.auc, other.auc) || !same(cell.acc_bot50, other.acc_bot50) || cell.n != other.n ||
        cell.positives != other.positives)
      return false;
  }
  return true;
}

namespace {

const std::vector<std::string> kResultsHeader = {"experiment", "question_id", "auc",  "acc_bot50",
                                                 "n",          "positives",   "seed", "config_digest"};

std::string metric_text(double v) { return std::isnan(v) ? std::string() : num::shortest(v); }

double read_metric(const std::string& text, const csv::Reader& reader, const char* field) {
  if (text.empty()) return std::numeric_limits<double>::quiet_NaN();
  auto v = num::parse_double(text);
  if (!v) throw ParseError(reader.source(), reader.line(), std::string("invalid ") + field + " value '" + text + "'");
  return *v;
}

std::uint64_t read_count(const std::string& text, const csv::Reader& reader, const char* field) {
  std::uint64_t v = 0;
  auto res = std::from_chars(text.data(), text.data() + text.size(), v);
  if (res.ec != std::errc() || res.ptr != text.data() + text.size())
    throw ParseError(reader.source(), reader.line(), std::string("invalid ") + field + " value '" + text + "'");
  return v;
}

}  // namespace

void write_results_csv(std::ostream& out, const EvaluationResult& result) {
  csv::write_row(out, kResultsHeader);
  for (const auto& e : result.experiments()) {
    for (const auto& q : result.questions()) {
      const MetricCell* cell = result.find(e, q);
      if (!cell) continue;
      csv::write_row(out, {e, q, metric_text(cell->auc), metric_text(cell->acc_bot50), std::to_string(cell->n),
                           std::to_string(cell->positives), std::to_string(result.seed(e)), result.config_digest(e)});
    }
  }
}

EvaluationResult read_results_csv(std::istream& in, const std::string& source_name) {
  csv::Reader reader(in, source_name);
  std::vector<std::string> fields;
  if (!reader.next(fields)) throw ParseError(source_name, 0, "empty results file");
  if (fields != kResultsHeader) throw ParseError(source_name, reader.line(), "unexpected results header");
  EvaluationResult result;
  while (reader.next(fields)) {
    if (fields.size() == 1 && fields[0].empty()) continue;
    if (fields.size() != kResultsHeader.size())
      throw ParseError(source_name, reader.line(),
                       "expected " + std::to_string(kResultsHeader.size()) + " fields, got " + std::to_string(fields.size()));
    MetricCell cell;
    cell.auc = read_metric(fields[2], reader, "auc");
    cell.acc_bot50 = read_metric(fields[3], reader, "acc_bot50");
    cell.n = read_count(fields[4], reader, "n");
    cell.positives = read_count(fields[5], reader, "positives");
    try {
      result.add(fields[0], fields[1], cell);
    } catch (const Error& e) {
      throw ParseError(source_name, reader.line(), e.what());
    }
    result.set_metadata(fields[0], read_count(fields[6], reader, "seed"), fields[7]);
  }
  return result;
}

EvaluationResult read_wide_table(std::istream& in, Metric metric, const std::string& source_name) {
  csv::Reader reader(in, source_name);
  std::vector<std::string> header;
  if (!reader.next(header) || header.size() < 2) throw ParseError(source_name, 0, "wide table needs a header row");
  EvaluationResult result;
  std::vector<std::string> fields;
  while (reader.next(fields)) {
    if (fields.size() == 1 && fields[0].empty()) continue;
    if (fields.size() != header.size())
      throw ParseError(source_name, reader.line(),
                       "expected " + std::to_string(header.size()) + " fields, got " + std::to_string(fields.size()));
    for (std::size_t c = 1; c < header.size(); ++c) {
      MetricCell cell;
      cell.auc = cell.acc_bot50 = std::numeric_limits<double>::quiet_NaN();
      (metric == Metric::kAuc ? cell.auc : cell.acc_bot50) = read_metric(fields[c], reader, header[c].c_str());
      try {
        result.add(fields[0], header[c], cell);
      } catch (const Error& e) {
        throw ParseError(source_name, reader.line(), e.what());
      }
    }
  }
  return result;
}

}  // namespace litscreen
