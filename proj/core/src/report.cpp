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
#include "litscreen/report.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "csv.hpp"
#include "litscreen/error.hpp"
#include "num_format.hpp"

namespace litscreen {

TableFormat parse_table_format(std::string_view name) {
  if (name == "markdown" || name == "md") return TableFormat::kMarkdown;
  if (name == "csv") return TableFormat::kCsv;
  throw Error("unknown table format '" + std::string(name) + "' (expected markdown or csv)");
}

std::string format_3dp(double value) { return num::fixed(value, 3); }

std::vector<std::string> ResultTable::best_experiments(const std::string& question_id) const {
  std::vector<std::string> out;
  auto it = std::find(questions.begin(), questions.end(), question_id);
  if (it == questions.end()) throw Error("question '" + question_id + "' is not a table column");
  const std::size_t c = static_cast<std::size_t>(it - questions.begin());
  for (std::size_t r = 0; r < experiments.size(); ++r)
    if (best[r][c]) out.push_back(experiments[r]);
  return out;
}

namespace {

void mark_best(ResultTable& table) {
  table.best.assign(table.experiments.size(), std::vector<bool>(table.questions.size(), false));
  for (std::size_t c = 0; c < table.questions.size(); ++c) {
    double top = -INFINITY;
    for (std::size_t r = 0; r < table.experiments.size(); ++r) top = std::max(top, table.values[r][c]);
    for (std::size_t r = 0; r < table.experiments.size(); ++r) table.best[r][c] = table.values[r][c] == top;
  }
}

}  // namespace

ResultTable make_result_table(const EvaluationResult& result, Metric metric) {
  const auto missing = result.missing_cells(metric);
  if (!missing.empty()) {
    std::string msg = "incomplete " + std::string(metric_name(metric)) + " grid; missing cells:";
    for (const auto& [e, q] : missing) msg += " (" + e + ", " + q + ")";
    throw Error(msg);
  }
  ResultTable table;
  table.metric = metric;
  table.experiments = result.experiments();
  table.questions = result.questions();
  for (const auto& e : table.experiments) {
    std::vector<double> row;
    for (const auto& q : table.questions) row.push_back(metric_value(*result.find(e, q), metric));
    table.values.push_back(std::move(row));
  }
  mark_best(table);
  return table;
}

namespace {

std::string markdown_cell(std::string_view text) {
  std::string out;
  for (char ch : text) {
    if (ch == '|') out += "\\|";
    else out.push_back(ch);
  }
  return out;
}

}  // namespace

std::string render_table(const ResultTable& table, TableFormat format) {
  std::ostringstream out;
  if (format == TableFormat::kMarkdown) {
    out << "| experiment |";
    for (const auto& q : table.questions) out << ' ' << markdown_cell(q) << " |";
    out << "\n|---|";
    for (std::size_t c = 0; c < table.questions.size(); ++c) out << "---:|";
    out << '\n';
    for (std::size_t r = 0; r < table.experiments.size(); ++r) {
      out << "| " << markdown_cell(table.experiments[r]) << " |";
      for (std::size_t c = 0; c < table.questions.size(); ++c) {
        const std::string v = format_3dp(table.values[r][c]);
        out << ' ' << (table.best[r][c] ? "**" + v + "**" : v) << " |";
      }
      out << '\n';
    }
    return out.str();
  }
  std::vector<std::string> header{"experiment"};
  for (const auto& q : table.questions) {
    header.push_back(q);
    header.push_back(q + "_best");
  }
  csv::write_row(out, header);
  for (std::size_t r = 0; r < table.experiments.size(); ++r) {
    std::vector<std::string> row{table.experiments[r]};
    for (std::size_t c = 0; c < table.questions.size(); ++c) {
      row.push_back(num::shortest(table.values[r][c]));
      row.push_back(table.best[r][c] ? "true" : "false");
    }
    csv::write_row(out, row);
  }
  return out.str();
}

std::string render_table(const EvaluationResult& result, Metric metric, TableFormat format) {
  return render_table(make_result_table(result, metric), format);
}

ResultTable parse_table_csv(std::istream& in, Metric metric, const std::string& source_name) {
  csv::Reader reader(in, source_name);
  std::vector<std::string> header;
  if (!reader.next(header) || header.empty() || header[0] != "experiment" || header.size() % 2 == 0)
    throw ParseError(source_name, 1, "expected header experiment,<q>,<q>_best,...");
  ResultTable table;
  table.metric = metric;
  for (std::size_t c = 1; c < header.size(); c += 2) {
    if (header[c + 1] != header[c] + "_best")
      throw ParseError(source_name, 1, "column '" + header[c + 1] + "' should be '" + header[c] + "_best'");
    table.questions.push_back(header[c]);
  }
  std::vector<std::string> fields;
  while (reader.next(fields)) {
    if (fields.size() == 1 && fields[0].empty()) continue;
    if (fields.size() != header.size()) throw ParseError(source_name, reader.line(), "wrong number of fields");
    table.experiments.push_back(fields[0]);
    std::vector<double> values;
    std::vector<bool> best;
    for (std::size_t c = 1; c < fields.size(); c += 2) {
      auto v = num::parse_double(fields[c]);
      if (!v) throw ParseError(source_name, reader.line(), "invalid value '" + fields[c] + "'");
      if (fields[c + 1] != "true" && fields[c + 1] != "false")
        throw ParseError(source_name, reader.line(), "invalid best flag '" + fields[c + 1] + "'");
      values.push_back(*v);
      best.push_back(fields[c + 1] == "true");
    }
    table.values.push_back(std::move(values));
    table.best.push_back(std::move(best));
  }
  return table;
}

RankedList make_ranked_list(const std::string& question_id, std::span<const double> scores, const Corpus& corpus) {
  const auto indices = corpus.indices_of(question_id);
  if (indices.empty()) throw Error("question '" + question_id + "' has no records in the corpus");
  if (indices.size() != scores.size()) {
    throw Error("question '" + question_id + "' has " + std::to_string(indices.size()) + " articles but " +
                std::to_string(scores.size()) + " scores were given");
  }
  std::vector<ScoredRecord> scored;
  for (std::size_t k = 0; k < indices.size(); ++k)
    scored.push_back({question_id, indices[k], scores[k], corpus[indices[k]].label});
  RankedList list;
  list.question_id = question_id;
  for (std::size_t pos : ranking_order(scored))
    list.entries.push_back({corpus[scored[pos].index].article_id, scored[pos].score, scored[pos].index});
  list.boundary = list.entries.size() - list.entries.size() / 2;
  return list;
}

void write_ranked_list(std::ostream& out, const RankedList& list) {
  csv::write_row(out, {"rank", "article_id", "score", "bottom_half"});
  for (std::size_t k = 0; k < list.entries.size(); ++k) {
    csv::write_row(out, {std::to_string(k + 1), list.entries[k].article_id, num::shortest(list.entries[k].score),
                         k >= list.boundary ? "1" : "0"});
  }
}

}  // namespace litscreen
