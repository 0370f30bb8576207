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
#include "litscreen/corpus.hpp"

#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <unordered_map>

#include <nlohmann/json.hpp>

#include "csv.hpp"
#include "litscreen/error.hpp"
#include "litscreen/unicode.hpp"

namespace litscreen {
namespace {

using nlohmann::json;

constexpr const char* kFields[] = {"question_id", "article_id", "title", "abstract", "label"};

std::string key_of(const ArticleRecord& r) { return r.question_id + '\x1f' + r.article_id; }

std::string normalized_field(const std::string& value, const std::string& source, std::size_t line,
                             const char* name) {
  if (!is_valid_utf8(value)) throw ParseError(source, line, std::string(name) + " is not valid UTF-8");
  return normalize_nfc(value);
}

int parse_label_text(const std::string& text, const std::string& source, std::size_t line) {
  if (text == "0") return 0;
  if (text == "1") return 1;
  throw ParseError(source, line, "label out of domain: '" + text + "'");
}

class RecordSink {
 public:
  explicit RecordSink(std::string source) : source_(std::move(source)) {}

  void add(ArticleRecord record, std::size_t line) {
    if (auto violation = validate_record(record)) throw ParseError(source_, line, *violation);
    auto [it, inserted] = seen_.emplace(key_of(record), line);
    if (!inserted) {
      throw ParseError(source_, line,
                       "duplicate (question_id, article_id) = (" + record.question_id + ", " +
                           record.article_id + "), first seen on line " + std::to_string(it->second));
    }
    records_.push_back(std::move(record));
  }

  Corpus finish() && { return Corpus(std::move(records_), source_); }

 private:
  std::string source_;
  std::vector<ArticleRecord> records_;
  std::unordered_map<std::string, std::size_t> seen_;
};

Corpus parse_jsonl(std::istream& in, const std::string& source) {
  RecordSink sink(source);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    json row;
    try {
      row = json::parse(line);
    } catch (const json::parse_error& e) {
      throw ParseError(source, line_no, std::string("malformed JSON: ") + e.what());
    }
    if (!row.is_object()) throw ParseError(source, line_no, "record is not a JSON object");
    ArticleRecord r;
    for (const char* name : {"question_id", "article_id", "title", "abstract"}) {
      auto it = row.find(name);
      if (it == row.end() || it->is_null()) {
        if (std::string_view(name) == "title" || std::string_view(name) == "abstract") continue;
        throw ParseError(source, line_no, std::string("missing field ") + name);
      }
      if (!it->is_string()) throw ParseError(source, line_no, std::string(name) + " must be a string");
      std::string value = normalized_field(it->get<std::string>(), source, line_no, name);
      if (std::string_view(name) == "question_id") r.question_id = std::move(value);
      else if (std::string_view(name) == "article_id") r.article_id = std::move(value);
      else if (std::string_view(name) == "title") r.title = std::move(value);
      else r.abstract = std::move(value);
    }
    auto label = row.find("label");
    if (label == row.end()) throw ParseError(source, line_no, "missing field label");
    if (!label->is_number_integer()) {
      throw ParseError(source, line_no, "label out of domain: " + label->dump());
    }
    const auto value = label->get<long long>();
    if (value != 0 && value != 1) {
      throw ParseError(source, line_no, "label out of domain: " + std::to_string(value));
    }
    r.label = static_cast<int>(value);
    sink.add(std::move(r), line_no);
  }
  return std::move(sink).finish();
}

Corpus parse_csv(std::istream& in, const std::string& source) {
  csv::Reader reader(in, source);
  std::vector<std::string> fields;
  RecordSink sink(source);
  if (!reader.next(fields)) return std::move(sink).finish();
  std::map<std::string, std::size_t> column;
  for (std::size_t i = 0; i < fields.size(); ++i) {
    std::string name = fields[i];
    if (i == 0 && name.rfind("\xEF\xBB\xBF", 0) == 0) name.erase(0, 3);
    column[name] = i;
  }
  for (const char* name : kFields) {
    if (!column.count(name)) throw ParseError(source, 1, std::string("header is missing column ") + name);
  }
  const std::size_t width = fields.size();
  while (reader.next(fields)) {
    if (fields.size() == 1 && fields[0].empty()) continue;
    const std::size_t line = reader.line();
    if (fields.size() != width) {
      throw ParseError(source, line, "expected " + std::to_string(width) + " fields, found " +
                                         std::to_string(fields.size()));
    }
    ArticleRecord r;
    r.question_id = normalized_field(fields[column["question_id"]], source, line, "question_id");
    r.article_id = normalized_field(fields[column["article_id"]], source, line, "article_id");
    r.title = normalized_field(fields[column["title"]], source, line, "title");
    r.abstract = normalized_field(fields[column["abstract"]], source, line, "abstract");
    r.label = parse_label_text(fields[column["label"]], source, line);
    sink.add(std::move(r), line);
  }
  return std::move(sink).finish();
}

}  // namespace

std::optional<std::string> validate_record(const ArticleRecord& record) {
  if (record.question_id.empty()) return "question_id is empty";
  if (record.article_id.empty()) return "article_id is empty";
  if (record.label != 0 && record.label != 1) return "label out of domain: " + std::to_string(record.label);
  if (record.title.empty() && record.abstract.empty()) return "title and abstract are both empty";
  return std::nullopt;
}

std::string article_text(const ArticleRecord& record) {
  if (record.title.empty()) return record.abstract;
  if (record.abstract.empty()) return record.title;
  return record.title + ' ' + record.abstract;
}

Corpus::Corpus(std::vector<ArticleRecord> records, std::string source_path)
    : records_(std::move(records)), source_path_(std::move(source_path)) {
  std::set<std::string> keys;
  for (std::size_t i = 0; i < records_.size(); ++i) {
    if (auto violation = validate_record(records_[i])) {
      throw Error("record " + std::to_string(i) + ": " + *violation);
    }
    if (!keys.insert(key_of(records_[i])).second) {
      throw Error("record " + std::to_string(i) + ": duplicate (question_id, article_id) = (" +
                  records_[i].question_id + ", " + records_[i].article_id + ")");
    }
  }
}

std::vector<std::string> Corpus::question_ids() const {
  std::vector<std::string> ids;
  std::set<std::string_view> seen;
  for (const auto& r : records_) {
    if (seen.insert(r.question_id).second) ids.push_back(r.question_id);
  }
  return ids;
}

std::vector<std::size_t> Corpus::indices_of(std::string_view question_id) const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < records_.size(); ++i) {
    if (records_[i].question_id == question_id) out.push_back(i);
  }
  return out;
}

CorpusFormat corpus_format_for(const std::filesystem::path& path) {
  auto ext = path.extension().string();
  for (auto& c : ext) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return ext == ".csv" ? CorpusFormat::kCsv : CorpusFormat::kJsonl;
}

Corpus parse_corpus(const std::filesystem::path& path, CorpusFormat format) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open corpus file " + path.string());
  return parse_corpus(in, format, path.string());
}

Corpus parse_corpus(std::istream& in, CorpusFormat format, const std::string& source_name) {
  return format == CorpusFormat::kCsv ? parse_csv(in, source_name) : parse_jsonl(in, source_name);
}

void write_corpus(std::ostream& out, const Corpus& corpus, CorpusFormat format) {
  if (format == CorpusFormat::kCsv) {
    csv::write_row(out, {kFields[0], kFields[1], kFields[2], kFields[3], kFields[4]});
    for (const auto& r : corpus.records()) {
      csv::write_row(out, {r.question_id, r.article_id, r.title, r.abstract, std::to_string(r.label)});
    }
    return;
  }
  for (const auto& r : corpus.records()) {
    json row = json::object();
    row["question_id"] = r.question_id;
    row["article_id"] = r.article_id;
    row["title"] = r.title;
    row["abstract"] = r.abstract;
    row["label"] = r.label;
    out << row.dump() << '\n';
  }
}

std::vector<QuestionStats> corpus_stats(const Corpus& corpus) {
  std::vector<QuestionStats> stats;
  std::unordered_map<std::string, std::size_t> slot;
  QuestionStats overall{std::string(kOverallStatsId)};
  for (const auto& r : corpus.records()) {
    auto [it, inserted] = slot.emplace(r.question_id, stats.size());
    if (inserted) stats.push_back(QuestionStats{r.question_id});
    auto& s = stats[it->second];
    ++s.record_count;
    ++overall.record_count;
    if (r.relevant()) {
      ++s.relevant_count;
      ++overall.relevant_count;
    }
  }
  stats.push_back(overall);
  for (auto& s : stats) {
    s.inclusion_rate = s.record_count ? static_cast<double>(s.relevant_count) / static_cast<double>(s.record_count) : 0.0;
  }
  return stats;
}

std::string format_inclusion_rate(std::size_t relevant, std::size_t records) {
  if (records == 0) return "0.0%";
  // tenths of a percent, half-up: floor((2000 * relevant + records) / (2 * records))
  const unsigned long long tenths =
      (2000ULL * relevant + records) / (2ULL * records);
  return std::to_string(tenths / 10) + "." + std::to_string(tenths % 10) + "%";
}

void write_stats_csv(std::ostream& out, std::span<const QuestionStats> stats) {
  out << "question_id,records,relevant,inclusion_rate\n";
  for (const auto& s : stats) {
    csv::write_row(out, {s.question_id, std::to_string(s.record_count), std::to_string(s.relevant_count),
                         format_inclusion_rate(s.relevant_count, s.record_count)});
  }
}

}  // namespace litscreen
