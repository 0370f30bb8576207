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
#include "litscreen/questions.hpp"

#include <cctype>
#include <fstream>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "litscreen/error.hpp"
#include "litscreen/text.hpp"
#include "litscreen/unicode.hpp"

namespace litscreen {
namespace {

using nlohmann::json;

ResearchQuestion question_from_json(const json& entry, const std::string& source, std::size_t line) {
  if (!entry.is_object()) throw ParseError(source, line, "question entry is not an object");
  ResearchQuestion q;
  auto string_field = [&](const char* name) -> std::optional<std::string> {
    auto it = entry.find(name);
    if (it == entry.end() || it->is_null()) return std::nullopt;
    if (!it->is_string()) throw ParseError(source, line, std::string(name) + " must be a string");
    const auto& raw = it->get_ref<const std::string&>();
    if (!is_valid_utf8(raw)) throw ParseError(source, line, std::string(name) + " is not valid UTF-8");
    return normalize_nfc(raw);
  };
  auto id = string_field("question_id");
  if (!id || id->empty()) throw ParseError(source, line, "missing question_id");
  q.question_id = *id;
  auto text = string_field("standard_text");
  if (!text || text->find_first_not_of(" \t\r\n") == std::string::npos) {
    throw ParseError(source, line, "question " + q.question_id + ": missing standard_text");
  }
  q.standard_text = *text;
  for (PicoElement e : kPicoOrder) {
    auto value = string_field(std::string(pico_name(e)).c_str());
    if (value && value->find_first_not_of(" \t\r\n") == std::string::npos) {
      throw ParseError(source, line,
                       "question " + q.question_id + ": " + std::string(pico_name(e)) +
                           " is present but empty (omit the field or use null for an undefined element)");
    }
    q.pico.get(e) = std::move(value);
  }
  static const std::set<std::string> known = {"question_id", "standard_text", "population",
                                               "intervention", "comparator",    "outcome"};
  for (const auto& [key, value] : entry.items()) {
    if (known.count(key)) continue;
    q.metadata[key] = value.is_string() ? value.get<std::string>() : value.dump();
  }
  return q;
}

}  // namespace

std::string_view pico_name(PicoElement element) {
  switch (element) {
    case PicoElement::kPopulation: return "population";
    case PicoElement::kIntervention: return "intervention";
    case PicoElement::kComparator: return "comparator";
    case PicoElement::kOutcome: return "outcome";
  }
  return "unknown";
}

const std::optional<std::string>& PicoElements::get(PicoElement element) const {
  switch (element) {
    case PicoElement::kPopulation: return population;
    case PicoElement::kIntervention: return intervention;
    case PicoElement::kComparator: return comparator;
    case PicoElement::kOutcome: break;
  }
  return outcome;
}

std::optional<std::string>& PicoElements::get(PicoElement element) {
  return const_cast<std::optional<std::string>&>(std::as_const(*this).get(element));
}

void write_questions(std::ostream& out, const std::vector<ResearchQuestion>& questions) {
  for (const auto& q : questions) {
    json j = {{"question_id", q.question_id}, {"standard_text", q.standard_text}};
    for (PicoElement e : kPicoOrder)
      if (const auto& v = q.pico.get(e)) j[std::string(pico_name(e))] = *v;
    for (const auto& [k, v] : q.metadata) j[k] = v;
    out << j.dump() << '\n';
  }
}

std::vector<ResearchQuestion> load_questions(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open question file " + path.string());
  return parse_questions(in, path.string());
}

std::vector<ResearchQuestion> parse_questions(std::istream& in, const std::string& source_name) {
  std::stringstream buffer;
  buffer << in.rdbuf();
  const std::string content = buffer.str();
  std::vector<ResearchQuestion> out;
  const auto first = content.find_first_not_of(" \t\r\n");
  if (first == std::string::npos) return out;
  if (content[first] == '[') {
    json doc;
    try {
      doc = json::parse(content);
    } catch (const json::parse_error& e) {
      throw ParseError(source_name, 0, std::string("malformed JSON: ") + e.what());
    }
    std::size_t index = 0;
    for (const auto& entry : doc) {
      ++index;
      try {
        out.push_back(question_from_json(entry, source_name, 0));
      } catch (const ParseError& e) {
        throw ParseError(source_name, 0, "entry " + std::to_string(index) + ": " + e.message());
      }
    }
  } else {
    std::istringstream lines(content);
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(lines, line)) {
      ++line_no;
      if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
      json entry;
      try {
        entry = json::parse(line);
      } catch (const json::parse_error& e) {
        throw ParseError(source_name, line_no, std::string("malformed JSON: ") + e.what());
      }
      out.push_back(question_from_json(entry, source_name, line_no));
    }
  }
  std::set<std::string> ids;
  for (const auto& q : out) {
    if (!ids.insert(q.question_id).second) {
      throw ParseError(source_name, 0, "duplicate question_id " + q.question_id);
    }
  }
  return out;
}

std::vector<std::pair<PicoElement, std::string>> pico_views(const ResearchQuestion& question) {
  std::vector<std::pair<PicoElement, std::string>> views;
  for (PicoElement e : kPicoOrder) {
    if (const auto& text = question.pico.get(e)) views.emplace_back(e, *text);
  }
  return views;
}

const ResearchQuestion* find_question(const std::vector<ResearchQuestion>& questions, std::string_view id) {
  for (const auto& q : questions) {
    if (q.question_id == id) return &q;
  }
  return nullptr;
}

std::size_t count_syllables(std::string_view word) {
  auto is_vowel = [](char c) {
    switch (std::tolower(static_cast<unsigned char>(c))) {
      case 'a': case 'e': case 'i': case 'o': case 'u': case 'y': return true;
      default: return false;
    }
  };
  std::size_t groups = 0;
  bool in_group = false;
  std::size_t last_group_start = 0;
  for (std::size_t i = 0; i < word.size(); ++i) {
    if (is_vowel(word[i])) {
      if (!in_group) {
        ++groups;
        last_group_start = i;
      }
      in_group = true;
    } else {
      in_group = false;
    }
  }
  // silent terminal 'e': the last vowel group is exactly the final 'e'
  const bool silent_e = groups > 1 && word.size() >= 2 &&
                        std::tolower(static_cast<unsigned char>(word.back())) == 'e' &&
                        last_group_start == word.size() - 1;
  if (silent_e) --groups;
  return groups == 0 ? 1 : groups;
}

ReadabilityReport readability(std::string_view text) {
  ReadabilityReport report;
  auto close_sentence = [&](std::string_view sentence) {
    const auto words = tokenize(sentence);
    if (words.empty()) return;
    ++report.sentence_count;
    report.word_count += words.size();
    for (const auto& w : words) report.syllable_count += count_syllables(w);
  };
  std::size_t start = 0;
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (c != '.' && c != '!' && c != '?') continue;
    const bool at_boundary = i + 1 == text.size() || std::isspace(static_cast<unsigned char>(text[i + 1]));
    if (!at_boundary) continue;
    close_sentence(text.substr(start, i + 1 - start));
    start = i + 1;
  }
  if (start < text.size()) close_sentence(text.substr(start));
  if (report.word_count == 0) throw Error("no readable content");
  const double words = static_cast<double>(report.word_count);
  report.fkgl = 0.39 * (words / static_cast<double>(report.sentence_count)) +
                11.8 * (static_cast<double>(report.syllable_count) / words) - 15.59;
  return report;
}

}  // namespace litscreen
