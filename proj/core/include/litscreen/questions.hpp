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
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace litscreen {

enum class PicoElement { kPopulation, kIntervention, kComparator, kOutcome };

inline constexpr std::array<PicoElement, 4> kPicoOrder = {
    PicoElement::kPopulation, PicoElement::kIntervention, PicoElement::kComparator, PicoElement::kOutcome};

// "population", "intervention", "comparator", "outcome"
std::string_view pico_name(PicoElement element);

// Absent elements are nullopt, never empty strings.
struct PicoElements {
  std::optional<std::string> population;
  std::optional<std::string> intervention;
  std::optional<std::string> comparator;
  std::optional<std::string> outcome;

  const std::optional<std::string>& get(PicoElement element) const;
  std::optional<std::string>& get(PicoElement element);

  friend bool operator==(const PicoElements&, const PicoElements&) = default;
};

struct ResearchQuestion {
  std::string question_id;
  std::string standard_text;
  PicoElements pico;
  // Unrecognised string fields of the question file, carried through untouched.
  std::map<std::string, std::string> metadata;
};

// Reads a JSON array of question objects, or one JSON object per line.
std::vector<ResearchQuestion> load_questions(const std::filesystem::path& path);
std::vector<ResearchQuestion> parse_questions(std::istream& in, const std::string& source_name);

// Present PICO elements in population, intervention, comparator, outcome order.
// One JSON object per line; absent PICO elements are omitted.
void write_questions(std::ostream& out, const std::vector<ResearchQuestion>& questions);

std::vector<std::pair<PicoElement, std::string>> pico_views(const ResearchQuestion& question);

const ResearchQuestion* find_question(const std::vector<ResearchQuestion>& questions, std::string_view id);

struct ReadabilityReport {
  std::size_t word_count = 0;
  std::size_t sentence_count = 0;
  std::size_t syllable_count = 0;
  double fkgl = 0.0;
};

// Average grade level of journal-article text; questions above it read like
// the literature they are matched against.
inline constexpr double kJournalArticleFkgl = 15.87;

// Flesch-Kincaid grade level:
//   0.39 * words / sentences + 11.8 * syllables / words - 15.59
// Words are tokenize() tokens. A sentence ends at '.', '!' or '?' followed by
// whitespace or end of text; trailing text without a terminator is one more
// sentence. Only sentences containing a word are counted.
// Throws Error("no readable content") when the text has no words.
ReadabilityReport readability(std::string_view text);

// Vowel groups (a, e, i, o, u, y), minus one for a silent terminal 'e' unless
// it is the only group, minimum 1.
std::size_t count_syllables(std::string_view word);

}  // namespace litscreen
