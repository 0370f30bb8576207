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

// Synthetic screening corpora with planted, question-independent relevance
// signal: relevant articles repeat their question's keywords and use a
// shared "study design" vocabulary; irrelevant ones mostly do not.

#include <cstdint>
#include <string>
#include <vector>

#include "litscreen/corpus.hpp"
#include "litscreen/questions.hpp"

namespace litscreen {

struct SyntheticQuestionSpec {
  std::string question_id;
  std::size_t records = 300;
  double inclusion_rate = 0.1;  // rounded to the nearest record count
};

struct SyntheticSpec {
  std::vector<SyntheticQuestionSpec> questions;
  std::uint64_t seed = 7;
  // Probability that a relevant article looks irrelevant or vice versa.
  double label_noise = 0.02;

  // Six questions with inclusion rates 5, 10, 15, 20, 30 and 40 percent.
  static SyntheticSpec standard(std::size_t records_per_question = 300, std::uint64_t seed = 7);
};

struct SyntheticData {
  Corpus corpus;
  std::vector<ResearchQuestion> questions;
  // The planted keywords of each question, in question order.
  std::vector<std::vector<std::string>> keywords;
};

SyntheticData make_synthetic(const SyntheticSpec& spec);

}  // namespace litscreen
