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
#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "litscreen/error.hpp"
#include "litscreen/report.hpp"

namespace litscreen {
namespace {

EvaluationResult load_fixture(const std::string& name, Metric metric) {
  std::ifstream in(std::string(LITSCREEN_FIXTURE_DIR) + "/" + name);
  EXPECT_TRUE(in) << name;
  return read_wide_table(in, metric, name);
}

using Highlights = std::map<std::string, std::set<std::string>>;

// Highlighted (column maximum) cells of the published AUC table.
const Highlights kAucHighlights = {
    {"CARGEL", {"4 - Fine-tune-02e-BioBERT"}},
    {"CIDP", {"3 - LGBM-BlueBERTxL"}},
    {"EMR", {"3 - LGBM-BlueBERTxL"}},
    {"ESG", {"4 - Fine-tune-01e-BioBERT"}},
    {"IORT", {"3 - LGBM-BlueBERT"}},
    {"LANB", {"4 - Fine-tune-01e-BioBERT"}},
    {"LMTA", {"4 - Fine-tune-01e-BioBERT"}},
    {"PBRT", {"2 - LGBM-TFID-PICO", "3 - LGBM-BlueBERT-PICO"}},
    {"VERT", {"4 - Fine-tune-01e-BioBERT"}},
    {"PID", {"2 - LGBM-TFID-PICO"}},
};

// Highlighted cells of the published bottom-50% accuracy table.
const Highlights kAccHighlights = {
    {"CARGEL",
     {"1 - TFIDF-LGBM", "2 - TFIDF-ExtaTrees-PICO", "2 - TFIDF-LGBM-PICO", "3 - LGBM-BlueBERT",
      "3 - LGBM-BlueBERT-PICO"}},
    {"CIDP", {"1 - TFIDF-LGBM", "3 - LGBM-BlueBERTxL"}},
    {"EMR", {"3 - LGBM-BlueBERTxL"}},
    {"ESG", {"4 - Fine-tune-01e-BioBERT"}},
    {"IORT", {"1 - TFIDF-LGBM", "3 - LGBM-BlueBERTxL"}},
    {"LANB", {"4 - Fine-tune-01e-BioBERT"}},
    {"LMTA", {"4 - Fine-tune-01e-BioBERT"}},
    {"PBRT", {"4 - Fine-tune-01e-BioBERT", "4 - Fine-tune-02e-BioBERT"}},
    {"VERT", {"4 - Fine-tune-01e-BioBERT"}},
    {"PID", {"2 - TFIDF-ExtaTrees-PICO", "2 - TFIDF-LGBM-PICO", "3 - LGBM-BlueBERT-PICO"}},
};

void expect_highlights(const ResultTable& table, const Highlights& expected) {
  for (const auto& [question, rows] : expected) {
    const auto best = table.best_experiments(question);
    EXPECT_EQ(std::set<std::string>(best.begin(), best.end()), rows) << question;
  }
}

TEST(PublishedTables, AucLayoutAndBestCells) {
  const auto table = make_result_table(load_fixture("table3_auc.csv", Metric::kAuc), Metric::kAuc);
  EXPECT_EQ(table.experiments.size(), 17u);
  EXPECT_EQ(table.questions.size(), 10u);
  EXPECT_EQ(table.experiments.front(), "1 - Linear");
  EXPECT_EQ(table.questions.front(), "CARGEL");
  EXPECT_EQ(table.questions.back(), "PID");
  EXPECT_EQ(table.values[16][0], 0.873);
  EXPECT_EQ(table.values[12][4], 0.824);
  expect_highlights(table, kAucHighlights);
}

TEST(PublishedTables, AccBot50BestCellsIncludingTies) {
  const auto table = make_result_table(load_fixture("table4_acc_bot50.csv", Metric::kAccBot50), Metric::kAccBot50);
  EXPECT_EQ(table.experiments.size(), 17u);
  EXPECT_EQ(table.values[0][0], 0.977);
  expect_highlights(table, kAccHighlights);
}

TEST(PublishedTables, MarkdownBoldsEveryBestCell) {
  const std::string md = render_table(load_fixture("table3_auc.csv", Metric::kAuc), Metric::kAuc, TableFormat::kMarkdown);
  EXPECT_NE(md.find("| 4 - Fine-tune-02e-BioBERT | **0.873** |"), std::string::npos) << md;
  EXPECT_NE(md.find("| 1 - Linear | 0.436 | 0.438 | 0.520 |"), std::string::npos) << md;
  std::size_t bold = 0;
  for (std::size_t p = md.find("**"); p != std::string::npos; p = md.find("**", p + 2)) ++bold;
  EXPECT_EQ(bold, 2u * 11u);  // 11 highlighted cells, two markers each
}

TEST(PublishedTables, CsvRenderingRoundTripsEveryCell) {
  for (auto [name, metric] : {std::pair{"table3_auc.csv", Metric::kAuc}, std::pair{"table4_acc_bot50.csv", Metric::kAccBot50}}) {
    const auto table = make_result_table(load_fixture(name, metric), metric);
    std::istringstream in(render_table(table, TableFormat::kCsv));
    const auto back = parse_table_csv(in, metric, "roundtrip.csv");
    EXPECT_EQ(back.experiments, table.experiments);
    EXPECT_EQ(back.questions, table.questions);
    EXPECT_EQ(back.values, table.values);
    EXPECT_EQ(back.best, table.best);
  }
}

TEST(ResultTables, CsvRoundTripKeepsFullPrecision) {
  EvaluationResult r;
  r.add("a, with comma", "Q1", {0.1 + 0.2, 1.0 / 3.0, 3, 1});
  r.add("b", "Q1", {2.0 / 3.0, 0.5, 3, 1});
  const auto table = make_result_table(r, Metric::kAuc);
  std::istringstream in(render_table(table, TableFormat::kCsv));
  const auto back = parse_table_csv(in, Metric::kAuc, "t.csv");
  EXPECT_EQ(back.values[0][0], 0.1 + 0.2);
  EXPECT_EQ(back.experiments[0], "a, with comma");
}

TEST(ResultTables, IncompleteGridListsMissingCells) {
  EvaluationResult r;
  r.add("e1", "Q1", {0.5, 0.5, 2, 1});
  r.add("e2", "Q2", {0.5, 0.5, 2, 1});
  try {
    (void)make_result_table(r, Metric::kAuc);
    FAIL();
  } catch (const Error& e) {
    const std::string what = e.what();
    EXPECT_NE(what.find("e1"), std::string::npos) << what;
    EXPECT_NE(what.find("Q2"), std::string::npos) << what;
    EXPECT_NE(what.find("e2"), std::string::npos) << what;
  }
}

TEST(ResultTables, FormatThreeDecimals) {
  EXPECT_EQ(format_3dp(0.52), "0.520");
  EXPECT_EQ(format_3dp(1.0), "1.000");
  EXPECT_EQ(format_3dp(0.0), "0.000");
}

TEST(ResultTables, ParsesFormatNames) {
  EXPECT_EQ(parse_table_format("markdown"), TableFormat::kMarkdown);
  EXPECT_EQ(parse_table_format("csv"), TableFormat::kCsv);
  EXPECT_THROW(parse_table_format("html"), Error);
}

TEST(ResultTables, MalformedCsvHeaderIsAParseError) {
  std::istringstream in("experiment,Q1,Q1_wrong\na,0.5,true\n");
  EXPECT_THROW(parse_table_csv(in, Metric::kAuc, "bad.csv"), ParseError);
}

// ---- ranked lists ---------------------------------------------------------

Corpus question_corpus(std::size_t n, const std::string& qid = "Q") {
  std::vector<ArticleRecord> records;
  records.push_back({"OTHER", "X0", "t", "a", 0});
  for (std::size_t i = 0; i < n; ++i) records.push_back({qid, "A" + std::to_string(i), "t", "a", static_cast<int>(i % 2)});
  return Corpus(std::move(records));
}

TEST(RankedList, EvenCountSplitsInHalf) {
  const auto corpus = question_corpus(4);
  const std::vector<double> scores = {0.2, 0.9, 0.1, 0.5};
  const auto list = make_ranked_list("Q", scores, corpus);
  ASSERT_EQ(list.entries.size(), 4u);
  EXPECT_EQ(list.entries[0].article_id, "A1");
  EXPECT_EQ(list.entries[3].article_id, "A2");
  EXPECT_EQ(list.boundary, 2u);
  std::ostringstream out;
  write_ranked_list(out, list);
  EXPECT_EQ(out.str(), "rank,article_id,score,bottom_half\n1,A1,0.9,0\n2,A3,0.5,0\n3,A0,0.2,1\n4,A2,0.1,1\n");
}

TEST(RankedList, OddCountPutsFloorHalfBelowBoundary) {
  const auto corpus = question_corpus(5);
  const std::vector<double> scores = {0.5, 0.4, 0.3, 0.2, 0.1};
  const auto list = make_ranked_list("Q", scores, corpus);
  EXPECT_EQ(list.boundary, 3u);
  EXPECT_EQ(list.entries.size() - list.boundary, 2u);
}

TEST(RankedList, TiesKeepCorpusOrderAndMatchBottomHalf) {
  const auto corpus = question_corpus(4);
  const std::vector<double> scores = {0.5, 0.5, 0.5, 0.5};
  const auto list = make_ranked_list("Q", scores, corpus);
  std::vector<std::string> ids;
  for (const auto& e : list.entries) ids.push_back(e.article_id);
  EXPECT_EQ(ids, (std::vector<std::string>{"A0", "A1", "A2", "A3"}));

  std::vector<ScoredRecord> scored;
  const auto idx = corpus.indices_of("Q");
  for (std::size_t k = 0; k < idx.size(); ++k) scored.push_back({"Q", idx[k], scores[k], corpus[idx[k]].label});
  const auto bottom = bottom_half(scored);
  std::vector<std::size_t> below;
  for (std::size_t k = list.boundary; k < list.entries.size(); ++k) below.push_back(list.entries[k].corpus_index);
  std::sort(below.begin(), below.end());
  EXPECT_EQ(below, bottom.bottom_indices);
}

TEST(RankedList, ContainsEveryArticleOnce) {
  const auto corpus = question_corpus(31);
  std::vector<double> scores;
  for (std::size_t i = 0; i < 31; ++i) scores.push_back(static_cast<double>((i * 7) % 5));
  const auto list = make_ranked_list("Q", scores, corpus);
  std::set<std::string> ids;
  for (std::size_t k = 0; k < list.entries.size(); ++k) {
    ids.insert(list.entries[k].article_id);
    if (k > 0) {
      EXPECT_GE(list.entries[k - 1].score, list.entries[k].score);
    }
  }
  EXPECT_EQ(ids.size(), 31u);
}

TEST(RankedList, RejectsCountMismatchAndUnknownQuestion) {
  const auto corpus = question_corpus(3);
  EXPECT_THROW(make_ranked_list("Q", std::vector<double>{0.1, 0.2}, corpus), Error);
  EXPECT_THROW(make_ranked_list("NOPE", std::vector<double>{}, corpus), Error);
  EXPECT_THROW(make_ranked_list("Q", std::vector<double>{0.1, NAN, 0.2}, corpus), Error);
}

}  // namespace
}  // namespace litscreen
