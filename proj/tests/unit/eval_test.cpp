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
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "litscreen/corpus.hpp"
#include "litscreen/error.hpp"
#include "litscreen/eval.hpp"
#include "oracles.hpp"

namespace litscreen {
namespace {

std::vector<ScoredRecord> scored(const std::vector<double>& scores, const std::vector<int>& labels) {
  std::vector<ScoredRecord> out;
  for (std::size_t i = 0; i < scores.size(); ++i) out.push_back({"Q", i, scores[i], labels[i]});
  return out;
}

// ---- folds ---------------------------------------------------------------

Corpus corpus_with(const std::vector<std::string>& question_ids) {
  std::vector<ArticleRecord> records;
  for (std::size_t i = 0; i < question_ids.size(); ++i) {
    records.push_back({question_ids[i], "A" + std::to_string(i), "title", "abstract", static_cast<int>(i % 2)});
  }
  return Corpus(std::move(records));
}

TEST(LoqoFolds, TenQuestionsGiveTenFoldsOfNine) {
  std::vector<std::string> ids;
  for (const char* q : {"LANB", "PID", "CIDP", "PBRT", "IORT", "ESG", "EMR", "CARGEL", "LMTA", "VERT"}) {
    ids.push_back(q);
    ids.push_back(q);
  }
  const auto plan = loqo_folds(corpus_with(ids));
  ASSERT_EQ(plan.folds.size(), 10u);
  EXPECT_EQ(plan.folds[0].held_out, "LANB");
  EXPECT_EQ(plan.folds[9].held_out, "VERT");
  for (const auto& fold : plan.folds) {
    EXPECT_EQ(fold.train.size(), 9u);
    EXPECT_EQ(std::count(fold.train.begin(), fold.train.end(), fold.held_out), 0);
  }
}

TEST(LoqoFolds, TwoQuestionsTrainOnEachOther) {
  const auto plan = loqo_folds(corpus_with({"B", "A", "B"}));
  ASSERT_EQ(plan.folds.size(), 2u);
  EXPECT_EQ(plan.folds[0].held_out, "B");
  EXPECT_EQ(plan.folds[0].train, std::vector<std::string>{"A"});
  EXPECT_EQ(plan.folds[1].train, std::vector<std::string>{"B"});
}

TEST(LoqoFolds, SingleQuestionIsAnError) {
  EXPECT_THROW(loqo_folds(corpus_with({"A", "A"})), Error);
}

TEST(LoqoFolds, TrainSetsCoverAllOtherQuestions) {
  const std::vector<std::string> ids = {"q1", "q2", "q3", "q4", "q5"};
  for (const auto& fold : loqo_folds(ids).folds) {
    std::vector<std::string> expected;
    for (const auto& id : ids)
      if (id != fold.held_out) expected.push_back(id);
    EXPECT_EQ(fold.train, expected);
  }
}

// ---- AUC -----------------------------------------------------------------

TEST(Auc, Examples) {
  EXPECT_EQ(auc(scored({0.1, 0.2, 0.8, 0.9}, {0, 0, 1, 1})), 1.0);
  EXPECT_EQ(auc(scored({0.5, 0.5, 0.5, 0.5}, {0, 1, 0, 1})), 0.5);
  EXPECT_EQ(auc(scored({0.9, 0.8, 0.7, 0.6}, {1, 0, 1, 0})), 0.75);
}

TEST(Auc, SingleClassIsUndefined) {
  try {
    (void)auc(scored({0.1, 0.2}, {1, 1}));
    FAIL();
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("AUC undefined"), std::string::npos);
  }
}

std::vector<ScoredRecord> random_instance(std::mt19937_64& rng, std::size_t max_n) {
  std::uniform_int_distribution<std::size_t> size(2, max_n);
  std::uniform_int_distribution<int> level(0, 7);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::bernoulli_distribution coin(0.4);
  const std::size_t n = size(rng);
  std::vector<ScoredRecord> records;
  for (std::size_t i = 0; i < n; ++i) {
    // half the instances draw from a few levels to force ties
    const double s = n % 2 ? level(rng) / 7.0 : u(rng);
    records.push_back({"Q", i, s, coin(rng) ? 1 : 0});
  }
  records[0].label = 1;
  records[1].label = 0;
  return records;
}

TEST(Auc, MatchesPairCountingOracle) {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 1000; ++trial) {
    const auto r = random_instance(rng, 50);
    ASSERT_NEAR(auc(r), testing::auc_pairs(r), 1e-12) << "trial " << trial;
  }
}

TEST(Auc, InvariantUnderStrictlyIncreasingTransform) {
  std::mt19937_64 rng(22);
  for (int trial = 0; trial < 200; ++trial) {
    auto r = random_instance(rng, 60);
    const double before = auc(r);
    for (auto& x : r) x.score = std::exp(3.0 * x.score) - 10.0;
    EXPECT_EQ(auc(r), before);
  }
}

// ---- bottom 50% ----------------------------------------------------------

TEST(AccBot50, Examples) {
  EXPECT_EQ(acc_bot50(scored({0.1, 0.2, 0.8, 0.9}, {0, 0, 1, 1})), 1.0);
  EXPECT_EQ(acc_bot50(scored({0.1, 0.2, 0.8, 0.9}, {1, 0, 0, 1})), 0.5);
  EXPECT_EQ(acc_bot50(scored({0.4, 0.1, 0.3}, {1, 1, 1})), 0.0);
}

TEST(AccBot50, TooFewRecords) {
  EXPECT_THROW(acc_bot50(scored({0.1}, {0})), Error);
  EXPECT_THROW(acc_bot50(scored({}, {})), Error);
}

TEST(AccBot50, OddCountUsesFloor) {
  const auto b = bottom_half(scored({0.5, 0.1, 0.9, 0.3, 0.7}, {0, 0, 0, 0, 0}));
  EXPECT_EQ(b.bottom_indices, (std::vector<std::size_t>{1, 3}));
  EXPECT_EQ(b.cutoff, 0.3);
}

TEST(AccBot50, TiesSendLaterPositionsToTheBottomFirst) {
  const auto b = bottom_half(scored({0.5, 0.5, 0.5, 0.5}, {1, 0, 1, 0}));
  EXPECT_EQ(b.bottom_indices, (std::vector<std::size_t>{2, 3}));
  // Same set as the tail of the ranked order.
  const auto r = scored({0.5, 0.5, 0.5, 0.5}, {1, 0, 1, 0});
  const auto order = ranking_order(r);
  EXPECT_EQ(order, (std::vector<std::size_t>{0, 1, 2, 3}));
}

TEST(AccBot50, MatchesSortBasedOracle) {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 1000; ++trial) {
    const auto r = random_instance(rng, 50);
    ASSERT_EQ(acc_bot50(r), testing::acc_bot50_sorted(r)) << "trial " << trial;
  }
}

TEST(AccBot50, BottomSetDominatedByTheRest) {
  std::mt19937_64 rng(24);
  for (int trial = 0; trial < 200; ++trial) {
    const auto r = random_instance(rng, 40);
    const auto b = bottom_half(r);
    ASSERT_EQ(b.bottom_indices.size(), r.size() / 2);
    double top_min = INFINITY, bottom_max = -INFINITY;
    for (const auto& x : r) {
      const bool in = std::binary_search(b.bottom_indices.begin(), b.bottom_indices.end(), x.index);
      if (in) {
        bottom_max = std::max(bottom_max, x.score);
      } else {
        top_min = std::min(top_min, x.score);
      }
    }
    EXPECT_LE(bottom_max, top_min);
    EXPECT_EQ(b.cutoff, bottom_max);
  }
}

TEST(AccBot50, RowPermutationDoesNotMatter) {
  std::mt19937_64 rng(25);
  for (int trial = 0; trial < 200; ++trial) {
    auto r = random_instance(rng, 40);
    const double before = acc_bot50(r);
    const double auc_before = auc(r);
    std::shuffle(r.begin(), r.end(), rng);
    EXPECT_EQ(acc_bot50(r), before);
    EXPECT_EQ(auc(r), auc_before);
  }
}

TEST(AccBot50, ConcentratesAtOneMinusInclusionRateForUninformativeScores) {
  std::mt19937_64 rng(26);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const std::size_t n = 2000;
  const double rate = 0.15;
  double sum = 0;
  int within = 0;
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<ScoredRecord> r;
    for (std::size_t i = 0; i < n; ++i) r.push_back({"Q", i, u(rng), i < n * rate ? 1 : 0});
    const double v = acc_bot50(r);
    sum += v;
    within += std::abs(v - (1.0 - rate)) <= 0.02;
  }
  EXPECT_NEAR(sum / 200.0, 1.0 - rate, 0.02);
  EXPECT_GE(within, 190);
}

// ---- result grid ---------------------------------------------------------

TEST(EvaluationResult, KeepsInsertionOrderAndRejectsDuplicates) {
  EvaluationResult r;
  r.add("exp-b", "Q2", {0.7, 0.8, 10, 2});
  r.add("exp-a", "Q1", {0.6, 0.9, 12, 3});
  EXPECT_EQ(r.experiments(), (std::vector<std::string>{"exp-b", "exp-a"}));
  EXPECT_EQ(r.questions(), (std::vector<std::string>{"Q2", "Q1"}));
  EXPECT_THROW(r.add("exp-b", "Q2", {}), Error);
  EXPECT_EQ(r.missing_cells().size(), 2u);
  ASSERT_NE(r.find("exp-a", "Q1"), nullptr);
  EXPECT_EQ(r.find("exp-a", "Q1")->n, 12u);
  EXPECT_EQ(r.find("exp-a", "Q2"), nullptr);
}

TEST(EvaluationResult, MissingCellsByMetric) {
  EvaluationResult r;
  r.add("e", "Q1", {0.6, NAN, 0, 0});
  EXPECT_TRUE(r.missing_cells(Metric::kAuc).empty());
  EXPECT_EQ(r.missing_cells(Metric::kAccBot50).size(), 1u);
}

TEST(EvaluationResult, CsvRoundTripIsExact) {
  EvaluationResult r;
  r.add("1 - LGBM", "Q1", {0.1 + 0.2, 2.0 / 3.0, 17, 5});
  r.add("1 - LGBM", "Q2", {0.5, 1.0, 4, 1});
  r.add("2 - Linear, PICO", "Q1", {1e-17, 0.0, 3, 1});
  r.add("2 - Linear, PICO", "Q2", {0.75, 0.25, 8, 2});
  r.set_metadata("1 - LGBM", 42, "abc123");
  r.set_metadata("2 - Linear, PICO", 7, "def456");
  std::stringstream buffer;
  write_results_csv(buffer, r);
  EXPECT_EQ(buffer.str().substr(0, buffer.str().find('\n')),
            "experiment,question_id,auc,acc_bot50,n,positives,seed,config_digest");
  const auto back = read_results_csv(buffer, "results.csv");
  EXPECT_TRUE(back == r);
  EXPECT_EQ(back.find("1 - LGBM", "Q1")->auc, 0.1 + 0.2);
  EXPECT_EQ(back.seed("2 - Linear, PICO"), 7u);
  EXPECT_EQ(back.config_digest("1 - LGBM"), "abc123");
}

TEST(EvaluationResult, MalformedCsvReportsTheLine) {
  std::stringstream bad("experiment,question_id,auc,acc_bot50,n,positives,seed,config_digest\ne,Q,abc,0,1,1,0,x\n");
  try {
    (void)read_results_csv(bad, "bad.csv");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_NE(std::string(e.what()).find("bad.csv"), std::string::npos) << e.what();
    EXPECT_NE(std::string(e.what()).find("2"), std::string::npos) << e.what();
  }
}

TEST(EvaluationResult, MergeCombinesDisjointGrids) {
  EvaluationResult a, b;
  a.add("e1", "Q1", {0.5, 0.5, 2, 1});
  b.add("e2", "Q1", {0.6, 0.4, 2, 1});
  a.merge(b);
  EXPECT_EQ(a.experiments().size(), 2u);
  EXPECT_THROW(a.merge(b), Error);
}

TEST(Metric, NamesRoundTrip) {
  EXPECT_EQ(parse_metric(metric_name(Metric::kAuc)), Metric::kAuc);
  EXPECT_EQ(parse_metric(metric_name(Metric::kAccBot50)), Metric::kAccBot50);
  EXPECT_THROW(parse_metric("f1"), Error);
}

}  // namespace
}  // namespace litscreen
