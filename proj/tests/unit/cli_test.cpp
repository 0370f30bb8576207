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

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "cli.hpp"
#include "litscreen/corpus.hpp"
#include "litscreen/eval.hpp"
#include "litscreen/questions.hpp"
#include "litscreen/synthetic.hpp"
#include "temp_dir.hpp"

namespace litscreen {
namespace {

struct Invocation {
  int status = -1;
  std::string out;
  std::string err;
};

Invocation invoke(std::vector<std::string> args) {
  args.insert(args.begin(), "litscreen");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  Invocation r;
  r.status = cli_dispatch(static_cast<int>(argv.size()), argv.data(), out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

std::string slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    SyntheticSpec spec;
    spec.questions = {{"QA", 60, 0.25}, {"QB", 50, 0.3}, {"QC", 40, 0.25}};
    const auto data = make_synthetic(spec);
    std::ofstream c(corpus_path());
    write_corpus(c, data.corpus, CorpusFormat::kJsonl);
    std::ofstream q(questions_path());
    write_questions(q, data.questions);
    std::ofstream(config_path()) << R"({"seed": 5, "experiments": [
        {"label": "quick", "strategy": 1, "model": {"family": "gbdt", "hyperparameters": {"trees": 15, "min_leaf": 5}},
         "tfidf": "both"}]})";
  }
  std::string corpus_path() const { return (dir / "corpus.jsonl").string(); }
  std::string questions_path() const { return (dir / "questions.jsonl").string(); }
  std::string config_path() const { return (dir / "grid.json").string(); }

  testing::TempDir dir;
};

TEST_F(CliTest, HelpExitsZero) {
  const auto r = invoke({"--help"});
  EXPECT_EQ(r.status, 0);
  EXPECT_NE(r.out.find("stats"), std::string::npos);
  EXPECT_NE(r.out.find("question-audit"), std::string::npos);
}

TEST_F(CliTest, UsageErrorsExitTwo) {
  EXPECT_EQ(invoke({}).status, 2);
  EXPECT_EQ(invoke({"frobnicate"}).status, 2);
  EXPECT_EQ(invoke({"run", "--corpus", corpus_path()}).status, 2);
  EXPECT_EQ(invoke({"report", "x.csv", "--metric", "f1"}).status, 2);
}

TEST_F(CliTest, RuntimeErrorsExitOneWithMessage) {
  const auto r = invoke({"stats", (dir / "missing.jsonl").string()});
  EXPECT_EQ(r.status, 1);
  EXPECT_NE(r.err.find("error"), std::string::npos);
  std::ofstream(dir / "bad.jsonl") << R"({"question_id":"Q","article_id":"A","title":"t","abstract":"a","label":3})" << '\n';
  const auto bad = invoke({"stats", (dir / "bad.jsonl").string()});
  EXPECT_EQ(bad.status, 1);
  EXPECT_NE(bad.err.find("bad.jsonl:1:"), std::string::npos) << bad.err;
}

TEST_F(CliTest, StatsWritesCsvToStdout) {
  const auto r = invoke({"stats", corpus_path()});
  ASSERT_EQ(r.status, 0) << r.err;
  EXPECT_EQ(r.out,
            "question_id,records,relevant,inclusion_rate\n"
            "QA,60,15,25.0%\nQB,50,15,30.0%\nQC,40,10,25.0%\nALL,150,40,26.7%\n");
}

TEST_F(CliTest, StatsHonoursOut) {
  const auto target = dir / "stats.csv";
  const auto r = invoke({"stats", corpus_path(), "--out", target.string()});
  ASSERT_EQ(r.status, 0) << r.err;
  EXPECT_TRUE(r.out.empty());
  EXPECT_EQ(slurp(target).substr(0, 8), "question");
}

TEST_F(CliTest, FeaturizeEmitsOneRowPerRecord) {
  const auto r = invoke({"featurize", "--corpus", corpus_path(), "--questions", questions_path(), "--pico"});
  ASSERT_EQ(r.status, 0) << r.err;
  std::istringstream in(r.out);
  std::string header;
  std::getline(in, header);
  EXPECT_EQ(header.rfind("question_id,article_id,length,wc", 0), 0u) << header;
  EXPECT_NE(header.find("population.present"), std::string::npos);
  std::size_t rows = 0;
  for (std::string line; std::getline(in, line);) rows += !line.empty();
  EXPECT_EQ(rows, 150u);
}

TEST_F(CliTest, RunThenReportRoundTrip) {
  const auto results = dir / "results.csv";
  const auto run = invoke({"run", "--corpus", corpus_path(), "--questions", questions_path(), "--config",
                           config_path(), "--out", results.string()});
  ASSERT_EQ(run.status, 0) << run.err;
  EXPECT_NE(run.err.find("config_digest="), std::string::npos);
  EXPECT_NE(run.err.find("seed=5"), std::string::npos);
  std::ifstream in(results);
  const auto parsed = read_results_csv(in, results.string());
  EXPECT_EQ(parsed.questions(), (std::vector<std::string>{"QA", "QB", "QC"}));
  EXPECT_EQ(parsed.seed("quick"), 5u);

  const auto md = invoke({"report", results.string(), "--metric", "auc"});
  ASSERT_EQ(md.status, 0) << md.err;
  EXPECT_EQ(md.out.rfind("| experiment | QA | QB | QC |", 0), 0u) << md.out;
  EXPECT_NE(md.out.find("**"), std::string::npos);
  const auto csv = invoke({"report", results.string(), "--metric", "acc_bot50", "--format", "csv"});
  ASSERT_EQ(csv.status, 0) << csv.err;
  EXPECT_EQ(csv.out.rfind("experiment,QA,QA_best,QB,QB_best,QC,QC_best\n", 0), 0u) << csv.out;
}

TEST_F(CliTest, SeedOverrideChangesRecordedSeed) {
  const auto run = invoke({"run", "--corpus", corpus_path(), "--questions", questions_path(), "--config",
                           config_path(), "--seed", "77"});
  ASSERT_EQ(run.status, 0) << run.err;
  std::istringstream in(run.out);
  EXPECT_EQ(read_results_csv(in, "stdout").seed("quick"), 77u);
}

TEST_F(CliTest, RankListsEveryArticleOfTheQuestion) {
  const auto r = invoke({"rank", "--corpus", corpus_path(), "--questions", questions_path(), "--config",
                         config_path(), "--question", "QC"});
  ASSERT_EQ(r.status, 0) << r.err;
  std::istringstream in(r.out);
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "rank,article_id,score,bottom_half");
  std::size_t rows = 0, bottom = 0;
  while (std::getline(in, line)) {
    ++rows;
    bottom += line.back() == '1';
  }
  EXPECT_EQ(rows, 40u);
  EXPECT_EQ(bottom, 20u);
}

TEST_F(CliTest, SidecarStrategiesNeedAnEndpoint) {
  std::ofstream(dir / "sim.json") << R"({"label": "sim", "strategy": 3, "model": {"family": "gbdt",
      "hyperparameters": {"trees": 10}}, "similarity_models": ["biobert"]})";
  const auto missing = invoke({"run", "--corpus", corpus_path(), "--questions", questions_path(), "--config",
                               (dir / "sim.json").string()});
  EXPECT_EQ(missing.status, 1);
  EXPECT_NE(missing.err.find("sidecar"), std::string::npos);
  const auto stub = invoke({"run", "--corpus", corpus_path(), "--questions", questions_path(), "--config",
                            (dir / "sim.json").string(), "--stub-sidecar"});
  EXPECT_EQ(stub.status, 0) << stub.err;
  EXPECT_NE(stub.err.find("stub-1.0"), std::string::npos);
}

TEST_F(CliTest, QuestionAuditReportsGradeLevels) {
  std::ofstream(dir / "q.jsonl") << R"({"question_id":"Q1","standard_text":"The cat sat on the mat."})" << '\n';
  const auto r = invoke({"question-audit", "--questions", (dir / "q.jsonl").string()});
  ASSERT_EQ(r.status, 0) << r.err;
  EXPECT_EQ(r.out, "question_id,words,sentences,syllables,fkgl,above_journal_average\nQ1,6,1,6,-1.45,no\n");
}

}  // namespace
}  // namespace litscreen
