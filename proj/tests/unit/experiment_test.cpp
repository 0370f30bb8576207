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
#include <fstream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "litscreen/error.hpp"
#include "litscreen/experiment.hpp"
#include "litscreen/stub_sidecar.hpp"
#include "litscreen/synthetic.hpp"
#include "temp_dir.hpp"

namespace litscreen {
namespace {

GridConfig parse(const std::string& text, const std::string& source = "grid.json") {
  std::istringstream in(text);
  return parse_grid_config(in, source);
}

const SyntheticData& small_data() {
  static const SyntheticData data = [] {
    SyntheticSpec spec;
    spec.questions = {{"QA", 90, 0.2}, {"QB", 80, 0.25}, {"QC", 70, 0.3}};
    spec.seed = 3;
    return make_synthetic(spec);
  }();
  return data;
}

ExperimentConfig quick_config(int strategy = 1) {
  ExperimentConfig c;
  c.label = "exp";
  c.strategy = strategy;
  c.model.family = ModelFamily::kGbdt;
  c.model.hyperparameters = {{"trees", 25}, {"min_leaf", 5}};
  c.tfidf = TfidfMode::kBoth;
  c.seed = 9;
  if (strategy == 2) c.pico = true;
  if (strategy == 3) c.similarity_models = {TransformerModel::kBioBert};
  if (strategy == 4) c.tfidf = TfidfMode::kNone;
  return c;
}

RunOptions with_stub(std::size_t workers = 1) {
  RunOptions o;
  o.workers = workers;
  o.bridge = std::make_shared<BridgeClient>(make_transport("stub"));
  return o;
}

// ---- configuration -------------------------------------------------------

TEST(GridConfigParse, ArrayWithTopLevelDefaults) {
  const auto grid = parse(R"({
    "seed": 42, "workers": 3, "sidecar_endpoint": "stub",
    "tfidf_config": {"max_features": 500, "min_df": 3},
    "experiments": [
      {"label": "a", "strategy": 1, "model": {"family": "linear"}},
      {"label": "b", "strategy": 2, "model": {"family": "svm", "hyperparameters": {"epochs": 5}}, "pico": true, "seed": 7},
      {"label": "c", "strategy": 3, "model": {"family": "gbdt"}, "tfidf": "both",
       "similarity_models": ["biobert", "bluebert_large"]},
      {"label": "d", "strategy": 4, "finetune": {"base": "biobert", "epochs": 2}}
    ]})");
  ASSERT_EQ(grid.experiments.size(), 4u);
  EXPECT_EQ(grid.workers, 3u);
  EXPECT_EQ(grid.sidecar_endpoint, "stub");
  EXPECT_EQ(grid.experiments[0].seed, 42u);
  EXPECT_EQ(grid.experiments[1].seed, 7u);
  EXPECT_EQ(grid.experiments[0].tfidf_config.max_features, 500u);
  EXPECT_EQ(grid.experiments[0].tfidf_config.min_df, 3u);
  EXPECT_EQ(grid.experiments[1].model.param("epochs"), 5);
  EXPECT_TRUE(grid.experiments[1].pico);
  EXPECT_EQ(grid.experiments[2].tfidf, TfidfMode::kBoth);
  EXPECT_EQ(grid.experiments[2].similarity_models.size(), 2u);
  EXPECT_EQ(grid.experiments[3].finetune.epochs, 2);
  EXPECT_FALSE(grid.experiments[0].include_lev_raw);
}

TEST(GridConfigParse, SingleExperimentObject) {
  const auto grid = parse(R"({"label": "solo", "strategy": 1, "model": {"family": "cnb"}, "workers": 2})");
  ASSERT_EQ(grid.experiments.size(), 1u);
  EXPECT_EQ(grid.experiments[0].model.family, ModelFamily::kCnb);
  EXPECT_EQ(grid.workers, 2u);
}

TEST(GridConfigParse, RejectsInvalidDocuments) {
  EXPECT_THROW(parse("{not json"), ParseError);
  EXPECT_THROW(parse(R"({"experiments": []})"), Error);
  EXPECT_THROW(parse(R"({"label": "x", "strategy": 1, "model": {"family": "gbdt"}, "colour": 1})"), Error);
  EXPECT_THROW(parse(R"({"label": "x", "strategy": 1})"), Error);
  EXPECT_THROW(parse(R"({"label": "x", "strategy": 1, "model": {"family": "gbdt"}, "pico": true})"), Error);
  EXPECT_THROW(parse(R"({"label": "x", "strategy": 2, "model": {"family": "gbdt"}})"), Error);
  EXPECT_THROW(parse(R"({"label": "x", "strategy": 3, "model": {"family": "gbdt"}})"), Error);
  EXPECT_THROW(parse(R"({"label": "x", "strategy": 4, "finetune": {"base": "biobert", "epochs": 3}})"), Error);
  EXPECT_THROW(parse(R"({"label": "x", "strategy": 5, "model": {"family": "gbdt"}})"), Error);
  EXPECT_THROW(parse(R"({"experiments": [
      {"label": "x", "strategy": 1, "model": {"family": "gbdt"}},
      {"label": "x", "strategy": 1, "model": {"family": "linear"}}]})"),
               Error);
}

TEST(GridConfigParse, StopwordsFileResolvesAgainstConfigDirectory) {
  testing::TempDir dir;
  std::ofstream(dir / "words.txt") << "# custom\nnerve\nthe\n";
  std::ofstream(dir / "grid.json") << R"({"stopwords_file": "words.txt", "experiments": [
      {"label": "a", "strategy": 1, "model": {"family": "gbdt"}}]})";
  const auto grid = load_grid_config(dir / "grid.json");
  ASSERT_TRUE(grid.experiments[0].stopwords);
  EXPECT_EQ(grid.experiments[0].stopwords->size(), 2u);
  EXPECT_NE(grid.experiments[0].digest(), quick_config().digest());
}

TEST(GridConfigParse, ShippedConfigsLoad) {
  const auto study = load_grid_config(std::string(LITSCREEN_CONFIG_DIR) + "/study_grid.json");
  EXPECT_EQ(study.experiments.size(), 17u);
  EXPECT_EQ(study.sidecar_endpoint, "stub");
  const auto synthetic = load_grid_config(std::string(LITSCREEN_CONFIG_DIR) + "/synthetic.json");
  EXPECT_EQ(synthetic.experiments.size(), 1u);
}

TEST(ExperimentDigest, StableAndSensitiveToResultAffectingFields) {
  const auto base = quick_config();
  EXPECT_EQ(base.digest(), quick_config().digest());
  EXPECT_EQ(base.digest().size(), 64u);
  auto seed = base;
  seed.seed = 10;
  auto model = base;
  model.model.hyperparameters["trees"] = 26;
  auto lev = base;
  lev.include_lev_raw = true;
  auto chars = base;
  chars.distance_max_chars = 100;
  for (const auto* other : {&seed, &model, &lev, &chars}) EXPECT_NE(other->digest(), base.digest());
  auto relabel = base;
  relabel.label = "another name";
  EXPECT_NE(relabel.digest(), base.digest());
}

// ---- runner --------------------------------------------------------------

TEST(RunExperiment, OneRowPerQuestionWithMetadata) {
  const auto& d = small_data();
  const auto cfg = quick_config();
  const auto result = run_experiment(d.corpus, d.questions, cfg);
  EXPECT_EQ(result.experiments(), std::vector<std::string>{"exp"});
  EXPECT_EQ(result.questions(), (std::vector<std::string>{"QA", "QB", "QC"}));
  EXPECT_TRUE(result.missing_cells(Metric::kAuc).empty());
  EXPECT_TRUE(result.missing_cells(Metric::kAccBot50).empty());
  for (const auto& q : result.questions()) {
    const auto* cell = result.find("exp", q);
    EXPECT_GE(cell->auc, 0.0);
    EXPECT_LE(cell->auc, 1.0);
    EXPECT_GE(cell->acc_bot50, 0.0);
    EXPECT_LE(cell->acc_bot50, 1.0);
    EXPECT_EQ(cell->n, d.corpus.indices_of(q).size());
  }
  EXPECT_EQ(result.find("exp", "QA")->positives, 18u);
  EXPECT_EQ(result.seed("exp"), 9u);
  EXPECT_EQ(result.config_digest("exp"), cfg.digest());
}

TEST(RunExperiment, PlantedSignalIsLearnedAcrossQuestions) {
  const auto& d = small_data();
  const auto result = run_experiment(d.corpus, d.questions, quick_config());
  for (const auto& q : result.questions()) EXPECT_GE(result.find("exp", q)->auc, 0.85) << q;
}

TEST(RunExperiment, IdenticalAcrossWorkerCounts) {
  const auto& d = small_data();
  for (int strategy : {1, 2, 3}) {
    const auto cfg = quick_config(strategy);
    const auto one = run_experiment(d.corpus, d.questions, cfg, with_stub(1));
    const auto three = run_experiment(d.corpus, d.questions, cfg, with_stub(3));
    EXPECT_TRUE(one == three) << "strategy " << strategy;
  }
}

TEST(RunExperiment, FoldSeedDependsOnlyOnSeedAndQuestion) {
  EXPECT_EQ(fold_seed(1, "QA"), fold_seed(1, "QA"));
  EXPECT_NE(fold_seed(1, "QA"), fold_seed(1, "QB"));
  EXPECT_NE(fold_seed(1, "QA"), fold_seed(2, "QA"));
}

// Sentinel token planted only in one question's abstracts.
Corpus with_sentinel(const Corpus& corpus, const std::string& question_id, const std::string& token) {
  std::vector<ArticleRecord> records(corpus.records().begin(), corpus.records().end());
  for (auto& r : records)
    if (r.question_id == question_id) r.abstract += " " + token + " " + token;
  return Corpus(std::move(records));
}

TEST(LeakageGuard, HeldOutSentinelNeverReachesFittedState) {
  const auto& d = small_data();
  const std::string sentinel = "zzqsentinelzz";
  const auto corpus = with_sentinel(d.corpus, "QB", sentinel);
  auto cfg = quick_config();
  cfg.tfidf_config.min_df = 1;
  int folds_seen = 0;
  RunOptions options;
  options.on_fold = [&](const FoldAudit& audit) {
    ++folds_seen;
    for (std::size_t i : audit.train_records) EXPECT_NE(corpus[i].question_id, audit.held_out);
    for (std::size_t i : audit.scored_records) EXPECT_EQ(corpus[i].question_id, audit.held_out);
    EXPECT_EQ(std::count(audit.train_questions.begin(), audit.train_questions.end(), audit.held_out), 0);
    ASSERT_NE(audit.vectorizer, nullptr);
    const bool sentinel_known = audit.vectorizer->contains(sentinel);
    // Present exactly when QB is part of training.
    EXPECT_EQ(sentinel_known, audit.held_out != "QB") << audit.held_out;
    if (audit.held_out == "QB") {
      const auto& cols = *audit.training_columns;
      EXPECT_EQ(std::find(cols.begin(), cols.end(), "tfidf:" + sentinel), cols.end());
    }
  };
  (void)run_experiment(corpus, d.questions, cfg, options);
  EXPECT_EQ(folds_seen, 3);
}

TEST(LeakageGuard, FinetunePairsExcludeHeldOutQuestion) {
  const auto& d = small_data();
  auto options = with_stub();
  std::set<std::string> held_outs;
  options.on_fold = [&](const FoldAudit& audit) {
    held_outs.insert(audit.held_out);
    ASSERT_NE(audit.finetune_pairs, nullptr);
    EXPECT_FALSE(audit.finetune_pairs->empty());
    for (const auto& p : *audit.finetune_pairs) EXPECT_NE(p.question_id, audit.held_out);
  };
  auto cfg = quick_config(4);
  cfg.finetune.epochs = 1;
  const auto result = run_experiment(d.corpus, d.questions, cfg, options);
  EXPECT_EQ(held_outs.size(), 3u);
  EXPECT_TRUE(result.missing_cells().empty());
}

TEST(LeakageGuard, VocabularyHygieneTrips) {
  const std::vector<std::string> docs = {"alpha beta", "beta gamma"};
  const auto v = TfidfVectorizer::fit(docs, TfidfConfig{100, 1});
  EXPECT_NO_THROW(check_vocabulary_hygiene(v, {"alpha", "beta", "gamma"}, "Q"));
  EXPECT_THROW(check_vocabulary_hygiene(v, {"alpha", "beta"}, "Q"), LeakageError);
}

TEST(RunExperiment, SimilarityStrategyAddsSidecarColumns) {
  const auto& d = small_data();
  auto cfg = quick_config(3);
  cfg.similarity_models = {TransformerModel::kBioBert, TransformerModel::kBlueBertLarge};
  auto options = with_stub();
  std::vector<std::string> columns;
  options.on_fold = [&](const FoldAudit& audit) { columns = *audit.training_columns; };
  (void)run_experiment(d.corpus, d.questions, cfg, options);
  EXPECT_NE(std::find(columns.begin(), columns.end(), "sim:biobert"), columns.end());
  EXPECT_NE(std::find(columns.begin(), columns.end(), "sim:bluebert_large"), columns.end());
  EXPECT_EQ(std::find(columns.begin(), columns.end(), "lev_raw"), columns.end());
}

TEST(RunExperiment, SidecarStrategiesNeedABridge) {
  const auto& d = small_data();
  EXPECT_THROW(run_experiment(d.corpus, d.questions, quick_config(3)), Error);
  EXPECT_THROW(run_experiment(d.corpus, d.questions, quick_config(4)), Error);
}

TEST(RunExperiment, PicoModeAddsElementColumns) {
  const auto& d = small_data();
  std::vector<std::string> columns;
  RunOptions options;
  options.on_fold = [&](const FoldAudit& audit) { columns = *audit.training_columns; };
  (void)run_experiment(d.corpus, d.questions, quick_config(2), options);
  for (const char* name : {"population.jaro", "intervention.present", "outcome.tfidf_cos"})
    EXPECT_NE(std::find(columns.begin(), columns.end(), name), columns.end()) << name;
}

TEST(ScoreHeldOut, ReturnsOneScorePerRecordOfTheQuestion) {
  const auto& d = small_data();
  const auto scores = score_held_out(d.corpus, d.questions, quick_config(), "QC");
  EXPECT_EQ(scores.size(), d.corpus.indices_of("QC").size());
  EXPECT_THROW(score_held_out(d.corpus, d.questions, quick_config(), "NOPE"), Error);
}

TEST(RunGrid, MergesExperimentsInConfigOrder) {
  const auto& d = small_data();
  GridConfig grid;
  auto a = quick_config();
  a.label = "first";
  auto b = quick_config();
  b.label = "second";
  b.model.family = ModelFamily::kLinear;
  b.model.hyperparameters.clear();
  grid.experiments = {a, b};
  const auto result = run_grid(d.corpus, d.questions, grid);
  EXPECT_EQ(result.experiments(), (std::vector<std::string>{"first", "second"}));
  EXPECT_TRUE(result.missing_cells().empty());
}

}  // namespace
}  // namespace litscreen
