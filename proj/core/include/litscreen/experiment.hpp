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

// Experiment configuration and the LOQO runner for the four modelling
// strategies: (1) article and match features, (2) the same with PICO
// element matching, (3) plus transformer similarity features from the
// sidecar, (4) a fine-tuned sidecar pair classifier.

#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "litscreen/bridge.hpp"
#include "litscreen/corpus.hpp"
#include "litscreen/eval.hpp"
#include "litscreen/learners.hpp"
#include "litscreen/questions.hpp"
#include "litscreen/text.hpp"
#include "litscreen/tfidf.hpp"

namespace litscreen {

enum class TfidfMode {
  kNone,
  kVector,  // article document vector as columns
  kCosine,  // question/article TFIDF cosine only
  kBoth,
};

std::string_view tfidf_mode_name(TfidfMode mode);
TfidfMode parse_tfidf_mode(std::string_view name);

struct ExperimentConfig {
  std::string label;
  int strategy = 1;  // 1..4
  ModelSpec model;   // unused by strategy 4
  bool pico = false;
  TfidfMode tfidf = TfidfMode::kNone;
  std::vector<TransformerModel> similarity_models;  // strategy 3
  bool include_lev_raw = false;  // lev_norm is always included
  // Stopwords for match and block features; nullptr -> built-in English list.
  std::shared_ptr<const StopwordList> stopwords;
  FinetuneConfig finetune;  // strategy 4; its seed is derived per fold
  TfidfConfig tfidf_config;
  std::size_t distance_max_chars = 2000;
  std::uint64_t seed = 0;

  // Throws Error when the fields do not describe a runnable experiment.
  void validate() const;
  // SHA-256 of the canonical JSON of every field that affects results.
  std::string digest() const;
};

struct GridConfig {
  std::vector<ExperimentConfig> experiments;
  std::optional<std::string> sidecar_endpoint;
  std::size_t workers = 1;
};

// JSON document with an "experiments" array, or a single experiment
// object. Top-level "seed", "tfidf_config", "distance_max_chars", "stopwords_file",
// "sidecar_endpoint" and "workers" apply to every experiment that does not
// set them.
GridConfig parse_grid_config(std::istream& in, const std::string& source_name);
GridConfig load_grid_config(const std::filesystem::path& path);

// What one fold fitted and scored, for audits and leakage tests.
struct FoldAudit {
  std::string experiment;
  std::string held_out;
  std::vector<std::string> train_questions;
  std::vector<std::size_t> train_records;   // corpus positions
  std::vector<std::size_t> scored_records;  // corpus positions
  const TfidfVectorizer* vectorizer = nullptr;
  const std::vector<std::string>* training_columns = nullptr;
  const std::vector<LabeledPair>* finetune_pairs = nullptr;
  std::uint64_t fold_seed = 0;
};

struct RunOptions {
  std::size_t workers = 1;                  // folds evaluated concurrently
  std::shared_ptr<BridgeClient> bridge;     // strategies 3 and 4
  std::function<void(const FoldAudit&)> on_fold;  // called under a lock
};

// Throws LeakageError if a token that occurs in no training document is in
// the vocabulary.
void check_vocabulary_hygiene(const TfidfVectorizer& vectorizer, const std::set<std::string>& training_tokens,
                              const std::string& held_out);

// Seed for the fold holding out `question_id`; independent of fold order
// and worker count.
std::uint64_t fold_seed(std::uint64_t seed, const std::string& question_id);

EvaluationResult run_experiment(const Corpus& corpus, const std::vector<ResearchQuestion>& questions,
                                const ExperimentConfig& config, const RunOptions& options = {});

// Trains on every other question of the corpus and returns scores for the
// records of `question_id`, in corpus order.
std::vector<double> score_held_out(const Corpus& corpus, const std::vector<ResearchQuestion>& questions,
                                   const ExperimentConfig& config, const std::string& question_id,
                                   const RunOptions& options = {});

EvaluationResult run_grid(const Corpus& corpus, const std::vector<ResearchQuestion>& questions, const GridConfig& grid,
                          const RunOptions& options = {});

}  // namespace litscreen
