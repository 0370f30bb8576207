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
#include "litscreen/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <fstream>
#include <map>
#include <mutex>
#include <thread>

#include <nlohmann/json.hpp>

#include "litscreen/digest.hpp"
#include "litscreen/features.hpp"
#include "litscreen/text.hpp"
#include "models.hpp"

namespace litscreen {

using json = nlohmann::json;

std::string_view tfidf_mode_name(TfidfMode mode) {
  switch (mode) {
    case TfidfMode::kNone: return "none";
    case TfidfMode::kVector: return "vector";
    case TfidfMode::kCosine: return "cosine";
    case TfidfMode::kBoth: return "both";
  }
  return "none";
}

TfidfMode parse_tfidf_mode(std::string_view name) {
  for (TfidfMode m : {TfidfMode::kNone, TfidfMode::kVector, TfidfMode::kCosine, TfidfMode::kBoth})
    if (tfidf_mode_name(m) == name) return m;
  throw Error("unknown tfidf mode '" + std::string(name) + "' (expected none, vector, cosine or both)");
}

void ExperimentConfig::validate() const {
  const std::string where = "experiment '" + label + "': ";
  if (label.empty()) throw Error("experiment label must not be empty");
  if (strategy < 1 || strategy > 4) throw Error(where + "strategy must be 1, 2, 3 or 4");
  if (strategy == 1 && pico) throw Error(where + "strategy 1 uses the standard question text; use strategy 2 for PICO");
  if (strategy == 2 && !pico) throw Error(where + "strategy 2 requires pico=true");
  if (strategy != 3 && !similarity_models.empty()) throw Error(where + "similarity models are only used by strategy 3");
  if (strategy == 3 && similarity_models.empty()) throw Error(where + "strategy 3 needs at least one similarity model");
  if (strategy == 4) {
    if (finetune.epochs != 1 && finetune.epochs != 2) throw Error(where + "fine-tune epochs must be 1 or 2");
    if (pico || tfidf != TfidfMode::kNone) throw Error(where + "strategy 4 takes no pico or tfidf options");
    finetune.resolved_hyperparameters();
  } else {
    model.resolved();
  }
  if (tfidf_config.max_features == 0) throw Error(where + "tfidf max_features must be positive");
  if (std::set<TransformerModel>(similarity_models.begin(), similarity_models.end()).size() != similarity_models.size())
    throw Error(where + "duplicate similarity model");
}

namespace {

json hyper_json(const std::map<std::string, double>& hp) {
  json out = json::object();
  for (const auto& [k, v] : hp) out[k] = v;
  return out;
}

json config_json(const ExperimentConfig& c) {
  json j = {{"format", "litscreen-experiment-1"},
            {"label", c.label},
            {"strategy", c.strategy},
            {"seed", c.seed},
            {"stopwords", (c.stopwords ? *c.stopwords : StopwordList::english()).checksum()}};
  if (c.strategy == 4) {
    j["finetune"] = {{"base", model_id_name(c.finetune.base)},
                     {"epochs", c.finetune.epochs},
                     {"hyperparameters", hyper_json(c.finetune.resolved_hyperparameters())}};
    return j;
  }
  j["model"] = {{"family", family_name(c.model.family)}, {"hyperparameters", hyper_json(c.model.resolved())}};
  j["pico"] = c.pico;
  j["tfidf"] = tfidf_mode_name(c.tfidf);
  json sims = json::array();
  for (auto m : c.similarity_models) sims.push_back(model_id_name(m));
  j["similarity_models"] = sims;
  j["include_lev_raw"] = c.include_lev_raw;
  j["tfidf_config"] = {{"max_features", c.tfidf_config.max_features}, {"min_df", c.tfidf_config.min_df}};
  j["distance_max_chars"] = c.distance_max_chars;
  return j;
}

}  // namespace

std::string ExperimentConfig::digest() const { return sha256_hex(config_json(*this).dump()); }

// ---- config files ----------------------------------------------------------

namespace {

void check_keys(const json& obj, std::initializer_list<std::string_view> allowed, const std::string& where) {
  for (const auto& [key, value] : obj.items()) {
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end())
      throw Error(where + ": unknown key '" + key + "'");
  }
}

std::map<std::string, double> read_hyper(const json& j) {
  std::map<std::string, double> out;
  for (const auto& [k, v] : j.items()) out[k] = v.get<double>();
  return out;
}

ExperimentConfig read_experiment(const json& j, const json& defaults, const std::string& source) {
  const std::string where = source + ": experiment " + (j.contains("label") ? j["label"].dump() : std::string("?"));
  if (!j.is_object()) throw Error(source + ": experiment entries must be objects");
  check_keys(j,
             {"label", "strategy", "model", "pico", "tfidf", "similarity_models", "include_lev_raw", "finetune", "seed",
              "tfidf_config", "distance_max_chars", "stopwords_file"},
             where);
  auto pick = [&](const char* key) -> const json* {
    if (j.contains(key)) return &j[key];
    if (defaults.contains(key)) return &defaults[key];
    return nullptr;
  };
  ExperimentConfig c;
  try {
    c.label = j.at("label").get<std::string>();
    c.strategy = j.at("strategy").get<int>();
    if (j.contains("model")) {
      const json& m = j["model"];
      check_keys(m, {"family", "hyperparameters"}, where + " model");
      c.model.family = parse_family(m.at("family").get<std::string>());
      if (m.contains("hyperparameters")) c.model.hyperparameters = read_hyper(m["hyperparameters"]);
    } else if (c.strategy != 4) {
      throw Error(where + ": missing model");
    }
    if (j.contains("pico")) c.pico = j["pico"].get<bool>();
    if (j.contains("tfidf")) c.tfidf = parse_tfidf_mode(j["tfidf"].get<std::string>());
    if (j.contains("similarity_models"))
      for (const auto& m : j["similarity_models"]) c.similarity_models.push_back(parse_model_id(m.get<std::string>()));
    if (j.contains("include_lev_raw")) c.include_lev_raw = j["include_lev_raw"].get<bool>();
    if (j.contains("finetune")) {
      const json& f = j["finetune"];
      check_keys(f, {"base", "epochs", "hyperparameters"}, where + " finetune");
      c.finetune.base = parse_model_id(f.at("base").get<std::string>());
      c.finetune.epochs = f.at("epochs").get<int>();
      if (f.contains("hyperparameters")) c.finetune.hyperparameters = read_hyper(f["hyperparameters"]);
    } else if (c.strategy == 4) {
      throw Error(where + ": missing finetune");
    }
    if (const json* s = pick("seed")) c.seed = s->get<std::uint64_t>();
    if (const json* t = pick("tfidf_config")) {
      check_keys(*t, {"max_features", "min_df"}, where + " tfidf_config");
      if (t->contains("max_features")) c.tfidf_config.max_features = (*t)["max_features"].get<std::size_t>();
      if (t->contains("min_df")) c.tfidf_config.min_df = (*t)["min_df"].get<std::size_t>();
    }
    if (const json* d = pick("distance_max_chars")) c.distance_max_chars = d->get<std::size_t>();
    if (const json* w = pick("stopwords_file")) {
      std::filesystem::path path = w->get<std::string>();
      if (path.is_relative()) path = std::filesystem::path(source).parent_path() / path;
      c.stopwords = std::make_shared<const StopwordList>(StopwordList::from_file(path));
    }
  } catch (const json::exception& e) {
    throw Error(where + ": " + e.what());
  }
  c.validate();
  return c;
}

}  // namespace

GridConfig parse_grid_config(std::istream& in, const std::string& source_name) {
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::exception& e) {
    throw ParseError(source_name, 0, std::string("invalid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw Error(source_name + ": config must be a JSON object");
  GridConfig grid;
  try {
    if (doc.contains("experiments")) {
      check_keys(doc,
                 {"experiments", "seed", "tfidf_config", "distance_max_chars", "stopwords_file", "sidecar_endpoint",
                  "workers"},
                 source_name);
      for (const auto& e : doc["experiments"]) grid.experiments.push_back(read_experiment(e, doc, source_name));
    } else {
      json single = doc;
      json defaults = json::object();
      for (const char* key : {"sidecar_endpoint", "workers"}) {
        if (single.contains(key)) {
          defaults[key] = single[key];
          single.erase(key);
        }
      }
      grid.experiments.push_back(read_experiment(single, json::object(), source_name));
      doc = defaults;
    }
    if (doc.contains("sidecar_endpoint")) grid.sidecar_endpoint = doc["sidecar_endpoint"].get<std::string>();
    if (doc.contains("workers")) grid.workers = doc["workers"].get<std::size_t>();
  } catch (const json::exception& e) {
    throw Error(source_name + ": " + e.what());
  }
  if (grid.experiments.empty()) throw Error(source_name + ": no experiments");
  std::set<std::string> labels;
  for (const auto& e : grid.experiments)
    if (!labels.insert(e.label).second) throw Error(source_name + ": duplicate experiment label '" + e.label + "'");
  return grid;
}

GridConfig load_grid_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open config file " + path.string());
  return parse_grid_config(in, path.string());
}

// ---- runner ----------------------------------------------------------------

void check_vocabulary_hygiene(const TfidfVectorizer& vectorizer, const std::set<std::string>& training_tokens,
                              const std::string& held_out) {
  for (const auto& token : vectorizer.vocabulary()) {
    if (!training_tokens.count(token))
      throw LeakageError("fold '" + held_out + "': vocabulary token '" + token + "' does not occur in any training document");
  }
}

std::uint64_t fold_seed(std::uint64_t seed, const std::string& question_id) {
  const std::string digest = sha256_hex(question_id);
  const std::uint64_t q = std::stoull(digest.substr(0, 16), nullptr, 16);
  return detail::splitmix64(seed ^ q);
}

namespace {

// Runs job(i) for i in [0, n) on up to `workers` threads. Rethrows the
// exception of the lowest failing index.
template <typename Job>
void parallel_for(std::size_t n, std::size_t workers, Job job) {
  workers = std::max<std::size_t>(1, std::min(workers, n));
  std::vector<std::exception_ptr> errors(n);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i; (i = next.fetch_add(1)) < n;) {
      try {
        job(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  std::vector<std::thread> threads;
  for (std::size_t t = 1; t < workers; ++t) threads.emplace_back(worker);
  worker();
  for (auto& t : threads) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

// One (question text, prefix) a record is matched against.
struct Query {
  std::string prefix;
  std::optional<std::string> text;
};

std::vector<Query> queries_for(const ResearchQuestion& q, bool pico) {
  std::vector<Query> out{{"", q.standard_text}};
  if (pico)
    for (PicoElement e : kPicoOrder) out.push_back({std::string(pico_name(e)) + ".", q.pico.get(e)});
  return out;
}

bool ends_with(std::string_view s, std::string_view suffix) {
  return s.size() >= suffix.size() && s.substr(s.size() - suffix.size()) == suffix;
}

// Data shared by all folds of one experiment.
struct Prepared {
  std::vector<const ResearchQuestion*> question_of;  // per record
  std::vector<std::string> texts;                    // article_text per record
  std::vector<TokenList> tokens;                     // per record, when TFIDF is used
  std::vector<std::string> columns;                  // fitting-free columns
  std::vector<std::vector<double>> values;           // per record, aligned with columns
};

Prepared prepare(const Corpus& corpus, const std::vector<ResearchQuestion>& questions, const ExperimentConfig& config,
                 const RunOptions& options) {
  Prepared p;
  const std::size_t n = corpus.size();
  p.question_of.resize(n);
  p.texts.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    p.question_of[i] = find_question(questions, corpus[i].question_id);
    if (!p.question_of[i]) throw Error("corpus question '" + corpus[i].question_id + "' is not in the question file");
    p.texts[i] = article_text(corpus[i]);
  }
  if (config.strategy == 4) return p;

  if (config.tfidf != TfidfMode::kNone) {
    p.tokens.resize(n);
    for (std::size_t i = 0; i < n; ++i) p.tokens[i] = tokenize(p.texts[i]);
  }

  // Article and match features: no fitting, so computed once for all folds.
  const FeatureMode mode = config.pico ? FeatureMode::kPico : FeatureMode::kStandard;
  FeatureOptions fopts;
  fopts.distance_max_chars = config.distance_max_chars;
  fopts.stopwords = config.stopwords.get();
  std::map<std::string, PairFeaturizer> featurizers;
  for (const auto& qid : corpus.question_ids()) {
    featurizers.emplace(qid, PairFeaturizer(*find_question(questions, qid), mode, nullptr, fopts));
  }
  std::vector<FeatureVector> base(n);
  parallel_for(n, options.workers, [&](std::size_t i) { base[i] = featurizers.at(corpus[i].question_id)(corpus[i]); });

  std::vector<std::size_t> keep;
  if (n > 0) {
    const auto& names = base.front().names();
    for (std::size_t k = 0; k < names.size(); ++k) {
      if (!config.include_lev_raw && ends_with(names[k], "lev_raw")) continue;
      keep.push_back(k);
      p.columns.push_back(names[k]);
    }
  }
  p.values.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (base[i].names().size() != base.front().names().size())
      throw SchemaError("record " + std::to_string(i) + " has a different feature schema");
    for (std::size_t k : keep) p.values[i].push_back(base[i].values()[k]);
  }

  // Transformer similarity features (strategy 3), also fitting-free.
  if (!config.similarity_models.empty()) {
    if (!options.bridge) throw Error("experiment '" + config.label + "' needs a sidecar for similarity features");
    for (TransformerModel model : config.similarity_models) {
      const std::string suffix = "sim:" + std::string(model_id_name(model));
      std::vector<PairRequest> requests;
      std::vector<std::pair<std::size_t, std::size_t>> slots;  // (record, query)
      std::size_t query_count = 0;
      for (std::size_t i = 0; i < n; ++i) {
        const auto queries = queries_for(*p.question_of[i], config.pico);
        query_count = queries.size();
        for (std::size_t qi = 0; qi < queries.size(); ++qi) {
          if (!queries[qi].text) continue;
          requests.push_back({*queries[qi].text, p.texts[i], model});
          slots.emplace_back(i, qi);
        }
      }
      const std::size_t first_column = p.columns.size();
      if (n > 0) {
        for (const auto& q : queries_for(*p.question_of[0], config.pico)) p.columns.push_back(q.prefix + suffix);
      }
      for (auto& row : p.values) row.resize(first_column + query_count, 0.0);
      const auto scores = options.bridge->similarity_batch(requests);
      for (std::size_t k = 0; k < scores.size(); ++k)
        p.values[slots[k].first][first_column + slots[k].second] = scores[k].value;
    }
  }
  return p;
}

void add_row(FeatureMatrix& X, const std::vector<double>& fixed, const std::vector<double>& cosines,
             const SparseVector* doc) {
  std::vector<std::pair<std::uint32_t, double>> entries;
  std::uint32_t c = 0;
  for (double v : fixed) entries.emplace_back(c++, v);
  for (double v : cosines) entries.emplace_back(c++, v);
  if (doc)
    for (std::size_t k = 0; k < doc->indices.size(); ++k) entries.emplace_back(c + doc->indices[k], doc->values[k]);
  X.add_row(std::move(entries));
}

MetricCell score_cell(const Corpus& corpus, const std::vector<std::size_t>& test, const std::vector<double>& scores) {
  std::vector<ScoredRecord> scored;
  scored.reserve(test.size());
  MetricCell cell;
  for (std::size_t k = 0; k < test.size(); ++k) {
    const auto& r = corpus[test[k]];
    scored.push_back({r.question_id, test[k], scores[k], r.label});
    cell.positives += static_cast<std::size_t>(r.label);
  }
  cell.n = test.size();
  cell.auc = auc(scored);
  cell.acc_bot50 = acc_bot50(scored);
  return cell;
}

}  // namespace

namespace {

// Fits on the fold's training questions and scores the held-out records.
std::vector<double> run_fold(const Corpus& corpus, const std::vector<ResearchQuestion>& questions,
                             const ExperimentConfig& config, const RunOptions& options, const Prepared& prep,
                             const Fold& fold, std::vector<std::size_t>& test, std::mutex& audit_mutex) {
  const std::set<std::string> train_questions(fold.train.begin(), fold.train.end());
  if (train_questions.count(fold.held_out))
    throw LeakageError("fold '" + fold.held_out + "' lists the held-out question among its training questions");
  std::vector<std::size_t> train;
  test.clear();
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    if (corpus[i].question_id == fold.held_out) test.push_back(i);
    else if (train_questions.count(corpus[i].question_id)) train.push_back(i);
  }
  for (std::size_t i : train)
    if (corpus[i].question_id == fold.held_out) throw LeakageError("held-out record in training batch");
  if (test.empty()) throw Error("question '" + fold.held_out + "' has no records");
  if (train.empty()) throw Error("fold '" + fold.held_out + "' has no training records");

  FoldAudit audit;
  audit.experiment = config.label;
  audit.held_out = fold.held_out;
  audit.train_questions = fold.train;
  audit.train_records = train;
  audit.scored_records = test;
  audit.fold_seed = fold_seed(config.seed, fold.held_out);

  std::vector<double> scores;
  std::optional<TfidfVectorizer> vectorizer;
  std::vector<std::string> columns;
  std::vector<LabeledPair> pairs;

  if (config.strategy == 4) {
    if (!options.bridge) throw Error("experiment '" + config.label + "' needs a sidecar for fine-tuning");
    pairs.reserve(train.size());
    for (std::size_t i : train)
      pairs.push_back({corpus[i].question_id, prep.question_of[i]->standard_text, prep.texts[i], corpus[i].label});
    FinetuneConfig ft = config.finetune;
    ft.seed = audit.fold_seed;
    const std::vector<std::string> forbidden{fold.held_out};
    const auto handle = options.bridge->finetune(pairs, ft, forbidden);
    std::vector<PairRequest> requests;
    for (std::size_t i : test) requests.push_back({prep.question_of[i]->standard_text, prep.texts[i], ft.base});
    scores = options.bridge->score_finetuned(handle, requests);
    audit.finetune_pairs = &pairs;
  } else {
    columns = prep.columns;
    const bool use_tfidf = config.tfidf != TfidfMode::kNone;
    const bool use_cos = config.tfidf == TfidfMode::kCosine || config.tfidf == TfidfMode::kBoth;
    const bool use_vec = config.tfidf == TfidfMode::kVector || config.tfidf == TfidfMode::kBoth;
    std::vector<SparseVector> docs;
    std::map<std::string, std::vector<std::optional<SparseVector>>> query_vectors;
    if (use_tfidf) {
      std::vector<TokenList> train_docs;
      std::set<std::string> train_tokens;
      train_docs.reserve(train.size());
      for (std::size_t i : train) {
        train_docs.push_back(prep.tokens[i]);
        train_tokens.insert(prep.tokens[i].begin(), prep.tokens[i].end());
      }
      vectorizer = TfidfVectorizer::fit_tokens(train_docs, config.tfidf_config);
      check_vocabulary_hygiene(*vectorizer, train_tokens, fold.held_out);
      docs.resize(corpus.size());
      for (auto* group : {&train, &test})
        for (std::size_t i : *group) docs[i] = vectorizer->transform_tokens(prep.tokens[i]);
      if (use_cos) {
        for (const auto& q : questions) {
          auto& vecs = query_vectors[q.question_id];
          for (const auto& query : queries_for(q, config.pico))
            vecs.push_back(query.text ? std::optional(vectorizer->transform(*query.text)) : std::nullopt);
        }
        for (const auto& query : queries_for(*prep.question_of[test.front()], config.pico))
          columns.push_back(query.prefix + std::string(kTfidfCosineName));
      }
      if (use_vec)
        for (const auto& token : vectorizer->vocabulary()) columns.push_back(std::string(kTfidfColumnPrefix) + token);
    }

    auto build = [&](const std::vector<std::size_t>& rows) {
      FeatureMatrix X(columns);
      std::vector<double> cosines;
      for (std::size_t i : rows) {
        cosines.clear();
        if (use_cos) {
          for (const auto& qv : query_vectors.at(corpus[i].question_id)) cosines.push_back(qv ? cosine(*qv, docs[i]) : 0.0);
        }
        add_row(X, prep.values[i], cosines, use_vec ? &docs[i] : nullptr);
      }
      return X;
    };
    const FeatureMatrix X_train = build(train);
    std::vector<int> y;
    y.reserve(train.size());
    for (std::size_t i : train) y.push_back(corpus[i].label);
    ModelSpec spec = config.model;
    spec.seed = audit.fold_seed;
    const Scorer scorer = litscreen::train(spec, X_train, y);
    scores = scorer.score_batch(build(test));
    audit.vectorizer = vectorizer ? &*vectorizer : nullptr;
    audit.training_columns = &columns;
  }

  if (options.on_fold) {
    std::lock_guard lock(audit_mutex);
    options.on_fold(audit);
  }
  return scores;
}

}  // namespace

EvaluationResult run_experiment(const Corpus& corpus, const std::vector<ResearchQuestion>& questions,
                                const ExperimentConfig& config, const RunOptions& options) {
  config.validate();
  const FoldPlan plan = loqo_folds(corpus);
  const Prepared prep = prepare(corpus, questions, config, options);
  std::vector<MetricCell> cells(plan.folds.size());
  std::mutex audit_mutex;
  parallel_for(plan.folds.size(), options.workers, [&](std::size_t f) {
    std::vector<std::size_t> test;
    const auto scores = run_fold(corpus, questions, config, options, prep, plan.folds[f], test, audit_mutex);
    cells[f] = score_cell(corpus, test, scores);
  });

  EvaluationResult result;
  for (std::size_t f = 0; f < plan.folds.size(); ++f) result.add(config.label, plan.folds[f].held_out, cells[f]);
  result.set_metadata(config.label, config.seed, config.digest());
  return result;
}

std::vector<double> score_held_out(const Corpus& corpus, const std::vector<ResearchQuestion>& questions,
                                   const ExperimentConfig& config, const std::string& question_id,
                                   const RunOptions& options) {
  config.validate();
  Fold fold{question_id, {}};
  bool found = false;
  for (const auto& q : corpus.question_ids()) {
    if (q == question_id) found = true;
    else fold.train.push_back(q);
  }
  if (!found) throw Error("question '" + question_id + "' has no records in the corpus");
  const Prepared prep = prepare(corpus, questions, config, options);
  std::mutex audit_mutex;
  std::vector<std::size_t> test;
  return run_fold(corpus, questions, config, options, prep, fold, test, audit_mutex);
}

EvaluationResult run_grid(const Corpus& corpus, const std::vector<ResearchQuestion>& questions, const GridConfig& grid,
                          const RunOptions& options) {
  EvaluationResult result;
  for (const auto& experiment : grid.experiments) result.merge(run_experiment(corpus, questions, experiment, options));
  return result;
}

}  // namespace litscreen
