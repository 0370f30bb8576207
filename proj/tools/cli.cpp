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
#include "cli.hpp"

#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "litscreen/bridge.hpp"
#include "litscreen/corpus.hpp"
#include "litscreen/error.hpp"
#include "litscreen/eval.hpp"
#include "litscreen/experiment.hpp"
#include "litscreen/features.hpp"
#include "litscreen/questions.hpp"
#include "litscreen/report.hpp"
#include "litscreen/stub_sidecar.hpp"
#include "litscreen/tfidf.hpp"

namespace litscreen {
namespace {

struct Options {
  std::string corpus;
  std::string questions;
  std::string config;
  std::string metric = "auc";
  std::string format = "markdown";
  std::string out;
  std::string sidecar_endpoint;
  std::string cache_dir;
  std::string question;
  std::string experiment;
  std::string results;
  std::string stopwords;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> workers;
  bool stub_sidecar = false;
  bool pico = false;
  bool tfidf = false;
  bool wide = false;
};

// Writes to --out when given, else to the command's standard output.
class Sink {
 public:
  Sink(const std::string& path, std::ostream& fallback) : fallback_(fallback) {
    if (!path.empty()) {
      file_.open(path, std::ios::binary | std::ios::trunc);
      if (!file_) throw Error("cannot open output file " + path);
    }
  }
  std::ostream& stream() { return file_.is_open() ? file_ : fallback_; }
  void close() {
    if (file_.is_open()) {
      file_.close();
      if (!file_) throw Error("error writing output file");
    } else {
      fallback_.flush();
    }
  }

 private:
  std::ofstream file_;
  std::ostream& fallback_;
};

Corpus read_corpus(const std::string& path) {
  if (path.empty()) throw Error("--corpus is required");
  return parse_corpus(path, corpus_format_for(path));
}

std::vector<ResearchQuestion> read_questions(const std::string& path) {
  if (path.empty()) throw Error("--questions is required");
  return load_questions(path);
}

std::shared_ptr<BridgeClient> make_bridge(const Options& o, const GridConfig& grid, std::ostream& err) {
  std::string endpoint;
  if (o.stub_sidecar) endpoint = "stub";
  else if (!o.sidecar_endpoint.empty()) endpoint = o.sidecar_endpoint;
  else if (grid.sidecar_endpoint) endpoint = *grid.sidecar_endpoint;
  bool needed = false;
  for (const auto& e : grid.experiments) needed = needed || e.strategy >= 3;
  if (!needed) return nullptr;
  if (endpoint.empty()) throw Error("strategies 3 and 4 need --sidecar-endpoint or --stub-sidecar");
  BridgeOptions bo;
  if (!o.cache_dir.empty()) bo.cache_dir = std::filesystem::path(o.cache_dir);
  auto client = std::make_shared<BridgeClient>(make_transport(endpoint), bo);
  err << "litscreen: sidecar " << endpoint << " version " << client->sidecar_version() << '\n';
  return client;
}

GridConfig read_grid(const Options& o) {
  if (o.config.empty()) throw Error("--config is required");
  GridConfig grid = load_grid_config(o.config);
  if (o.seed)
    for (auto& e : grid.experiments) e.seed = *o.seed;
  if (o.workers) grid.workers = *o.workers;
  if (!o.stopwords.empty()) {
    auto list = std::make_shared<const StopwordList>(StopwordList::from_file(o.stopwords));
    for (auto& e : grid.experiments) e.stopwords = list;
  }
  return grid;
}

void log_experiments(const GridConfig& grid, std::ostream& err) {
  for (const auto& e : grid.experiments)
    err << "litscreen: experiment \"" << e.label << "\" config_digest=" << e.digest() << " seed=" << e.seed << '\n';
}

int cmd_stats(const Options& o, std::ostream& out) {
  const Corpus corpus = read_corpus(o.corpus);
  Sink sink(o.out, out);
  write_stats_csv(sink.stream(), corpus_stats(corpus));
  sink.close();
  return 0;
}

int cmd_featurize(const Options& o, std::ostream& out, std::ostream& err) {
  const Corpus corpus = read_corpus(o.corpus);
  const auto questions = read_questions(o.questions);
  std::optional<TfidfVectorizer> vectorizer;
  if (o.tfidf) {
    std::vector<std::string> docs;
    for (const auto& r : corpus.records()) docs.push_back(article_text(r));
    vectorizer = TfidfVectorizer::fit(docs);
    err << "litscreen: TFIDF fitted on the whole corpus (" << vectorizer->size()
        << " terms); use for export only, not for evaluation\n";
  }
  const FeatureMode mode = o.pico ? FeatureMode::kPico : FeatureMode::kStandard;
  std::optional<StopwordList> stopwords;
  if (!o.stopwords.empty()) stopwords = StopwordList::from_file(o.stopwords);
  FeatureOptions fopts;
  fopts.stopwords = stopwords ? &*stopwords : nullptr;
  std::vector<FeatureVector> rows;
  std::map<std::string, PairFeaturizer> featurizers;
  for (const auto& r : corpus.records()) {
    auto it = featurizers.find(r.question_id);
    if (it == featurizers.end()) {
      const ResearchQuestion* q = find_question(questions, r.question_id);
      if (!q) throw Error("corpus question '" + r.question_id + "' is not in the question file");
      it = featurizers.emplace(r.question_id, PairFeaturizer(*q, mode, vectorizer ? &*vectorizer : nullptr, fopts)).first;
    }
    rows.push_back(it->second(r));
  }
  Sink sink(o.out, out);
  write_feature_csv(sink.stream(), rows);
  sink.close();
  return 0;
}

int cmd_run(const Options& o, std::ostream& out, std::ostream& err) {
  const GridConfig grid = read_grid(o);
  const Corpus corpus = read_corpus(o.corpus);
  const auto questions = read_questions(o.questions);
  log_experiments(grid, err);
  RunOptions ro;
  ro.workers = grid.workers;
  ro.bridge = make_bridge(o, grid, err);
  const EvaluationResult result = run_grid(corpus, questions, grid, ro);
  Sink sink(o.out, out);
  write_results_csv(sink.stream(), result);
  sink.close();
  if (!o.out.empty()) err << "litscreen: results written to " << o.out << '\n';
  return 0;
}

int cmd_rank(const Options& o, std::ostream& out, std::ostream& err) {
  GridConfig grid = read_grid(o);
  const ExperimentConfig* chosen = nullptr;
  if (o.experiment.empty()) {
    if (grid.experiments.size() != 1) throw Error("config holds several experiments; pick one with --experiment");
    chosen = &grid.experiments.front();
  } else {
    for (const auto& e : grid.experiments)
      if (e.label == o.experiment) chosen = &e;
    if (!chosen) throw Error("no experiment labelled '" + o.experiment + "' in " + o.config);
  }
  if (o.question.empty()) throw Error("--question is required");
  const Corpus corpus = read_corpus(o.corpus);
  const auto questions = read_questions(o.questions);
  GridConfig one = grid;
  one.experiments = {*chosen};
  log_experiments(one, err);
  RunOptions ro;
  ro.workers = grid.workers;
  ro.bridge = make_bridge(o, one, err);
  const auto scores = score_held_out(corpus, questions, *chosen, o.question, ro);
  const RankedList list = make_ranked_list(o.question, scores, corpus);
  Sink sink(o.out, out);
  write_ranked_list(sink.stream(), list);
  sink.close();
  return 0;
}

int cmd_report(const Options& o, std::ostream& out) {
  const Metric metric = parse_metric(o.metric);
  const TableFormat format = parse_table_format(o.format);
  std::ifstream in(o.results);
  if (!in) throw Error("cannot open results file " + o.results);
  const EvaluationResult result = o.wide ? read_wide_table(in, metric, o.results) : read_results_csv(in, o.results);
  const std::string text = render_table(result, metric, format);
  Sink sink(o.out, out);
  sink.stream() << text;
  sink.close();
  return 0;
}

int cmd_question_audit(const Options& o, std::ostream& out) {
  const auto questions = read_questions(o.questions);
  Sink sink(o.out, out);
  std::ostream& s = sink.stream();
  s << "question_id,words,sentences,syllables,fkgl,above_journal_average\n";
  for (const auto& q : questions) {
    const ReadabilityReport r = readability(q.standard_text);
    std::ostringstream fk;
    fk.precision(2);
    fk << std::fixed << r.fkgl;
    s << q.question_id << ',' << r.word_count << ',' << r.sentence_count << ',' << r.syllable_count << ',' << fk.str()
      << ',' << (r.fkgl > kJournalArticleFkgl ? "yes" : "no") << '\n';
  }
  sink.close();
  return 0;
}

}  // namespace

int cli_dispatch(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"litscreen: score candidate articles against research questions and evaluate screening quality"};
  app.require_subcommand(1);

  auto add_data = [&](CLI::App* sub, bool need_questions) {
    sub->add_option("--corpus", o.corpus, "Corpus file (.jsonl or .csv)")->required();
    if (need_questions) sub->add_option("--questions", o.questions, "Question file (JSON array or JSONL)")->required();
  };
  auto add_run = [&](CLI::App* sub) {
    add_data(sub, true);
    sub->add_option("--config", o.config, "Experiment config (JSON)")->required();
    sub->add_option("--out", o.out, "Output file (default: standard output)");
    sub->add_option("--seed", o.seed, "Override the seed of every experiment");
    sub->add_option("--workers", o.workers, "Folds evaluated in parallel");
    sub->add_option("--sidecar-endpoint", o.sidecar_endpoint, "http://host:port or exec:<program> [args]");
    sub->add_flag("--stub-sidecar", o.stub_sidecar, "Use the built-in deterministic stub sidecar");
    sub->add_option("--cache-dir", o.cache_dir, "Directory for the similarity cache");
    sub->add_option("--stopwords", o.stopwords, "Stopword file, one word per line (default: built-in list)");
  };

  auto* stats = app.add_subcommand("stats", "Per-question record counts and inclusion rates (CSV)");
  stats->add_option("corpus", o.corpus, "Corpus file")->required();
  stats->add_option("--out", o.out, "Output file (default: standard output)");

  auto* featurize = app.add_subcommand("featurize", "Export pair feature vectors (CSV)");
  add_data(featurize, true);
  featurize->add_option("--out", o.out, "Output file (default: standard output)");
  featurize->add_flag("--pico", o.pico, "Match each PICO element separately");
  featurize->add_flag("--tfidf", o.tfidf, "Add TFIDF vectors fitted on the whole corpus");
  featurize->add_option("--stopwords", o.stopwords, "Stopword file, one word per line (default: built-in list)");

  auto* run = app.add_subcommand("run", "Leave-one-question-out evaluation; writes a results CSV");
  add_run(run);

  auto* rank = app.add_subcommand("rank", "Train on all other questions and rank one question's articles");
  add_run(rank);
  rank->add_option("--question", o.question, "Question to rank")->required();
  rank->add_option("--experiment", o.experiment, "Experiment label when the config holds several");

  auto* report = app.add_subcommand("report", "Render a results file as a table with best-per-question markers");
  report->add_option("results", o.results, "Results CSV")->required();
  report->add_option("--metric", o.metric, "auc or acc_bot50")->check(CLI::IsMember({"auc", "acc_bot50"}));
  report->add_option("--format", o.format, "markdown or csv")->check(CLI::IsMember({"markdown", "md", "csv"}));
  report->add_option("--out", o.out, "Output file (default: standard output)");
  report->add_flag("--wide", o.wide, "Input is a wide table: experiment,<q1>,<q2>,...");

  auto* audit = app.add_subcommand("question-audit", "Readability of each question's standard text (CSV)");
  audit->add_option("--questions", o.questions, "Question file")->required();
  audit->add_option("--out", o.out, "Output file (default: standard output)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "litscreen: " << e.what() << "\n";
    const CLI::App* failing = &app;
    for (auto* sub : app.get_subcommands()) failing = sub;
    err << failing->help();
    return 2;
  }

  try {
    if (*stats) return cmd_stats(o, out);
    if (*featurize) return cmd_featurize(o, out, err);
    if (*run) return cmd_run(o, out, err);
    if (*rank) return cmd_rank(o, out, err);
    if (*report) return cmd_report(o, out);
    if (*audit) return cmd_question_audit(o, out);
  } catch (const std::exception& e) {
    err << "litscreen: error: " << e.what() << '\n';
    return 1;
  }
  return 2;
}

}  // namespace litscreen
