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
// Writes a synthetic benchmark corpus (corpus.jsonl) and its questions
// (questions.jsonl) into a directory.

#include <filesystem>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "litscreen/corpus.hpp"
#include "litscreen/questions.hpp"
#include "litscreen/synthetic.hpp"

int main(int argc, char** argv) {
  CLI::App app{"litscreen synthetic benchmark generator"};
  std::string out_dir;
  std::size_t records = 300;
  std::uint64_t seed = 7;
  app.add_option("--out-dir", out_dir, "Output directory")->required();
  app.add_option("--records", records, "Records per question");
  app.add_option("--seed", seed, "Generator seed");
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }
  try {
    const auto data = litscreen::make_synthetic(litscreen::SyntheticSpec::standard(records, seed));
    std::filesystem::create_directories(out_dir);
    std::ofstream corpus(std::filesystem::path(out_dir) / "corpus.jsonl", std::ios::binary);
    litscreen::write_corpus(corpus, data.corpus, litscreen::CorpusFormat::kJsonl);
    std::ofstream questions(std::filesystem::path(out_dir) / "questions.jsonl", std::ios::binary);
    litscreen::write_questions(questions, data.questions);
    if (!corpus || !questions) throw std::runtime_error("write failed");
  } catch (const std::exception& e) {
    std::cerr << "litscreen_synth: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
