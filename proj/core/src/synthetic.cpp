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
#include "litscreen/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <set>

#include "litscreen/error.hpp"
#include "models.hpp"

namespace litscreen {

SyntheticSpec SyntheticSpec::standard(std::size_t records_per_question, std::uint64_t seed) {
  SyntheticSpec spec;
  spec.seed = seed;
  const double rates[] = {0.05, 0.10, 0.15, 0.20, 0.30, 0.40};
  for (int k = 0; k < 6; ++k)
    spec.questions.push_back({"SYN" + std::to_string(k + 1), records_per_question, rates[k]});
  return spec;
}

namespace {

constexpr const char* kDesignRelevant[] = {"randomised", "controlled", "trial",  "efficacy", "cohort",
                                           "prospective", "outcomes", "patients", "compared", "followup"};
constexpr const char* kDesignIrrelevant[] = {"editorial", "commentary", "survey",   "economic", "animal",
                                             "vitro",     "protocol",   "letter",   "opinion",  "histology"};

class Words {
 public:
  explicit Words(std::uint64_t seed) : rng_(seed) {}

  std::size_t pick(std::size_t n) { return static_cast<std::size_t>(uniform() * static_cast<double>(n)); }
  double uniform() { return static_cast<double>(rng_() >> 11) * 0x1.0p-53; }

  // A pronounceable lowercase word that was not issued before.
  std::string fresh() {
    static constexpr const char* kOnsets[] = {"b", "c", "d", "f", "g", "l", "m", "n", "p", "r", "s", "t", "v", "pr", "st", "tr"};
    static constexpr const char* kVowels[] = {"a", "e", "i", "o", "u", "ia", "eo"};
    for (;;) {
      std::string w;
      const std::size_t syllables = 2 + pick(3);
      for (std::size_t s = 0; s < syllables; ++s) {
        w += kOnsets[pick(std::size(kOnsets))];
        w += kVowels[pick(std::size(kVowels))];
      }
      if (pick(2)) w += "n";
      if (used_.insert(w).second) return w;
    }
  }

 private:
  std::mt19937_64 rng_;
  std::set<std::string> used_;
};

std::string capitalise(std::string s) {
  if (!s.empty() && s[0] >= 'a' && s[0] <= 'z') s[0] = static_cast<char>(s[0] - 'a' + 'A');
  return s;
}

}  // namespace

SyntheticData make_synthetic(const SyntheticSpec& spec) {
  if (spec.questions.empty()) throw Error("synthetic spec has no questions");
  Words words(detail::splitmix64(spec.seed));
  std::vector<std::string> filler;
  for (int k = 0; k < 600; ++k) filler.push_back(words.fresh());

  std::vector<ArticleRecord> records;
  SyntheticData data{Corpus{}, {}, {}};
  for (const auto& q : spec.questions) {
    if (q.records < 2) throw Error("synthetic question needs at least 2 records");
    std::vector<std::string> kw;
    for (int k = 0; k < 4; ++k) kw.push_back(words.fresh());
    ResearchQuestion rq;
    rq.question_id = q.question_id;
    rq.standard_text = "Does " + kw[0] + " " + kw[1] + " improve " + kw[2] + " in adults with " + kw[3] + "?";
    rq.pico.population = "Adults with " + kw[3];
    rq.pico.intervention = kw[0] + " " + kw[1];
    rq.pico.comparator = "Standard care";
    rq.pico.outcome = capitalise(kw[2]);
    data.questions.push_back(rq);
    data.keywords.push_back(kw);

    const auto positives = static_cast<std::size_t>(std::llround(q.inclusion_rate * static_cast<double>(q.records)));
    std::vector<int> labels(q.records, 0);
    std::fill(labels.begin(), labels.begin() + static_cast<std::ptrdiff_t>(positives), 1);
    for (std::size_t i = labels.size(); i > 1; --i) std::swap(labels[i - 1], labels[words.pick(i)]);

    for (std::size_t i = 0; i < q.records; ++i) {
      const bool looks_relevant = (labels[i] == 1) != (words.uniform() < spec.label_noise);
      auto sentence = [&](std::size_t length, std::vector<std::string> planted) {
        std::vector<std::string> toks;
        for (std::size_t k = 0; k < length; ++k) toks.push_back(filler[words.pick(filler.size())]);
        for (auto& p : planted) toks.insert(toks.begin() + static_cast<std::ptrdiff_t>(words.pick(toks.size() + 1)), p);
        std::string s = capitalise(toks.front());
        for (std::size_t k = 1; k < toks.size(); ++k) s += " " + toks[k];
        return s + ".";
      };
      std::vector<std::string> title_planted, body_planted;
      if (looks_relevant) {
        // Most question keywords, several design words.
        for (const auto& k : kw)
          if (words.uniform() < 0.85) (words.uniform() < 0.5 ? title_planted : body_planted).push_back(k);
        for (int k = 0; k < 4; ++k) body_planted.push_back(kDesignRelevant[words.pick(std::size(kDesignRelevant))]);
        if (words.uniform() < 0.2) body_planted.push_back(kDesignIrrelevant[words.pick(std::size(kDesignIrrelevant))]);
      } else {
        // Near misses share a keyword or two; design words lean irrelevant.
        for (const auto& k : kw)
          if (words.uniform() < 0.2) body_planted.push_back(k);
        for (int k = 0; k < 3; ++k) body_planted.push_back(kDesignIrrelevant[words.pick(std::size(kDesignIrrelevant))]);
        if (words.uniform() < 0.3) body_planted.push_back(kDesignRelevant[words.pick(std::size(kDesignRelevant))]);
      }
      ArticleRecord r;
      r.question_id = q.question_id;
      r.article_id = q.question_id + "-" + std::to_string(i + 1);
      r.title = sentence(5 + words.pick(5), title_planted);
      const std::size_t sentences = 3 + words.pick(4);
      for (std::size_t s = 0; s < sentences; ++s) {
        std::vector<std::string> planted;
        for (std::size_t k = s; k < body_planted.size(); k += sentences) planted.push_back(body_planted[k]);
        r.abstract += (s ? " " : "") + sentence(8 + words.pick(10), planted);
      }
      r.label = labels[i];
      records.push_back(std::move(r));
    }
  }
  data.corpus = Corpus(std::move(records), "synthetic");
  return data;
}

}  // namespace litscreen
