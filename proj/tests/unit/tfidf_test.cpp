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

#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "litscreen/error.hpp"
#include "litscreen/tfidf.hpp"

namespace litscreen {
namespace {

const TfidfConfig kAll{1000, 1};

TEST(Tfidf, UbiquitousTokenHasUnitIdf) {
  const std::vector<std::string> docs = {"pain nerve", "pain knee", "pain hip"};
  const auto v = TfidfVectorizer::fit(docs, kAll);
  EXPECT_DOUBLE_EQ(v.idf()[*v.index_of("pain")], 1.0);
}

TEST(Tfidf, SingletonTokenIdfClosedForm) {
  const std::vector<std::string> docs = {"pain nerve", "pain knee", "pain hip", "pain"};
  const auto v = TfidfVectorizer::fit(docs, kAll);
  EXPECT_DOUBLE_EQ(v.idf()[*v.index_of("knee")], std::log((1.0 + 4.0) / 2.0) + 1.0);
}

TEST(Tfidf, IdfIsFiniteAndPositive) {
  const std::vector<std::string> docs = {"a b c", "a b", "a", "d e f g"};
  const auto v = TfidfVectorizer::fit(docs, kAll);
  for (double w : v.idf()) {
    EXPECT_TRUE(std::isfinite(w));
    EXPECT_GT(w, 0.0);
  }
}

TEST(Tfidf, MinDfDropsRareTokens) {
  const std::vector<std::string> docs = {"pain nerve", "pain knee", "nerve"};
  const auto v = TfidfVectorizer::fit(docs, TfidfConfig{100, 2});
  EXPECT_EQ(v.vocabulary(), (std::vector<std::string>{"nerve", "pain"}));
}

TEST(Tfidf, CapKeepsMostFrequentThenTokenOrder) {
  // df: a=3, b=2, c=2, d=2, e=1
  const std::vector<std::string> docs = {"a b c d e", "a b c d", "a"};
  const auto v = TfidfVectorizer::fit(docs, TfidfConfig{3, 1});
  EXPECT_EQ(v.vocabulary(), (std::vector<std::string>{"a", "b", "c"}));
  const auto wide = TfidfVectorizer::fit(docs, TfidfConfig{50, 1});
  EXPECT_EQ(wide.size(), 5u);
}

TEST(Tfidf, CapSizeIsMinOfCapAndEligible) {
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<int> word(0, 60);
  for (std::size_t cap : {1u, 5u, 20u, 200u}) {
    std::vector<std::string> docs;
    for (int d = 0; d < 30; ++d) {
      std::string s;
      for (int k = 0; k < 8; ++k) s += "w" + std::to_string(word(rng)) + " ";
      docs.push_back(s);
    }
    const auto eligible = TfidfVectorizer::fit(docs, TfidfConfig{100000, 2}).size();
    EXPECT_EQ(TfidfVectorizer::fit(docs, TfidfConfig{cap, 2}).size(), std::min(cap, eligible));
  }
}

TEST(Tfidf, EmptyTrainingSetThrows) {
  EXPECT_THROW(TfidfVectorizer::fit(std::vector<std::string>{}), Error);
}

TEST(Tfidf, TransformIsL2Normalized) {
  const std::vector<std::string> docs = {"pain nerve nerve", "pain knee", "hip"};
  const auto v = TfidfVectorizer::fit(docs, kAll);
  const auto x = v.transform("nerve nerve pain knee unknown");
  EXPECT_NEAR(x.norm(), 1.0, 1e-12);
  for (std::size_t i = 1; i < x.indices.size(); ++i) EXPECT_LT(x.indices[i - 1], x.indices[i]);
  EXPECT_TRUE(v.transform("unknown words only").empty());
}

TEST(Tfidf, TransformWeightsFollowCountsTimesIdf) {
  const std::vector<std::string> docs = {"pain nerve", "pain knee"};
  const auto v = TfidfVectorizer::fit(docs, kAll);
  const auto x = v.transform("nerve nerve pain");
  const double wn = 2.0 * (std::log(3.0 / 2.0) + 1.0);
  const double wp = 1.0;
  const double norm = std::sqrt(wn * wn + wp * wp);
  ASSERT_EQ(x.indices.size(), 2u);
  EXPECT_NEAR(x.values[0], wn / norm, 1e-12);  // "nerve" sorts before "pain"
  EXPECT_NEAR(x.values[1], wp / norm, 1e-12);
}

TEST(TfidfCosine, IdentityOrthogonalityAndZeroVector) {
  const std::vector<std::string> docs = {"pain nerve", "knee hip", "pain hip"};
  const auto v = TfidfVectorizer::fit(docs, kAll);
  EXPECT_NEAR(tfidf_cosine(v, "pain nerve", "pain nerve"), 1.0, 1e-12);
  EXPECT_EQ(tfidf_cosine(v, "nerve", "knee"), 0.0);
  EXPECT_EQ(tfidf_cosine(v, "nerve", "cardiology"), 0.0);
  EXPECT_EQ(tfidf_cosine(v, "", ""), 0.0);
}

TEST(TfidfCosine, StaysWithinUnitInterval) {
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<int> word(0, 20);
  std::vector<std::string> docs;
  auto doc = [&] {
    std::string s;
    for (int k = 0; k < 6; ++k) s += "w" + std::to_string(word(rng)) + " ";
    return s;
  };
  for (int i = 0; i < 20; ++i) docs.push_back(doc());
  const auto v = TfidfVectorizer::fit(docs, kAll);
  for (int i = 0; i < 300; ++i) {
    const double c = tfidf_cosine(v, doc(), doc());
    EXPECT_GE(c, 0.0);
    EXPECT_LE(c, 1.0);
  }
}

TEST(Tfidf, SentinelTokenOutsideTrainingNeverEntersVocabulary) {
  const std::vector<std::string> train = {"nerve pain", "nerve knee", "pain knee"};
  const auto v = TfidfVectorizer::fit(train, kAll);
  EXPECT_FALSE(v.contains("zzsentinelzz"));
  EXPECT_TRUE(v.transform("zzsentinelzz zzsentinelzz").empty());
  EXPECT_EQ(v.document_count(), 3u);
}

}  // namespace
}  // namespace litscreen
