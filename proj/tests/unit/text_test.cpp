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

#include "litscreen/digest.hpp"
#include "litscreen/text.hpp"
#include "litscreen/unicode.hpp"

namespace litscreen {
namespace {

TEST(Tokenize, SplitsOnNonAlphanumericAndLowercases) {
  EXPECT_EQ(tokenize("Nerve-blockade, post-surgical."), (TokenList{"nerve", "blockade", "post", "surgical"}));
}

TEST(Tokenize, EmptyTextGivesNoTokens) { EXPECT_TRUE(tokenize("").empty()); }

TEST(Tokenize, KeepsDigitsAndNonAsciiLetters) {
  EXPECT_EQ(tokenize("IL-6 Ödem 3D"), (TokenList{"il", "6", "ödem", "3d"}));
}

TEST(Tokenize, NeverEmitsEmptyTokens) {
  for (const char* text : {"--", " a  b ", "...x...", "\xF0\x9F\x98\x80 smile"}) {
    for (const auto& t : tokenize(text)) EXPECT_FALSE(t.empty()) << text;
  }
}

TEST(TokenSet, SortedUniqueAndIntersects) {
  TokenSet a({"b", "a", "b", "c"});
  TokenSet b({"c", "d", "a"});
  EXPECT_EQ(a.tokens(), (std::vector<std::string>{"a", "b", "c"}));
  EXPECT_TRUE(a.contains("b"));
  EXPECT_FALSE(a.contains("d"));
  EXPECT_EQ(a.intersection_size(b), 2u);
}

TEST(Stopwords, BuiltInListIsPinned) {
  const auto& list = StopwordList::english();
  EXPECT_EQ(list.size(), 180u);
  EXPECT_EQ(list.checksum(), kEnglishStopwordsSha256);
  EXPECT_TRUE(list.contains("the"));
  EXPECT_FALSE(list.contains("nerve"));
}

TEST(Digest, Sha256KnownAnswer) {
  EXPECT_EQ(sha256_hex("abc"), "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
  EXPECT_EQ(sha256_hex(""), "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
}

TEST(Unicode, NormalizesToNfc) {
  const std::string decomposed = "e\xCC\x81";  // e + combining acute
  EXPECT_EQ(normalize_nfc(decomposed), "\xC3\xA9");
  EXPECT_EQ(code_point_count(normalize_nfc(decomposed)), 1u);
}

TEST(Unicode, ValidatesUtf8) {
  EXPECT_TRUE(is_valid_utf8("plain \xC3\xA9"));
  EXPECT_FALSE(is_valid_utf8("\xC3"));
  EXPECT_FALSE(is_valid_utf8("\xFF\xFE"));
}

TEST(Unicode, CodePointRoundTripAndTruncation) {
  const std::string s = "a\xC3\xA9\xE2\x82\xAC";
  const auto cps = to_code_points(s);
  ASSERT_EQ(cps.size(), 3u);
  EXPECT_EQ(to_utf8(cps), s);
  EXPECT_EQ(to_code_points(s, 2).size(), 2u);
}

}  // namespace
}  // namespace litscreen
