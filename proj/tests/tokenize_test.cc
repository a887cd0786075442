// Copyright 2026 The subtok Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "subtok/tokenize.h"

#include <algorithm>
#include <set>

#include "gmock/gmock.h"
#include "gtest/gtest.h"
#include "oracles.h"

namespace subtok {
namespace {

using ::testing::ElementsAre;
using ::testing::IsEmpty;

TEST(WordTokenizeTest, SplitsPunctuation) {
  EXPECT_THAT(WordTokenize("you idiot!"), ElementsAre("you", "idiot", "!"));
  EXPECT_THAT(WordTokenize("a-b"), ElementsAre("a", "-", "b"));
  EXPECT_THAT(WordTokenize("so...what"), ElementsAre("so", ".", ".", ".", "what"));
}

TEST(WordTokenizeTest, KeepsSentinels) {
  EXPECT_THAT(WordTokenize("<user> hi"), ElementsAre("<user>", "hi"));
  EXPECT_THAT(WordTokenize("see <url>"), ElementsAre("see", "<url>"));
  // Angle brackets are symbols everywhere else.
  EXPECT_THAT(WordTokenize("<b>"), ElementsAre("<", "b", ">"));
}

TEST(WordTokenizeTest, DigitsAndLettersStayTogether) {
  EXPECT_THAT(WordTokenize("w0m3n h8"), ElementsAre("w0m3n", "h8"));
}

TEST(WordTokenizeTest, NonAsciiSymbols) {
  // U+2019 (Pf) and U+1F600 (So) are split out.
  EXPECT_THAT(WordTokenize("don\xE2\x80\x99t \xF0\x9F\x98\x80" "ok"),
              ElementsAre("don", "\xE2\x80\x99", "t", "\xF0\x9F\x98\x80", "ok"));
}

TEST(WordTokenizeTest, EmptyInput) {
  EXPECT_THAT(WordTokenize(""), IsEmpty());
  EXPECT_THAT(WordTokenize("   "), IsEmpty());
}

TEST(WordNgramsTest, Examples) {
  EXPECT_THAT(WordNgrams({"a", "b", "c"}, 2), ElementsAre("a b", "b c"));
  EXPECT_THAT(WordNgrams({"a"}, 2), IsEmpty());
  EXPECT_THAT(WordNgrams({"a", "b", "c"}, 1), ElementsAre("a", "b", "c"));
  EXPECT_THAT(WordNgrams({"a", "b", "c"}, 3), ElementsAre("a b c"));
  EXPECT_THROW(WordNgrams({"a"}, 0), std::invalid_argument);
}

TEST(SubwordNgramsTest, Cat) {
  EXPECT_THAT(ExtractSubwordNgrams("cat", 2, 3),
              ElementsAre("<c", "ca", "at", "t>", "<ca", "cat", "at>"));
}

TEST(SubwordNgramsTest, FullLengthIsTheWrappedWord) {
  for (const std::string word : {"a", "idiot", "w0m3n"}) {
    const int len = static_cast<int>(word.size()) + 2;
    EXPECT_THAT(ExtractSubwordNgrams(word, len, len), ElementsAre("<" + word + ">"));
  }
}

TEST(SubwordNgramsTest, CountsScalarsNotBytes) {
  // "é" is two bytes but one scalar: "<é>" has three unigrams.
  EXPECT_THAT(ExtractSubwordNgrams("\xC3\xA9", 1, 1), ElementsAre("<", "\xC3\xA9", ">"));
}

TEST(SubwordNgramsTest, InvalidRange) {
  EXPECT_THROW(ExtractSubwordNgrams("cat", 0, 3), std::invalid_argument);
  EXPECT_THROW(ExtractSubwordNgrams("cat", 4, 3), std::invalid_argument);
}

TEST(SubwordNgramsTest, MatchesEnumeration) {
  for (const std::string word : {"idiot", "idiotic", "w0m3n", "\xC3\xA9t\xC3\xA9"}) {
    for (int a = 1; a <= 6; ++a) {
      for (int b = a; b <= 6; ++b) {
        TokenStream got = ExtractSubwordNgrams(word, a, b);
        std::vector<std::string> want = oracle::Subwords(word, a, b);
        std::sort(got.begin(), got.end());
        std::sort(want.begin(), want.end());
        EXPECT_EQ(got, want) << word << " " << a << "-" << b;
      }
    }
  }
}

TEST(SubwordNgramsTest, IdiotAndIdioticShareFifteen) {
  const TokenStream a = ExtractSubwordNgrams("idiot", 2, 6);
  const TokenStream b = ExtractSubwordNgrams("idiotic", 2, 6);
  const std::set<std::string> sa(a.begin(), a.end());
  const std::set<std::string> sb(b.begin(), b.end());
  std::vector<std::string> shared;
  std::set_intersection(sa.begin(), sa.end(), sb.begin(), sb.end(),
                        std::back_inserter(shared));
  EXPECT_EQ(shared.size(), 15u);
  EXPECT_EQ(oracle::SharedSubwords("idiot", "idiotic", 2, 6), 15u);
}

}  // namespace
}  // namespace subtok
