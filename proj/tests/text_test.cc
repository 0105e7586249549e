#include "sumtag/text.h"

#include <random>
#include <stdexcept>

#include <gtest/gtest.h>

#include "oracle/oracle.h"
#include "test_util.h"

namespace sumtag {
namespace {

using Tokens = std::vector<std::string>;

TEST(Tokenize, WordLevelSplitsOnWhitespace) {
  EXPECT_EQ(tokenize("the cat sat", TokenizationScheme::word_level()).tokens,
            (Tokens{"the", "cat", "sat"}));
}

TEST(Tokenize, CharLevelOneTokenPerCharacter) {
  EXPECT_EQ(tokenize("新的算法", TokenizationScheme::char_level()).tokens,
            (Tokens{"新", "的", "算", "法"}));
}

TEST(Tokenize, WordLevelIsolatesPunctuationAndLowercases) {
  EXPECT_EQ(tokenize("The Cat, sat.", TokenizationScheme::word_level()).tokens,
            (Tokens{"the", "cat", ",", "sat", "."}));
}

TEST(Tokenize, CharLevelDropsWhitespace) {
  EXPECT_EQ(tokenize(" 新 的\t算\n", TokenizationScheme::char_level()).tokens,
            (Tokens{"新", "的", "算"}));
}

TEST(Tokenize, LowercaseCanBeDisabled) {
  EXPECT_EQ(tokenize("The Cat", TokenizationScheme::word_level(false)).tokens,
            (Tokens{"The", "Cat"}));
}

TEST(Tokenize, NfcMergesDecomposedForms) {
  // "e" + combining acute vs precomposed U+00E9.
  auto a = tokenize("caf\x65\xcc\x81", TokenizationScheme::word_level());
  auto b = tokenize("caf\xc3\xa9", TokenizationScheme::word_level());
  EXPECT_EQ(a.tokens, b.tokens);

  TokenizationScheme raw = TokenizationScheme::word_level();
  raw.normalization = Normalization::kNone;
  EXPECT_NE(tokenize("caf\x65\xcc\x81", raw).tokens,
            tokenize("caf\xc3\xa9", raw).tokens);
}

TEST(Tokenize, FullWidthPunctuationIsolated) {
  EXPECT_EQ(tokenize("算法，数据。", TokenizationScheme::word_level()).tokens,
            (Tokens{"算法", "，", "数据", "。"}));
}

TEST(Tokenize, EmptyInput) {
  EXPECT_TRUE(tokenize("", TokenizationScheme::word_level()).empty());
  EXPECT_TRUE(tokenize("  \n", TokenizationScheme::char_level()).empty());
}

TEST(Tokenize, Deterministic) {
  const std::string text = "Researchers at Flinders University, 澳大利亚, built CPAet!";
  for (auto scheme : {TokenizationScheme::word_level(),
                      TokenizationScheme::char_level()}) {
    EXPECT_EQ(tokenize(text, scheme), tokenize(text, scheme));
  }
}

TEST(NGramCounts, Unigrams) {
  auto c = ngram_counts(Tokens{"a", "b", "a"}, 1);
  EXPECT_EQ(c.counts().size(), 2u);
  EXPECT_EQ(c.count({"a"}), 2u);
  EXPECT_EQ(c.count({"b"}), 1u);
  EXPECT_EQ(c.total(), 3u);
}

TEST(NGramCounts, Bigrams) {
  auto c = ngram_counts(Tokens{"a", "b", "a"}, 2);
  EXPECT_EQ(c.counts().size(), 2u);
  EXPECT_EQ(c.count({"a", "b"}), 1u);
  EXPECT_EQ(c.count({"b", "a"}), 1u);
}

TEST(NGramCounts, OrderLongerThanSequence) {
  auto c = ngram_counts(Tokens{"a", "b", "c"}, 4);
  EXPECT_TRUE(c.empty());
  EXPECT_EQ(c.total(), 0u);
}

TEST(NGramCounts, ZeroOrderRejected) {
  EXPECT_THROW(ngram_counts(Tokens{"a"}, 0), std::invalid_argument);
}

TEST(NGramCounts, TotalMatchesLengthFormula) {
  std::mt19937 rng(11);
  for (int trial = 0; trial < 300; ++trial) {
    const auto s = testutil::random_tokens(rng, testutil::uniform(rng, 0, 30), 4);
    for (std::size_t n = 1; n <= 6; ++n) {
      const auto c = ngram_counts(s, n);
      const std::size_t expected = s.size() >= n ? s.size() - n + 1 : 0;
      ASSERT_EQ(c.total(), expected);
      std::size_t sum = 0;
      for (const auto& [g, k] : c.counts()) sum += k;
      ASSERT_EQ(sum, expected);
    }
  }
}

Tokens chars(const std::string& s) {
  Tokens out;
  for (char c : s) out.emplace_back(1, c);
  return out;
}

TEST(Lcs, Examples) {
  const Tokens x{"a", "b", "c"};
  EXPECT_EQ(lcs_length(x, x), 3u);
  EXPECT_EQ(lcs_length(chars("ABCBDAB"), chars("BDCABA")), 4u);
  EXPECT_EQ(lcs_length(chars("abc"), chars("xyz")), 0u);
  EXPECT_EQ(lcs_length(Tokens{}, x), 0u);
}

TEST(Lcs, SymmetryBoundAndSuffix) {
  std::mt19937 rng(5);
  for (int trial = 0; trial < 500; ++trial) {
    auto a = testutil::random_tokens(rng, testutil::uniform(rng, 0, 15), 3);
    auto b = testutil::random_tokens(rng, testutil::uniform(rng, 0, 15), 3);
    const std::size_t l = lcs_length(a, b);
    ASSERT_EQ(l, lcs_length(b, a));
    ASSERT_LE(l, std::min(a.size(), b.size()));
    auto a2 = a, b2 = b;
    a2.push_back("z");
    b2.push_back("z");
    ASSERT_EQ(lcs_length(a2, b2), l + 1);
  }
}

TEST(Lcs, EqualsMinWhenSubsequence) {
  std::mt19937 rng(9);
  for (int trial = 0; trial < 200; ++trial) {
    auto b = testutil::random_tokens(rng, testutil::uniform(rng, 0, 20), 5);
    Tokens a;
    for (const auto& t : b) {
      if (testutil::uniform(rng, 0, 1)) a.push_back(t);
    }
    ASSERT_EQ(lcs_length(a, b), a.size());
  }
}

TEST(Lcs, MatchesBruteForce) {
  std::mt19937 rng(1234);
  for (int trial = 0; trial < 400; ++trial) {
    auto a = testutil::random_tokens(rng, testutil::uniform(rng, 0, 12), 4);
    auto b = testutil::random_tokens(rng, testutil::uniform(rng, 0, 12), 4);
    ASSERT_EQ(lcs_length(a, b), oracle::lcs_brute_force(a, b));
  }
}

}  // namespace
}  // namespace sumtag
