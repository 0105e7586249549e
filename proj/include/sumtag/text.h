#pragma once

// Tokenization, n-gram counting and longest common subsequence. Every
// function here is pure and safe to call concurrently.

#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace sumtag {

enum class TokenKind { kWordLevel, kCharLevel };
enum class Normalization { kNone, kNFC };

struct TokenizationScheme {
  TokenKind kind = TokenKind::kWordLevel;
  bool lowercase = true;
  Normalization normalization = Normalization::kNFC;

  static TokenizationScheme word_level(bool lowercase = true) {
    return {TokenKind::kWordLevel, lowercase, Normalization::kNFC};
  }
  static TokenizationScheme char_level(bool lowercase = true) {
    return {TokenKind::kCharLevel, lowercase, Normalization::kNFC};
  }

  friend bool operator==(const TokenizationScheme&,
                         const TokenizationScheme&) = default;
};

std::string to_string(TokenKind kind);

struct TokenSequence {
  std::vector<std::string> tokens;
  TokenizationScheme scheme;

  std::size_t size() const { return tokens.size(); }
  bool empty() const { return tokens.empty(); }

  friend bool operator==(const TokenSequence&, const TokenSequence&) = default;
};

// WordLevel: split on Unicode whitespace, every P*/S* character becomes its
// own token. CharLevel: one token per non-whitespace scalar value.
TokenSequence tokenize(std::string_view text, const TokenizationScheme& scheme);

using NGram = std::vector<std::string>;

class NGramCounts {
 public:
  explicit NGramCounts(std::size_t order) : order_(order) {}

  std::size_t order() const { return order_; }
  const std::map<NGram, std::size_t>& counts() const { return counts_; }
  std::size_t count(const NGram& gram) const;
  std::size_t total() const { return total_; }
  bool empty() const { return counts_.empty(); }

  void add(NGram gram);

 private:
  std::size_t order_;
  std::size_t total_ = 0;
  std::map<NGram, std::size_t> counts_;
};

// Throws std::invalid_argument when n == 0.
NGramCounts ngram_counts(std::span<const std::string> tokens, std::size_t n);
inline NGramCounts ngram_counts(const TokenSequence& seq, std::size_t n) {
  return ngram_counts(std::span<const std::string>(seq.tokens), n);
}

// O(|a|*|b|) time, O(min(|a|,|b|)) memory.
std::size_t lcs_length(std::span<const std::string> a,
                       std::span<const std::string> b);
inline std::size_t lcs_length(const TokenSequence& a, const TokenSequence& b) {
  return lcs_length(std::span<const std::string>(a.tokens),
                    std::span<const std::string>(b.tokens));
}

}  // namespace sumtag
