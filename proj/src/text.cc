#include "sumtag/text.h"

#include <algorithm>
#include <stdexcept>

#include "sumtag/unicode.h"

namespace sumtag {

std::string to_string(TokenKind kind) {
  return kind == TokenKind::kWordLevel ? "word" : "char";
}

TokenSequence tokenize(std::string_view text, const TokenizationScheme& scheme) {
  std::string prepared(text);
  if (scheme.normalization == Normalization::kNFC) {
    prepared = unicode::nfc(prepared);
  }
  if (scheme.lowercase) prepared = unicode::to_lower(prepared);

  TokenSequence out{{}, scheme};
  const std::u32string code_points = unicode::decode(prepared);

  if (scheme.kind == TokenKind::kCharLevel) {
    for (char32_t c : code_points) {
      if (!unicode::is_whitespace(c)) out.tokens.push_back(unicode::encode(c));
    }
    return out;
  }

  std::string current;
  auto flush = [&] {
    if (!current.empty()) {
      out.tokens.push_back(std::move(current));
      current.clear();
    }
  };
  for (char32_t c : code_points) {
    if (unicode::is_whitespace(c)) {
      flush();
    } else if (unicode::is_punct_or_symbol(c)) {
      flush();
      out.tokens.push_back(unicode::encode(c));
    } else {
      current += unicode::encode(c);
    }
  }
  flush();
  return out;
}

std::size_t NGramCounts::count(const NGram& gram) const {
  auto it = counts_.find(gram);
  return it == counts_.end() ? 0 : it->second;
}

void NGramCounts::add(NGram gram) {
  if (gram.size() != order_) {
    throw std::invalid_argument("n-gram has wrong order");
  }
  ++counts_[std::move(gram)];
  ++total_;
}

NGramCounts ngram_counts(std::span<const std::string> tokens, std::size_t n) {
  if (n == 0) throw std::invalid_argument("n-gram order must be >= 1");
  NGramCounts counts(n);
  if (tokens.size() < n) return counts;
  for (std::size_t i = 0; i + n <= tokens.size(); ++i) {
    counts.add(NGram(tokens.begin() + i, tokens.begin() + i + n));
  }
  return counts;
}

std::size_t lcs_length(std::span<const std::string> a,
                       std::span<const std::string> b) {
  if (a.size() < b.size()) std::swap(a, b);
  // Rolling row over the shorter side.
  std::vector<std::size_t> row(b.size() + 1, 0);
  for (std::size_t i = 1; i <= a.size(); ++i) {
    std::size_t diagonal = 0;
    for (std::size_t j = 1; j <= b.size(); ++j) {
      const std::size_t above = row[j];
      if (a[i - 1] == b[j - 1]) {
        row[j] = diagonal + 1;
      } else {
        row[j] = std::max(row[j], row[j - 1]);
      }
      diagonal = above;
    }
  }
  return row[b.size()];
}

}  // namespace sumtag
