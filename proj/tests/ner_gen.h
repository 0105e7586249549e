#pragma once

#include <random>
#include <string>
#include <vector>

#include "sumtag/ner.h"
#include "sumtag/unicode.h"
#include "test_util.h"

namespace testutil {

// Random text over an alphabet that stresses the bracketed format: brackets,
// slashes, whitespace, ASCII and full-width punctuation, CJK and marker-like
// fragments. Spans are random, non-empty and non-overlapping.
inline sumtag::TaggedText random_tagged_text(std::mt19937& rng) {
  static const std::vector<std::string> pieces = {
      "a",  "b",  "Z", " ",  "  ", "\t", "\n", "[",  "]",  "/", "[/]", "[[",
      ".",  ",",  "，", "。", "、", "“",  "”",  "新", "算", "法", "澳", "大",
      "[LOCATION] ", "[BOGUS]", "x"};
  std::string text;
  const std::size_t n = uniform(rng, 0, 30);
  for (std::size_t i = 0; i < n; ++i) text += pieces[uniform(rng, 0, pieces.size() - 1)];
  const std::size_t len = sumtag::unicode::decode(text).size();

  std::vector<sumtag::EntitySpan> spans;
  std::size_t pos = 0;
  while (pos < len) {
    if (uniform(rng, 0, 3) == 0) {
      const std::size_t end = std::min(len, pos + uniform(rng, 1, 6));
      const auto label = sumtag::kAllLabels[uniform(rng, 0, 5)];
      spans.push_back({pos, end, label, {}});
      pos = end + uniform(rng, 0, 2);
    } else {
      ++pos;
    }
  }
  return sumtag::make_tagged_text(std::move(text), std::move(spans));
}

}  // namespace testutil
