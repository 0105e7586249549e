#include "sumtag/document.h"

#include <algorithm>
#include <cctype>

namespace sumtag {

std::string_view to_string(LanguageHint hint) {
  switch (hint) {
    case LanguageHint::kEnglish:
      return "en";
    case LanguageHint::kChinese:
      return "zh";
    case LanguageHint::kAuto:
      break;
  }
  return "auto";
}

std::optional<LanguageHint> parse_language_hint(std::string_view text) {
  std::string lower(text);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  if (lower == "auto" || lower.empty()) return LanguageHint::kAuto;
  if (lower == "en" || lower == "english") return LanguageHint::kEnglish;
  if (lower == "zh" || lower == "chinese") return LanguageHint::kChinese;
  return std::nullopt;
}

}  // namespace sumtag
