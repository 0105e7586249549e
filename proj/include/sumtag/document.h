#pragma once

#include <optional>
#include <string>
#include <string_view>

namespace sumtag {

enum class LanguageHint { kAuto, kEnglish, kChinese };

std::string_view to_string(LanguageHint hint);
// Accepts "auto", "en"/"english", "zh"/"chinese" (case-insensitive).
std::optional<LanguageHint> parse_language_hint(std::string_view text);

struct Document {
  std::string id;
  std::string body;
  LanguageHint language_hint = LanguageHint::kAuto;
  std::optional<std::string> source;
};

}  // namespace sumtag
