#pragma once

#include <string>
#include <string_view>

namespace sumtag::unicode {

// Decodes UTF-8 into scalar values. Ill-formed sequences decode to U+FFFD.
std::u32string decode(std::string_view utf8);
std::string encode(std::u32string_view code_points);
std::string encode(char32_t code_point);

// Canonical composition (NFC).
std::string nfc(std::string_view utf8);

// Full lowercase mapping under the root locale.
std::string to_lower(std::string_view utf8);

// Simple (1:1) case folding; never changes the number of scalar values.
char32_t fold_case(char32_t c);

bool is_whitespace(char32_t c);
// General categories P* and S*.
bool is_punct_or_symbol(char32_t c);
// Han, Hiragana, Katakana, Hangul, Bopomofo.
bool is_cjk(char32_t c);
bool contains_cjk(std::string_view utf8);

bool is_valid_utf8(std::string_view utf8);

}  // namespace sumtag::unicode
