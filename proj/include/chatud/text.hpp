#pragma once

#include <string>
#include <string_view>
#include <vector>

// Small UTF-8 and string helpers shared by the parsers.
namespace chatud::text {

std::vector<std::string> split(std::string_view s, char sep);
// Splits on runs of ASCII whitespace; no empty pieces.
std::vector<std::string> split_ws(std::string_view s);
std::string join(const std::vector<std::string>& parts, std::string_view sep);
std::string_view trim(std::string_view s);
// Collapses every run of spaces/tabs to one space and trims.
std::string collapse_ws(std::string_view s);

bool starts_with(std::string_view s, std::string_view prefix);
bool ends_with(std::string_view s, std::string_view suffix);

// Code points as individual UTF-8 strings.
std::vector<std::string> utf8_chars(std::string_view s);
std::size_t utf8_length(std::string_view s);

// Lowercases ASCII and the Latin-1 supplement / Latin Extended-A letters.
std::string casefold(std::string_view s);
std::string to_upper_ascii(std::string_view s);
std::string to_lower_ascii(std::string_view s);

// Strips leading and trailing ASCII punctuation plus typographic quotes.
std::string strip_punct(std::string_view s);

bool is_integer(std::string_view s);

// Shell-style glob with '*' and '?'.
bool glob_match(std::string_view pattern, std::string_view s);

// Maps ISO 639-3 / 639-1 codes onto the 639-1 form when known
// ("eng" -> "en"); unknown codes are returned lowercased.
std::string canonical_language(std::string_view code);

}  // namespace chatud::text
