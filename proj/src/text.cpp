#include "chatud/text.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <cstdint>
#include <utility>

namespace chatud::text {

std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    auto pos = s.find(sep, start);
    if (pos == std::string_view::npos) {
      out.emplace_back(s.substr(start));
      break;
    }
    out.emplace_back(s.substr(start, pos - start));
    start = pos + 1;
  }
  return out;
}

static bool is_ws(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' ||
         c == '\v';
}

std::vector<std::string> split_ws(std::string_view s) {
  std::vector<std::string> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && is_ws(s[i])) ++i;
    std::size_t j = i;
    while (j < s.size() && !is_ws(s[j])) ++j;
    if (j > i) out.emplace_back(s.substr(i, j - i));
    i = j;
  }
  return out;
}

std::string join(const std::vector<std::string>& parts, std::string_view sep) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) out.append(sep);
    out.append(parts[i]);
  }
  return out;
}

std::string_view trim(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && is_ws(s[b])) ++b;
  while (e > b && is_ws(s[e - 1])) --e;
  return s.substr(b, e - b);
}

std::string collapse_ws(std::string_view s) {
  return join(split_ws(s), " ");
}

bool starts_with(std::string_view s, std::string_view prefix) {
  return s.substr(0, prefix.size()) == prefix;
}

bool ends_with(std::string_view s, std::string_view suffix) {
  return s.size() >= suffix.size() &&
         s.substr(s.size() - suffix.size()) == suffix;
}

static std::size_t utf8_width(unsigned char lead) {
  if (lead < 0x80) return 1;
  if ((lead >> 5) == 0x6) return 2;
  if ((lead >> 4) == 0xE) return 3;
  if ((lead >> 3) == 0x1E) return 4;
  return 1;  // stray continuation byte, keep it on its own
}

std::vector<std::string> utf8_chars(std::string_view s) {
  std::vector<std::string> out;
  std::size_t i = 0;
  while (i < s.size()) {
    std::size_t w = std::min(utf8_width(static_cast<unsigned char>(s[i])),
                             s.size() - i);
    out.emplace_back(s.substr(i, w));
    i += w;
  }
  return out;
}

std::size_t utf8_length(std::string_view s) {
  std::size_t n = 0;
  for (unsigned char c : s) {
    if ((c & 0xC0) != 0x80) ++n;
  }
  return n;
}

std::string casefold(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    auto c = static_cast<unsigned char>(s[i]);
    if (c < 0x80) {
      out.push_back(static_cast<char>(std::tolower(c)));
      continue;
    }
    if (i + 1 < s.size()) {
      auto d = static_cast<unsigned char>(s[i + 1]);
      std::uint32_t cp = ((c & 0x1F) << 6) | (d & 0x3F);
      if (c >= 0xC2 && c <= 0xC5 && (d & 0xC0) == 0x80) {
        // U+00C0..U+00DE (except U+00D7) map +0x20; U+0100..U+017F pairs
        // alternate upper/lower on even/odd code points.
        if (cp >= 0xC0 && cp <= 0xDE && cp != 0xD7) {
          cp += 0x20;
        } else if (cp == 0x178) {
          cp = 0xFF;
        } else if (cp >= 0x100 && cp <= 0x17E && cp != 0x130 && cp != 0x138 &&
                   cp != 0x149) {
          bool odd_upper = (cp >= 0x139 && cp <= 0x148) ||
                           (cp >= 0x179 && cp <= 0x17E);
          if (odd_upper ? (cp % 2 == 1) : (cp % 2 == 0)) cp += 1;
        }
        out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
        ++i;
        continue;
      }
    }
    out.push_back(static_cast<char>(c));
  }
  return out;
}

std::string to_upper_ascii(std::string_view s) {
  std::string out(s);
  for (auto& c : out) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  return out;
}

std::string to_lower_ascii(std::string_view s) {
  std::string out(s);
  for (auto& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

// Typographic quotes and dashes that CHAT transcripts carry around words.
static constexpr std::array<std::string_view, 8> kUnicodePunct = {
    "‘", "’", "“", "”", "„", "…", "–",
    "—"};

static std::size_t punct_prefix(std::string_view s) {
  if (s.empty()) return 0;
  if (static_cast<unsigned char>(s[0]) < 0x80) {
    return std::ispunct(static_cast<unsigned char>(s[0])) ? 1 : 0;
  }
  for (auto p : kUnicodePunct) {
    if (starts_with(s, p)) return p.size();
  }
  return 0;
}

static std::size_t punct_suffix(std::string_view s) {
  if (s.empty()) return 0;
  if (static_cast<unsigned char>(s.back()) < 0x80) {
    return std::ispunct(static_cast<unsigned char>(s.back())) ? 1 : 0;
  }
  for (auto p : kUnicodePunct) {
    if (ends_with(s, p)) return p.size();
  }
  return 0;
}

std::string strip_punct(std::string_view s) {
  while (auto n = punct_prefix(s)) s.remove_prefix(n);
  while (auto n = punct_suffix(s)) s.remove_suffix(n);
  return std::string(s);
}

bool is_integer(std::string_view s) {
  if (s.empty()) return false;
  std::size_t i = (s[0] == '-' || s[0] == '+') ? 1 : 0;
  if (i == s.size()) return false;
  for (; i < s.size(); ++i) {
    if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
  }
  return true;
}

bool glob_match(std::string_view pattern, std::string_view s) {
  std::size_t p = 0, i = 0, star = std::string_view::npos, mark = 0;
  while (i < s.size()) {
    if (p < pattern.size() && (pattern[p] == '?' || pattern[p] == s[i])) {
      ++p;
      ++i;
    } else if (p < pattern.size() && pattern[p] == '*') {
      star = p++;
      mark = i;
    } else if (star != std::string_view::npos) {
      p = star + 1;
      i = ++mark;
    } else {
      return false;
    }
  }
  while (p < pattern.size() && pattern[p] == '*') ++p;
  return p == pattern.size();
}

std::string canonical_language(std::string_view code) {
  static constexpr std::array<std::pair<std::string_view, std::string_view>, 30>
      kMap = {{{"eng", "en"}, {"fra", "fr"}, {"fre", "fr"}, {"deu", "de"},
               {"ger", "de"}, {"spa", "es"}, {"ita", "it"}, {"por", "pt"},
               {"cat", "ca"}, {"nld", "nl"}, {"dut", "nl"}, {"jpn", "ja"},
               {"zho", "zh"}, {"chi", "zh"}, {"cmn", "zh"}, {"yue", "zh"},
               {"kor", "ko"}, {"dan", "da"}, {"swe", "sv"}, {"nor", "no"},
               {"pol", "pl"}, {"hrv", "hr"}, {"ces", "cs"}, {"est", "et"},
               {"isl", "is"}, {"gle", "ga"}, {"cym", "cy"}, {"tur", "tr"},
               {"afr", "af"}, {"slv", "sl"}}};
  std::string lower = to_lower_ascii(trim(code));
  for (const auto& [three, two] : kMap) {
    if (lower == three) return std::string(two);
  }
  return lower;
}

}  // namespace chatud::text
