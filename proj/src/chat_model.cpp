#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>

#include "chatud/chat.hpp"
#include "chatud/error.hpp"
#include "chatud/text.hpp"

namespace chatud {

namespace {

constexpr std::size_t kWrapColumn = 80;
constexpr std::size_t kTabStop = 8;

constexpr std::array<std::string_view, 13> kTerminators = {
    ".", "?", "!", "+...", "+..?", "+!?", "+/.", "+/?", "+//.", "+//?",
    "+\"/.", "+\".", "+."};

constexpr std::array<std::string_view, 5> kRetraceCodes = {"[/]", "[//]",
                                                           "[///]", "[/-]",
                                                           "[/?]"};

bool is_pause(std::string_view s) {
  if (s.size() < 3 || s.front() != '(' || s.back() != ')') return false;
  auto inner = s.substr(1, s.size() - 2);
  return std::all_of(inner.begin(), inner.end(), [](char c) {
    return c == '.' || c == ':' || std::isdigit(static_cast<unsigned char>(c));
  });
}

TokenClass surface_class(std::string_view s) {
  if (text::starts_with(s, "&-")) return TokenClass::kFiller;
  if (s == "," || s == ";" || s == ":" || s == "„" || s == "‡") {
    return TokenClass::kPunctuation;
  }
  if (s.front() == '&' || s.front() == '+' || s.front() == '#' ||
      s.front() == kBulletDelimiter) {
    return TokenClass::kMarker;
  }
  if (s.front() == '0') return TokenClass::kMarker;
  if (is_pause(s)) return TokenClass::kMarker;
  if (s == "xxx" || s == "yyy" || s == "www" || s == "xx" || s == "yy") {
    return TokenClass::kMarker;
  }
  return TokenClass::kWord;
}

std::size_t display_width(std::string_view s, std::size_t col) {
  for (auto& ch : text::utf8_chars(s)) {
    if (ch == "\t") {
      col = (col / kTabStop + 1) * kTabStop;
    } else {
      ++col;
    }
  }
  return col;
}

// Splits a logical line on spaces, keeping bracketed codes whole.
std::vector<std::string> wrap_units(std::string_view content) {
  std::vector<std::string> units;
  std::string cur;
  int depth = 0;
  for (char c : content) {
    if (c == '[') ++depth;
    if (c == ']' && depth > 0) --depth;
    if (c == ' ' && depth == 0) {
      if (!cur.empty()) units.push_back(std::move(cur));
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  if (!cur.empty()) units.push_back(std::move(cur));
  return units;
}

void append_wrapped(std::string& out, std::string_view prefix,
                    std::string_view content) {
  out.append(prefix);
  std::size_t col = display_width(prefix, 0);
  bool first = true;
  for (const auto& unit : wrap_units(content)) {
    std::size_t w = text::utf8_length(unit);
    if (!first && col + 1 + w > kWrapColumn) {
      out += "\n\t";
      col = kTabStop;
    } else if (!first) {
      out += ' ';
      ++col;
    }
    out += unit;
    col += w;
    first = false;
  }
  out += '\n';
}

struct LogicalLine {
  std::string text;
  std::size_t number;
};

std::vector<LogicalLine> fold_lines(std::string_view input) {
  if (text::starts_with(input, "\xEF\xBB\xBF")) input.remove_prefix(3);
  std::vector<LogicalLine> lines;
  std::size_t number = 0;
  std::size_t pos = 0;
  while (pos <= input.size()) {
    auto nl = input.find('\n', pos);
    std::string_view raw = input.substr(
        pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    ++number;
    if (!raw.empty() && raw.back() == '\r') raw.remove_suffix(1);
    if (!raw.empty() && (raw.front() == '\t' || raw.front() == ' ') &&
        !lines.empty()) {
      lines.back().text += ' ';
      lines.back().text += raw;
    } else if (!text::trim(raw).empty()) {
      lines.push_back({std::string(raw), number});
    }
    if (nl == std::string_view::npos) break;
    pos = nl + 1;
  }
  return lines;
}

enum class ItemKind { kWord, kCode, kOpen, kClose, kBullet };

struct Item {
  ItemKind kind;
  std::string text;
};

std::vector<Item> scan_main_line(std::string_view body, std::size_t line) {
  std::vector<Item> items;
  std::size_t i = 0;
  auto push_closes = [&](std::size_t& k) {
    while (k < body.size() && body[k] == '>') {
      items.push_back({ItemKind::kClose, ">"});
      ++k;
    }
  };
  while (i < body.size()) {
    char c = body[i];
    if (c == ' ' || c == '\t') {
      ++i;
      continue;
    }
    if (c == '[') {
      auto close = body.find(']', i);
      if (close == std::string_view::npos) {
        throw Error(ErrorCode::kMalformedLine, "unterminated '[' code", line);
      }
      std::string inner = text::collapse_ws(body.substr(i + 1, close - i - 1));
      items.push_back({ItemKind::kCode, "[" + inner + "]"});
      i = close + 1;
      push_closes(i);
      continue;
    }
    if (c == kBulletDelimiter) {
      auto close = body.find(kBulletDelimiter, i + 1);
      if (close == std::string_view::npos) {
        throw Error(ErrorCode::kMalformedLine, "unterminated time bullet", line);
      }
      items.push_back(
          {ItemKind::kBullet, std::string(body.substr(i, close - i + 1))});
      i = close + 1;
      continue;
    }
    if (c == '<') {
      items.push_back({ItemKind::kOpen, "<"});
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j < body.size() && body[j] != ' ' && body[j] != '\t' &&
           body[j] != kBulletDelimiter) {
      ++j;
    }
    std::size_t word_end = j;
    while (word_end > i && body[word_end - 1] == '>') --word_end;
    if (word_end > i) {
      items.push_back(
          {ItemKind::kWord, std::string(body.substr(i, word_end - i))});
    }
    for (std::size_t k = word_end; k < j; ++k) {
      items.push_back({ItemKind::kClose, ">"});
    }
    i = j;
  }
  return items;
}

Utterance parse_main_line(std::string_view speaker, std::string_view body,
                          std::size_t line) {
  Utterance u;
  u.speaker_code = std::string(speaker);
  u.line = line;
  auto items = scan_main_line(body, line);

  std::size_t term = items.size();
  for (std::size_t k = items.size(); k-- > 0;) {
    if (items[k].kind == ItemKind::kWord) {
      term = k;
      break;
    }
  }
  if (term == items.size() || !is_terminator(items[term].text)) {
    throw Error(ErrorCode::kBadTerminator,
                "main line lacks a recognized terminator", line);
  }
  u.terminator = items[term].text;
  for (std::size_t k = term + 1; k < items.size(); ++k) {
    const auto& it = items[k];
    if (it.kind == ItemKind::kCode) {
      u.postcodes.push_back(it.text);
    } else if (it.kind == ItemKind::kBullet && !u.time) {
      auto t = parse_bullet(it.text);
      if (!t) throw Error(ErrorCode::kMalformedLine, "bad time bullet", line);
      u.time = *t;
    } else {
      throw Error(ErrorCode::kBadTerminator,
                  "unexpected material after the terminator", line);
    }
  }

  int pending_open = 0;
  for (std::size_t k = 0; k < term; ++k) {
    const auto& it = items[k];
    switch (it.kind) {
      case ItemKind::kOpen:
        ++pending_open;
        break;
      case ItemKind::kWord:
      case ItemKind::kBullet: {
        auto tok = MainToken::from_surface(it.text);
        tok.group_open = pending_open;
        pending_open = 0;
        u.tokens.push_back(std::move(tok));
        break;
      }
      case ItemKind::kCode: {
        if (pending_open > 0) {
          throw Error(ErrorCode::kMalformedLine, "code inside empty group",
                      line);
        }
        if (u.tokens.empty()) {
          u.precodes.push_back(it.text);
          break;
        }
        auto& last = u.tokens.back();
        bool closed = std::find(last.trailing.begin(), last.trailing.end(),
                                ">") != last.trailing.end();
        if (text::starts_with(it.text, "[: ") && !closed && !last.replacement) {
          last.replacement = it.text.substr(3, it.text.size() - 4);
        } else {
          last.trailing.push_back(it.text);
        }
        break;
      }
      case ItemKind::kClose:
        if (u.tokens.empty()) {
          throw Error(ErrorCode::kMalformedLine, "'>' before any word", line);
        }
        u.tokens.back().trailing.push_back(">");
        break;
    }
  }
  if (pending_open > 0) {
    throw Error(ErrorCode::kMalformedLine, "unbalanced '<'", line);
  }
  classify_tokens(u.tokens);
  return u;
}

std::vector<Participant> parse_participants(std::string_view value) {
  std::vector<Participant> out;
  for (const auto& entry : text::split(value, ',')) {
    auto words = text::split_ws(entry);
    if (words.empty()) continue;
    Participant p;
    p.code = words.front();
    if (words.size() >= 2) p.role = words.back();
    if (words.size() >= 3) {
      p.name = text::join({words.begin() + 1, words.end() - 1}, " ");
    }
    out.push_back(std::move(p));
  }
  return out;
}

}  // namespace

std::string format_bullet(const TimeInterval& t) {
  std::string out(1, kBulletDelimiter);
  out += std::to_string(t.start_ms);
  out += '_';
  out += std::to_string(t.end_ms);
  out += kBulletDelimiter;
  return out;
}

std::optional<TimeInterval> parse_bullet(std::string_view s) {
  if (s.size() < 5 || s.front() != kBulletDelimiter ||
      s.back() != kBulletDelimiter) {
    return std::nullopt;
  }
  auto inner = s.substr(1, s.size() - 2);
  auto us = inner.find('_');
  if (us == std::string_view::npos) return std::nullopt;
  TimeInterval t;
  auto a = inner.substr(0, us), b = inner.substr(us + 1);
  auto r1 = std::from_chars(a.data(), a.data() + a.size(), t.start_ms);
  auto r2 = std::from_chars(b.data(), b.data() + b.size(), t.end_ms);
  if (r1.ec != std::errc{} || r1.ptr != a.data() + a.size() ||
      r2.ec != std::errc{} || r2.ptr != b.data() + b.size()) {
    return std::nullopt;
  }
  if (t.start_ms < 0 || t.start_ms > t.end_ms) return std::nullopt;
  return t;
}

bool is_valid_speaker_code(std::string_view code) {
  return code.size() == 3 && std::all_of(code.begin(), code.end(), [](char c) {
           return std::isupper(static_cast<unsigned char>(c)) ||
                  std::isdigit(static_cast<unsigned char>(c));
         });
}

std::string_view token_class_name(TokenClass c) {
  switch (c) {
    case TokenClass::kWord: return "word";
    case TokenClass::kFiller: return "filler";
    case TokenClass::kRetraceMarked: return "retrace-marked";
    case TokenClass::kPunctuation: return "punctuation-internal";
    case TokenClass::kMarker: return "marker";
  }
  return "word";
}

MainToken MainToken::from_surface(std::string surface) {
  MainToken t;
  t.surface = std::move(surface);
  t.cls = surface_class(t.surface);
  if (t.cls == TokenClass::kWord || t.cls == TokenClass::kFiller) {
    std::size_t spoken_len = 0;
    for (std::size_t i = 0; i < t.surface.size(); ++i) {
      if (t.surface[i] == '(') {
        auto close = t.surface.find(')', i);
        if (close != std::string::npos && close > i + 1) {
          t.omitted_letters.push_back(
              {spoken_len, t.surface.substr(i + 1, close - i - 1)});
          i = close;
          continue;
        }
      }
      ++spoken_len;
    }
  }
  t.compound_parts = text::split(t.surface, '_');
  return t;
}

std::string MainToken::spoken() const {
  if (omitted_letters.empty()) return surface;
  std::string out;
  for (std::size_t i = 0; i < surface.size(); ++i) {
    if (surface[i] == '(') {
      auto close = surface.find(')', i);
      if (close != std::string::npos && close > i + 1) {
        i = close;
        continue;
      }
    }
    out += surface[i];
  }
  return out;
}

std::string MainToken::full_form() const {
  if (omitted_letters.empty()) return surface;
  std::string out;
  for (char c : surface) {
    if (c != '(' && c != ')') out += c;
  }
  return out;
}

std::string MainToken::target_form() const {
  if (replacement) return *replacement;
  std::string f = full_form();
  if (cls == TokenClass::kFiller && text::starts_with(f, "&-")) {
    f.erase(0, 2);
  }
  return f;
}

bool MainToken::has_code(std::string_view code) const {
  return std::find(trailing.begin(), trailing.end(), code) != trailing.end();
}

void classify_tokens(std::vector<MainToken>& tokens) {
  std::vector<bool> retraced(tokens.size(), false);
  std::vector<std::size_t> open;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    auto& tok = tokens[i];
    tok.cls = surface_class(tok.surface);
    for (int k = 0; k < tok.group_open; ++k) open.push_back(i);
    std::size_t scope_begin = i;
    for (const auto& item : tok.trailing) {
      if (item == ">") {
        if (!open.empty()) {
          scope_begin = open.back();
          open.pop_back();
        }
        continue;
      }
      if (std::find(kRetraceCodes.begin(), kRetraceCodes.end(), item) !=
          kRetraceCodes.end()) {
        for (std::size_t j = scope_begin; j <= i; ++j) retraced[j] = true;
      }
    }
  }
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (retraced[i] && tokens[i].cls == TokenClass::kWord) {
      tokens[i].cls = TokenClass::kRetraceMarked;
    }
  }
}

bool is_terminator(std::string_view s) {
  return std::find(kTerminators.begin(), kTerminators.end(), s) !=
         kTerminators.end();
}

bool is_basic_terminator(std::string_view s) {
  return s == "." || s == "?" || s == "!";
}

const std::string* Utterance::tier(std::string_view name) const {
  for (const auto& [n, content] : tiers) {
    if (n == name) return &content;
  }
  return nullptr;
}

void Utterance::set_tier(std::string_view name, std::string content) {
  for (auto& [n, c] : tiers) {
    if (n == name) {
      c = std::move(content);
      return;
    }
  }
  tiers.emplace_back(std::string(name), std::move(content));
}

bool Utterance::erase_tier(std::string_view name) {
  auto it = std::find_if(tiers.begin(), tiers.end(),
                         [&](const auto& p) { return p.first == name; });
  if (it == tiers.end()) return false;
  tiers.erase(it);
  return true;
}

bool operator==(const Utterance& a, const Utterance& b) {
  return a.speaker_code == b.speaker_code && a.precodes == b.precodes &&
         a.tokens == b.tokens && a.terminator == b.terminator &&
         a.postcodes == b.postcodes && a.time == b.time &&
         a.tiers == b.tiers && a.preceding_headers == b.preceding_headers;
}

bool is_mor_eligible(const MainToken& t) { return t.cls == TokenClass::kWord; }

bool is_alignable(const MainToken& t) {
  return t.cls == TokenClass::kWord || t.cls == TokenClass::kFiller ||
         t.cls == TokenClass::kRetraceMarked;
}

const Header* Transcript::header(std::string_view name) const {
  for (const auto& h : headers) {
    if (h.name == name) return &h;
  }
  return nullptr;
}

std::vector<Participant> Transcript::participants() const {
  std::vector<Participant> out;
  std::string default_language;
  if (const auto* langs = header("Languages"); langs && langs->value) {
    auto parts = text::split_ws(*langs->value);
    if (!parts.empty()) default_language = text::strip_punct(parts.front());
  }
  for (const auto& h : headers) {
    if (h.name == "Participants" && h.value) {
      for (auto& p : parse_participants(*h.value)) {
        p.language = default_language;
        out.push_back(std::move(p));
      }
    }
  }
  for (const auto& h : headers) {
    if (h.name != "ID" || !h.value) continue;
    auto fields = text::split(*h.value, '|');
    if (fields.size() < 3) continue;
    for (auto& p : out) {
      if (p.code == text::trim(fields[2]) && !text::trim(fields[0]).empty()) {
        p.language = std::string(text::trim(fields[0]));
      }
    }
  }
  return out;
}

std::string Transcript::language() const {
  if (const auto* langs = header("Languages"); langs && langs->value) {
    auto parts = text::split_ws(*langs->value);
    if (!parts.empty()) {
      return text::canonical_language(text::strip_punct(parts.front()));
    }
  }
  return "";
}

Transcript parse_chat(std::string_view input) {
  Transcript t;
  std::vector<Header> pending;
  bool seen_begin = false;

  for (const auto& line : fold_lines(input)) {
    const std::string& s = line.text;
    switch (s.front()) {
      case '@': {
        Header h;
        auto colon = s.find(':');
        if (colon == std::string::npos) {
          h.name = std::string(text::trim(std::string_view(s).substr(1)));
        } else {
          h.name = std::string(text::trim(std::string_view(s).substr(1, colon - 1)));
          h.value = text::collapse_ws(std::string_view(s).substr(colon + 1));
        }
        if (h.name.empty()) {
          throw Error(ErrorCode::kMalformedHeader, "empty header name",
                      line.number);
        }
        if (h.name == "Begin") seen_begin = true;
        if (t.utterances.empty()) {
          t.headers.push_back(std::move(h));
        } else {
          pending.push_back(std::move(h));
        }
        break;
      }
      case '*': {
        auto colon = s.find(':');
        if (colon == std::string::npos || colon < 2) {
          throw Error(ErrorCode::kMalformedLine, "main line without speaker",
                      line.number);
        }
        auto utt = parse_main_line(std::string_view(s).substr(1, colon - 1),
                                   std::string_view(s).substr(colon + 1),
                                   line.number);
        utt.preceding_headers = std::move(pending);
        pending.clear();
        t.utterances.push_back(std::move(utt));
        break;
      }
      case '%': {
        if (t.utterances.empty()) {
          throw Error(ErrorCode::kOrphanTier,
                      "dependent tier before any main line", line.number);
        }
        auto colon = s.find(':');
        if (colon == std::string::npos || colon < 2) {
          throw Error(ErrorCode::kMalformedLine, "dependent tier without name",
                      line.number);
        }
        std::string name = s.substr(0, colon);
        auto& utt = t.utterances.back();
        if (utt.tier(name) != nullptr) {
          throw Error(ErrorCode::kDuplicateTier, "duplicate tier " + name,
                      line.number);
        }
        utt.tiers.emplace_back(
            name, text::collapse_ws(std::string_view(s).substr(colon + 1)));
        break;
      }
      default:
        throw Error(ErrorCode::kMalformedLine, "unrecognized line",
                    line.number);
    }
  }
  t.trailing_headers = std::move(pending);

  if (!seen_begin) {
    throw Error(ErrorCode::kMalformedHeader, "missing @Begin header");
  }
  const Header* parts = t.header("Participants");
  if (parts == nullptr || !parts->value) {
    throw Error(ErrorCode::kMalformedHeader, "missing @Participants header");
  }
  auto participants = t.participants();
  if (participants.empty()) {
    throw Error(ErrorCode::kMalformedHeader, "empty @Participants header");
  }
  for (const auto& p : participants) {
    if (!is_valid_speaker_code(p.code) || p.role.empty()) {
      throw Error(ErrorCode::kMalformedHeader,
                  "bad participant entry '" + p.code + "'");
    }
  }
  return t;
}

static void append_header(std::string& out, const Header& h) {
  if (!h.value) {
    out += '@';
    out += h.name;
    out += '\n';
    return;
  }
  append_wrapped(out, "@" + h.name + ":\t", *h.value);
}

static std::string serialize_token(const MainToken& tok) {
  std::string out(static_cast<std::size_t>(tok.group_open), '<');
  out += tok.surface;
  if (tok.replacement) {
    out += " [: ";
    out += *tok.replacement;
    out += ']';
  }
  for (const auto& item : tok.trailing) {
    if (item == ">") {
      out += '>';
    } else {
      out += ' ';
      out += item;
    }
  }
  return out;
}

std::string serialize_main_line(const Utterance& u) {
  std::vector<std::string> parts;
  for (const auto& c : u.precodes) parts.push_back(c);
  for (const auto& tok : u.tokens) parts.push_back(serialize_token(tok));
  parts.push_back(u.terminator);
  for (const auto& c : u.postcodes) parts.push_back(c);
  if (u.time) parts.push_back(format_bullet(*u.time));
  return text::join(parts, " ");
}

std::vector<MainToken> parse_tokens(std::string_view fragment) {
  std::string body(fragment);
  body += " .";
  return parse_main_line("TOK", body, 0).tokens;
}

std::string serialize_tokens(const std::vector<MainToken>& tokens) {
  std::vector<std::string> parts;
  for (const auto& tok : tokens) parts.push_back(serialize_token(tok));
  return text::join(parts, " ");
}

std::string serialize_chat(const Transcript& t) {
  std::string out;
  for (const auto& h : t.headers) append_header(out, h);
  for (const auto& u : t.utterances) {
    for (const auto& h : u.preceding_headers) append_header(out, h);
    append_wrapped(out, "*" + u.speaker_code + ":\t", serialize_main_line(u));
    for (const auto& [name, content] : u.tiers) {
      append_wrapped(out, name + ":\t", content);
    }
  }
  for (const auto& h : t.trailing_headers) append_header(out, h);
  return out;
}

}  // namespace chatud
