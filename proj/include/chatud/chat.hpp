#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "chatud/diagnostics.hpp"

// CHAT transcript document model: headers, main lines and dependent tiers.
namespace chatud {

// Control character that delimits CLAN time bullets.
inline constexpr char kBulletDelimiter = '\x15';

struct TimeInterval {
  std::int64_t start_ms = 0;
  std::int64_t end_ms = 0;

  friend bool operator==(const TimeInterval&, const TimeInterval&) = default;
};

// \x15start_end\x15
std::string format_bullet(const TimeInterval& t);
std::optional<TimeInterval> parse_bullet(std::string_view s);

struct Header {
  std::string name;                  // without the leading '@'
  std::optional<std::string> value;  // absent for @Begin, @End, @UTF8

  friend bool operator==(const Header&, const Header&) = default;
};

struct Participant {
  std::string code;
  std::string name;
  std::string role;
  std::string language;

  friend bool operator==(const Participant&, const Participant&) = default;
};

bool is_valid_speaker_code(std::string_view code);

enum class TokenClass {
  kWord,
  kFiller,          // &-um
  kRetraceMarked,   // in the scope of [/] or [//]
  kPunctuation,     // utterance-internal , ; : „ ‡
  kMarker,          // pauses, events, omitted words, linkers, xxx/yyy/www
};

std::string_view token_class_name(TokenClass c);

// Parenthesized letters elided in speech: singin(g) -> {6, "g"}.
struct Omission {
  std::size_t offset = 0;  // byte offset into spoken()
  std::string letters;

  friend bool operator==(const Omission&, const Omission&) = default;
};

// One whitespace-delimited word of a main line together with the CHAT
// annotations that attach to it.
//
// group_open counts the '<' scope brackets opening before the word. The
// trailing list holds, in order, every '>' closing bracket and every
// bracketed code that follows the word; a code that comes right after a '>'
// applies to the group that bracket closes. The `[: target]` replacement is
// lifted out of the trailing list into `replacement`.
struct MainToken {
  std::string surface;
  std::optional<std::string> replacement;
  std::vector<Omission> omitted_letters;
  std::vector<std::string> compound_parts;
  TokenClass cls = TokenClass::kWord;
  int group_open = 0;
  std::vector<std::string> trailing;

  // Builds a token from its written form, deriving omissions, compound parts
  // and the surface-level class. Retrace marking needs utterance context and
  // is applied by classify_tokens().
  static MainToken from_surface(std::string surface);

  // surface with parenthesized letters removed: singin(g) -> singin
  std::string spoken() const;
  // surface with parenthesized letters restored: singin(g) -> singing
  std::string full_form() const;
  // The form other tools analyze: the replacement when present, else the
  // full form; leading "&-" of fillers removed.
  std::string target_form() const;

  bool has_code(std::string_view code) const;

  friend bool operator==(const MainToken&, const MainToken&) = default;
};

// Recomputes cls for every token, including [/] / [//] retrace scopes.
void classify_tokens(std::vector<MainToken>& tokens);

// Main-line terminators this toolkit recognizes. The segmenter and the
// aligner only work with the three basic ones.
bool is_terminator(std::string_view s);
bool is_basic_terminator(std::string_view s);

struct Utterance {
  std::string speaker_code;
  std::vector<std::string> precodes;   // e.g. [- spa] before the first word
  std::vector<MainToken> tokens;
  std::string terminator;
  std::vector<std::string> postcodes;  // e.g. [+ bch] after the terminator
  std::optional<TimeInterval> time;
  std::vector<std::pair<std::string, std::string>> tiers;  // "%mor" -> text
  std::vector<Header> preceding_headers;  // mid-file @Comment lines etc.
  std::size_t line = 0;  // source line of the main line; not compared

  const std::string* tier(std::string_view name) const;
  void set_tier(std::string_view name, std::string content);
  bool erase_tier(std::string_view name);

  friend bool operator==(const Utterance& a, const Utterance& b);
};

// Tokens that receive a %mor group and count as words in analyses.
bool is_mor_eligible(const MainToken& t);
// Tokens expected to be audible in the media (words, fillers, retraces).
bool is_alignable(const MainToken& t);

struct Transcript {
  std::vector<Header> headers;
  std::vector<Utterance> utterances;
  std::vector<Header> trailing_headers;

  std::vector<Participant> participants() const;
  // First @Languages entry, canonicalized ("eng" -> "en"); empty if absent.
  std::string language() const;
  const Header* header(std::string_view name) const;

  friend bool operator==(const Transcript&, const Transcript&) = default;
};

// Throws Error{kMalformedHeader, kOrphanTier, kBadTerminator, ...}.
Transcript parse_chat(std::string_view text);

// Canonical output: LF line ends, tab after each line prefix, single spaces
// between items, logical lines wrapped at column 80.
std::string serialize_chat(const Transcript& t);

// Main-line body (tokens, terminator, postcodes, bullet) without "*SPK:\t".
std::string serialize_main_line(const Utterance& u);

// Parses a main-line fragment without terminator ("practor [: tractor]")
// into classified tokens.
std::vector<MainToken> parse_tokens(std::string_view fragment);
std::string serialize_tokens(const std::vector<MainToken>& tokens);

// Checks speaker codes, terminators, repetition codes, '+' compounds and
// %mor/%gra tier alignment against the main line.
Diagnostics validate(const Transcript& t);

}  // namespace chatud
