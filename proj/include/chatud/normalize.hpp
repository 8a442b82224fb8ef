#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "chatud/chat.hpp"
#include "chatud/diagnostics.hpp"

// Deterministic transcript repairs applied before morphosyntactic tagging.
namespace chatud::normalize {

enum class RepairKind { kRepetition, kEyeDialect, kCliticSpacing, kLiteralReplace };

std::string_view repair_kind_name(RepairKind k);

// Patterns and replacements are main-line fragments. A single '*' in a
// pattern captures a stem ("*in'") or, for clitic spacing, a whole token
// ("j' *"); a '*' in the replacement is filled with the capture.
struct RepairRule {
  RepairKind kind;
  std::string pattern;
  std::string replacement;
};

struct RepairLexicon {
  std::string language;
  std::vector<RepairRule> rules;
};

// "kind<TAB>pattern<TAB>replacement" lines, '#' comments. Throws
// Error{kBadLexicon} on malformed lines or duplicate (kind, pattern).
RepairLexicon parse_repair_lexicon(std::string_view text, std::string language);
RepairLexicon load_repair_lexicon(const std::filesystem::path& path,
                                  std::string language);

// w [x N] -> N copies of w; <a b> [x N] -> N copies of the phrase.
// Counts below 2 or non-integers are reported and left in place.
Utterance expand_repetitions(const Utterance& u, Diagnostics* diags = nullptr);

// Eye-dialect, literal and fused-repetition rules, longest pattern first.
Utterance apply_lexicon(const Utterance& u, const RepairLexicon& lex);

// Clitic-spacing rules over adjacent tokens ("j' ai" -> "j'ai").
Utterance fix_clitic_spacing(const Utterance& u, const RepairLexicon& lex);

// Repetition expansion, then clitic spacing, then the lexicon rules, over
// every utterance.
Transcript normalize_transcript(const Transcript& t, const RepairLexicon& lex,
                                Diagnostics* diags = nullptr);

}  // namespace chatud::normalize
