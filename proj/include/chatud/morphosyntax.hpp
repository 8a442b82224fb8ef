#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "chatud/chat.hpp"
#include "chatud/conllu.hpp"
#include "chatud/diagnostics.hpp"

// UD analyses to CHAT %mor/%gra, with the token-level corrections applied
// before emission.
namespace chatud::morph {

using ud::ConlluSentence;
using ud::ConlluWord;
using ud::Feats;

// --- word tokenization -----------------------------------------------------

enum class BoundaryLabel { kBegin, kInside };

// "B I I B I" (whitespace-separated, case-insensitive). Throws Error{kBadLabel}.
std::vector<BoundaryLabel> parse_boundary_labels(std::string_view s);

// Throws Error{kLengthMismatch, kLeadingI}.
std::vector<std::string> decode_word_boundaries(
    const std::vector<std::string>& chars,
    const std::vector<BoundaryLabel>& labels);

// Rewrites the main line as the given tokens. Tokens that coincide with an
// existing token keep its annotations. Throws Error{kCoverageMismatch}.
Utterance retokenize_utterance(const Utterance& u,
                               const std::vector<std::string>& tokens);

// --- multiword tokens -----------------------------------------------------

struct MwtPiece {
  std::string form;
  std::string upos;    // empty: inherit from the unsplit word
  std::string deprel;  // empty: default for the expansion kind

  friend bool operator==(const MwtPiece&, const MwtPiece&) = default;
};

struct MwtLexicon {
  std::string language;  // canonical two-letter code
  std::map<std::string, std::vector<MwtPiece>> expansions;
  std::set<std::string> protections;
};

// "surface<TAB>w1 w2 ..." expansions (pieces may be "w/UPOS" or
// "w/UPOS/deprel"), "=surface" protections, a bare underscore form meaning
// "split on '_'", '#' comments. Throws Error{kBadLexicon}.
MwtLexicon parse_mwt_lexicon(std::string_view text, std::string language);
MwtLexicon load_mwt_lexicon(const std::filesystem::path& path,
                            std::string language);

// Orthographic contraction rules for fr, it and en.
std::optional<std::vector<std::string>> detect_rule_contractions(
    std::string_view form, std::string_view language);

// Merges split protected forms, then splits lexicon expansions and rule
// contractions the analysis left whole. Throws Error{kHeadRemapFailure}.
ConlluSentence apply_mwt_correction(const ConlluSentence& s,
                                    const MwtLexicon& lex);

// --- %mor ------------------------------------------------------------------

struct FeatureOptions {
  bool suppress_singular = false;  // drop bare "S"
};

std::vector<std::string> map_features(std::string_view upos, const Feats& feats,
                                      const FeatureOptions& opts = {},
                                      Diagnostics* diags = nullptr);

struct MorWord {
  std::string pos;
  std::string lemma;
  std::vector<std::string> tags;

  friend bool operator==(const MorWord&, const MorWord&) = default;
};

struct MorGroup {
  std::vector<MorWord> words;

  friend bool operator==(const MorGroup&, const MorGroup&) = default;
};

std::string render_mor_word(const MorWord& w);
std::string render_mor_group(const MorGroup& g);

// One group per surface unit (multiword span or lone word), standalone
// punctuation excluded.
std::vector<MorGroup> build_mor_groups(const ConlluSentence& s,
                                       const FeatureOptions& opts = {},
                                       Diagnostics* diags = nullptr);

// Throws Error{kAlignmentMismatch} when the group count differs from the
// number of %mor-eligible tokens of u.
std::string emit_mor(const ConlluSentence& s, const Utterance& u,
                     const FeatureOptions& opts = {},
                     Diagnostics* diags = nullptr);

// --- %gra and graphs -------------------------------------------------------

struct GraEntry {
  std::size_t index = 0;
  std::size_t head = 0;
  std::string relation;

  friend bool operator==(const GraEntry&, const GraEntry&) = default;
};

// Syntactic words without standalone punctuation, renumbered, plus the
// terminator attached to the root as PUNCT.
std::vector<GraEntry> build_gra(const ConlluSentence& s);
std::string emit_gra(const ConlluSentence& s);

// Node per emitted word plus the terminator; edge dependent -> head.
std::string export_dot(const ConlluSentence& s, std::string_view terminator = "");

// Rebuilds a labelled tree from existing %mor/%gra tiers (words labelled by
// lemma). Throws Error{kAlignmentMismatch}.
ConlluSentence sentence_from_tiers(std::string_view mor, std::string_view gra);

}  // namespace chatud::morph
