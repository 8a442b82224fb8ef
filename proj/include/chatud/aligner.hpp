#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "chatud/chat.hpp"
#include "chatud/diagnostics.hpp"
#include "chatud/kernels.hpp"

// Utterance timing from an ASR backplate, then word timing from
// cross-attention matrices.
namespace chatud::align {

inline constexpr std::int64_t kDefaultPadMs = 500;
inline constexpr int kDefaultKernel = 7;
inline constexpr std::int64_t kDefaultFrameMs = 20;

struct BackplateToken {
  std::string surface;
  std::int64_t start_ms = 0;
  std::int64_t end_ms = 0;

  friend bool operator==(const BackplateToken&, const BackplateToken&) = default;
};

struct Backplate {
  std::vector<BackplateToken> tokens;
};

// JSON array of {"surface", "start_ms", "end_ms"}. Throws Error{kBadBackplate}.
Backplate parse_backplate(std::string_view json);
Backplate load_backplate(const std::filesystem::path& path);
std::string serialize_backplate(const Backplate& b);

enum class OpKind { kMatch, kSubstitute, kDelete, kInsert };

struct AlignOp {
  OpKind kind;
  std::optional<std::size_t> gold_index;
  std::optional<std::size_t> backplate_index;

  friend bool operator==(const AlignOp&, const AlignOp&) = default;
};

// Minimum-cost edit script from gold to silver (unit costs). Ties prefer
// the diagonal, then Delete, then Insert.
std::vector<AlignOp> align_sequences(const std::vector<std::string>& gold,
                                     const std::vector<std::string>& silver);
std::size_t alignment_cost(const std::vector<AlignOp>& ops);

// Case-folded, outer punctuation stripped.
std::string comparable_form(std::string_view form);

// Aligns every alignable token of the transcript against the backplate in one
// pass and writes padded utterance bullets. Throws Error{kNoAlignments}.
Transcript recover_utterance_times(const Transcript& t, const Backplate& b,
                                   std::int64_t pad_ms = kDefaultPadMs);

using Path = std::vector<std::pair<std::size_t, std::size_t>>;

// Minimum-cost monotone path corner to corner. Ties prefer the diagonal, then
// the row advance, then the column advance.
Path dtw_path(const AttentionMatrix& cost);
double path_cost(const AttentionMatrix& cost, const Path& p);

struct TokenGroup {
  std::string form;
  std::size_t row_start = 0;
  std::size_t row_end = 0;  // exclusive
};

struct TokenGroupMap {
  std::vector<TokenGroup> groups;
};

// "rows cols" then rows lines of cols reals. Throws Error{kBadMatrix}.
AttentionMatrix parse_attention(std::string_view text);
AttentionMatrix load_attention(const std::filesystem::path& path);
std::string serialize_attention(const AttentionMatrix& m);

// JSON array of {"form", "row_start", "row_end_exclusive"}. Throws
// Error{kBadMatrix} when ranges overlap or run backwards.
TokenGroupMap parse_token_groups(std::string_view json);
TokenGroupMap load_token_groups(const std::filesystem::path& path);

struct WordTiming {
  std::string form;
  TimeInterval interval;

  friend bool operator==(const WordTiming&, const WordTiming&) = default;
};

// mean_center -> median filter -> negate -> dtw_path; frames per form read
// off the path. Throws Error{kEmptyGroup, kLengthMismatch, kBadMatrix}.
std::vector<WordTiming> align_words(const std::vector<std::string>& forms,
                                    const AttentionMatrix& m,
                                    const TokenGroupMap& g,
                                    std::int64_t frame_ms = kDefaultFrameMs,
                                    std::int64_t utt_start_ms = 0,
                                    int kernel = kDefaultKernel);

struct UtteranceAttention {
  AttentionMatrix matrix;
  TokenGroupMap groups;
};

struct WordPassOptions {
  int kernel = kDefaultKernel;
  std::int64_t frame_ms = kDefaultFrameMs;
  bool tighten = true;  // shrink the utterance bullet to its word span
};

// attention[i] belongs to utterance i; utterances without one are left
// alone. Utterances are processed in parallel. Per-utterance failures become
// diagnostics.
Transcript recover_word_times(
    const Transcript& t,
    const std::vector<std::optional<UtteranceAttention>>& attention,
    const WordPassOptions& opts, Diagnostics* diags = nullptr);

// "form \x15s_e\x15 form \x15s_e\x15 ... ."
std::string format_wor_tier(const std::vector<WordTiming>& words,
                            std::string_view terminator);

}  // namespace chatud::align
