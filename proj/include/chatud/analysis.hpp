#pragma once

#include <cstddef>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "chatud/chat.hpp"

// Language-sample measures and frequency counts.
namespace chatud::analysis {

inline constexpr std::size_t kDefaultMattrWindow = 100;

enum class FreqTier { kMain, kMor, kGra };
enum class FreqFacet { kWord, kLemma, kPos, kTag, kRelation };

struct FreqQuery {
  FreqTier tier = FreqTier::kMor;
  FreqFacet facet = FreqFacet::kLemma;
  std::optional<std::string> pattern;  // '*' and '?' wildcards
  std::set<std::string> speakers;      // empty: every speaker
};

// "tier:facet[:pattern]", e.g. "gra:relation:*COMP". Throws Error{kUsage}.
FreqQuery parse_freq_spec(std::string_view spec);

// Descending count, then term.
using FreqTable = std::vector<std::pair<std::string, std::size_t>>;

// Throws Error{kMissingTier} when no utterance carries the tier.
FreqTable freq(const Transcript& t, const FreqQuery& q);

struct MeasureReport {
  std::string speaker;
  std::size_t utterance_count = 0;
  std::size_t word_tokens = 0;
  std::size_t word_types = 0;
  double mlu_words = 0.0;
  double mlu_morphemes = 0.0;
  double ttr = 0.0;
  std::size_t ndw = 0;
  std::optional<double> mattr;
  bool lemma_based = false;  // types counted over %mor lemmas
};

double type_token_ratio(const std::vector<std::string>& sample);
// Mean TTR over every window of the given size; absent when the sample is
// shorter than the window.
std::optional<double> moving_average_ttr(const std::vector<std::string>& sample,
                                         std::size_t window);

// Throws Error{kNoUtterances}.
MeasureReport measures(const Transcript& t, std::string_view speaker,
                       std::size_t mattr_window = kDefaultMattrWindow);

std::string format_measures_tsv(const std::vector<MeasureReport>& reports);
std::string format_measures_json(const std::vector<MeasureReport>& reports);
std::string format_freq_tsv(const FreqTable& table);

}  // namespace chatud::analysis
