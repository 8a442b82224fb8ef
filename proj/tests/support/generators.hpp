#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "chatud/chat.hpp"
#include "chatud/kernels.hpp"

// Seeded random fixtures for property suites.
namespace gen {

using Rng = std::mt19937_64;

// CHAT text drawn from the supported subset: headers, fillers, omissions,
// replacements, compounds, retraces, repetition codes, pre/postcodes,
// bullets, dependent tiers and mid-file comments.
std::string random_chat_text(Rng& rng);

// Utterances the segmenter codec can represent: plain words, commas between
// words, terminators . ? !
std::vector<chatud::Utterance> random_segmentable(Rng& rng, const std::string& speaker);

std::vector<std::string> random_forms(Rng& rng, std::size_t max_len,
                                      std::size_t alphabet);

// Cells are multiples of 1/8 so path sums are exact.
chatud::AttentionMatrix random_matrix(Rng& rng, std::size_t rows, std::size_t cols);

// Lowercase words over a small vocabulary.
std::vector<std::string> random_sample(Rng& rng, std::size_t max_len);

}  // namespace gen
