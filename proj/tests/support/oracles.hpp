#pragma once

#include <cstddef>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "chatud/kernels.hpp"

// Brute-force references used to freeze and cross-check expected values.
namespace oracle {

// Minimum unit-cost edit distance found by enumerating every alignment.
std::size_t brute_alignment_cost(const std::vector<std::string>& gold,
                                 const std::vector<std::string>& silver);

// Number of alignments the enumeration visits (Delannoy number).
std::size_t alignment_count(std::size_t n, std::size_t m);

// Minimum cost over every monotone corner-to-corner path.
double brute_dtw_cost(const chatud::AttentionMatrix& cost);

// Direct median of a reflect-padded window, one cell at a time.
chatud::AttentionMatrix naive_median_filter(const chatud::AttentionMatrix& m, int kernel);

// Cell minus its row mean.
chatud::AttentionMatrix naive_mean_center(const chatud::AttentionMatrix& m);

struct DotGraph {
  bool ok = false;
  std::string error;
  std::map<std::string, std::string> node_labels;  // id -> label
  std::vector<std::pair<std::string, std::string>> edges;
  std::vector<std::string> edge_labels;
};

// Small recursive-descent checker for the DOT subset the exporter writes:
// digraph header, node/edge statements with quoted attribute values.
DotGraph parse_dot(std::string_view text);

// Types divided by tokens over each window, averaged, counted from scratch.
double naive_mattr(const std::vector<std::string>& sample, std::size_t window);

}  // namespace oracle
