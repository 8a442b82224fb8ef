#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

// Ten-column CONLL-U reader and writer.
namespace chatud::ud {

using Feats = std::vector<std::pair<std::string, std::string>>;

struct ConlluWord {
  std::size_t id = 0;
  std::string form;
  std::string lemma;
  std::string upos;
  std::string xpos = "_";
  Feats feats;
  std::size_t head = 0;
  std::string deprel;
  std::string deps = "_";
  std::string misc = "_";

  friend bool operator==(const ConlluWord&, const ConlluWord&) = default;
};

// Word ids first..last (inclusive) written as one surface token.
struct MwtSpan {
  std::size_t first = 0;
  std::size_t last = 0;
  std::string surface;

  friend bool operator==(const MwtSpan&, const MwtSpan&) = default;
};

struct ConlluSentence {
  std::vector<std::string> comments;  // without the leading "# "
  std::vector<ConlluWord> words;
  std::vector<MwtSpan> mwt_spans;

  const ConlluWord& word(std::size_t id) const { return words.at(id - 1); }

  friend bool operator==(const ConlluSentence&, const ConlluSentence&) = default;
};

Feats parse_feats(std::string_view s);
std::string format_feats(const Feats& f);

// Throws Error{kBadColumnCount, kNonContiguousIds, kCyclicHeads, kBadHead}.
// Empty nodes (decimal ids) are skipped.
std::vector<ConlluSentence> parse_conllu(std::string_view text);
std::string serialize_conllu(const std::vector<ConlluSentence>& sentences);
std::string serialize_sentence(const ConlluSentence& s);

// Contiguous ids, heads in range, exactly one root, acyclic, spans in order.
void check_sentence(const ConlluSentence& s, std::size_t line = 0);

}  // namespace chatud::ud
