#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "chatud/chat.hpp"
#include "chatud/diagnostics.hpp"

// Token-label codec for utterance segmentation.
namespace chatud::seg {

enum class SegLabel : int {
  kMiddle = 0,
  kStart = 1,
  kEndDeclarative = 2,
  kEndInterrogative = 3,
  kEndExclamatory = 4,
  kCommaAfter = 5,
};

std::optional<SegLabel> label_from_int(int v);
bool is_end(SegLabel l);

struct LabeledStream {
  std::vector<std::string> tokens;
  std::vector<SegLabel> labels;

  friend bool operator==(const LabeledStream&, const LabeledStream&) = default;
};

// Lenient: a missing Start opens an utterance implicitly, a Start inside an
// open utterance closes it with ".", and a trailing open utterance also
// gets ".". A comma token follows every CommaAfter token.
std::vector<Utterance> decode_stream(const LabeledStream& s,
                                     std::string_view speaker_code);

// Commas are dropped and mark the preceding token CommaAfter, which takes
// precedence over Start; the last token always carries the End label.
// Throws Error{kUnsupportedTerminator} for terminators other than . ? !
LabeledStream encode_utterances(const std::vector<Utterance>& us);

// Length mismatch and Start-after-Start without an End.
Diagnostics validate_stream(const LabeledStream& s);

class LabelProvider {
 public:
  virtual ~LabelProvider() = default;
  virtual std::vector<SegLabel> labels(
      const std::vector<std::string>& tokens) const = 0;
};

// One integer label per line. Throws Error{kBadLabel}.
std::vector<SegLabel> parse_labels(std::string_view text);

class FileLabelProvider : public LabelProvider {
 public:
  explicit FileLabelProvider(std::filesystem::path path);
  std::vector<SegLabel> labels(
      const std::vector<std::string>& tokens) const override;

 private:
  std::filesystem::path path_;
};

// Throws Error{kProviderLengthMismatch}.
std::vector<Utterance> segment_with_provider(
    const std::vector<std::string>& tokens, const LabelProvider& provider,
    std::string_view speaker_code);

}  // namespace chatud::seg
