#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

namespace chatud {

enum class ErrorCode {
  // chat_model
  kMalformedHeader,
  kMalformedLine,
  kOrphanTier,
  kDuplicateTier,
  kBadTerminator,
  // normalize
  kBadLexicon,
  // segmenter
  kUnsupportedTerminator,
  kProviderLengthMismatch,
  kBadLabel,
  // aligner
  kNoAlignments,
  kBadKernel,
  kEmptyGroup,
  kBadMatrix,
  kBadBackplate,
  // morphosyntax
  kBadColumnCount,
  kNonContiguousIds,
  kCyclicHeads,
  kBadHead,
  kLengthMismatch,
  kLeadingI,
  kCoverageMismatch,
  kHeadRemapFailure,
  kAlignmentMismatch,
  // analysis
  kMissingTier,
  kNoUtterances,
  // io / cli
  kIo,
  kUsage,
};

std::string_view error_code_name(ErrorCode code);

// Every recoverable failure in the library is reported as an Error carrying
// one of the codes above. Line is 1-based when the error is tied to input.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message, std::size_t line = 0)
      : std::runtime_error(message), code_(code), line_(line) {}

  ErrorCode code() const noexcept { return code_; }
  std::size_t line() const noexcept { return line_; }

 private:
  ErrorCode code_;
  std::size_t line_;
};

}  // namespace chatud
