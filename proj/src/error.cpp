#include "chatud/diagnostics.hpp"
#include "chatud/error.hpp"

namespace chatud {

std::string_view error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::kMalformedHeader: return "MalformedHeader";
    case ErrorCode::kMalformedLine: return "MalformedLine";
    case ErrorCode::kOrphanTier: return "OrphanTier";
    case ErrorCode::kDuplicateTier: return "DuplicateTier";
    case ErrorCode::kBadTerminator: return "BadTerminator";
    case ErrorCode::kBadLexicon: return "BadLexicon";
    case ErrorCode::kUnsupportedTerminator: return "UnsupportedTerminator";
    case ErrorCode::kProviderLengthMismatch: return "ProviderLengthMismatch";
    case ErrorCode::kBadLabel: return "BadLabel";
    case ErrorCode::kNoAlignments: return "NoAlignments";
    case ErrorCode::kBadKernel: return "BadKernel";
    case ErrorCode::kEmptyGroup: return "EmptyGroup";
    case ErrorCode::kBadMatrix: return "BadMatrix";
    case ErrorCode::kBadBackplate: return "BadBackplate";
    case ErrorCode::kBadColumnCount: return "BadColumnCount";
    case ErrorCode::kNonContiguousIds: return "NonContiguousIds";
    case ErrorCode::kCyclicHeads: return "CyclicHeads";
    case ErrorCode::kBadHead: return "BadHead";
    case ErrorCode::kLengthMismatch: return "LengthMismatch";
    case ErrorCode::kLeadingI: return "LeadingI";
    case ErrorCode::kCoverageMismatch: return "CoverageMismatch";
    case ErrorCode::kHeadRemapFailure: return "HeadRemapFailure";
    case ErrorCode::kAlignmentMismatch: return "AlignmentMismatch";
    case ErrorCode::kMissingTier: return "MissingTier";
    case ErrorCode::kNoUtterances: return "NoUtterances";
    case ErrorCode::kIo: return "Io";
    case ErrorCode::kUsage: return "Usage";
  }
  return "Unknown";
}

std::string format_diagnostic(const Diagnostic& d) {
  std::string out = d.file;
  out += '\t';
  out += std::to_string(d.line);
  out += '\t';
  out += d.code;
  out += '\t';
  out += d.message;
  return out;
}

}  // namespace chatud
