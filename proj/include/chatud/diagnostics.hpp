#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace chatud {

enum class Severity { kWarning, kError };

struct Diagnostic {
  std::string file;
  std::size_t line = 0;
  std::string code;
  std::string message;
  Severity severity = Severity::kWarning;

  friend bool operator==(const Diagnostic&, const Diagnostic&) = default;
};

using Diagnostics = std::vector<Diagnostic>;

// One tab-separated line: file, line, code, message.
std::string format_diagnostic(const Diagnostic& d);

inline void report(Diagnostics* sink, std::string code, std::string message,
                   std::size_t line = 0) {
  if (sink == nullptr) return;
  sink->push_back(Diagnostic{"", line, std::move(code), std::move(message),
                             Severity::kWarning});
}

}  // namespace chatud
