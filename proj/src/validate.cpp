#include <algorithm>
#include <set>

#include "chatud/chat.hpp"
#include "chatud/text.hpp"

namespace chatud {

namespace {

bool is_repetition_code(std::string_view code) {
  return text::starts_with(code, "[x ") && code.back() == ']';
}

bool has_bare_plus_compound(const MainToken& t) {
  if (t.cls != TokenClass::kWord && t.cls != TokenClass::kRetraceMarked) {
    return false;
  }
  auto pos = t.surface.find('+');
  return pos != std::string::npos && pos > 0 && pos + 1 < t.surface.size();
}

// Counts %mor groups and the syntactic words inside them.
std::pair<std::size_t, std::size_t> count_mor(const std::string& mor) {
  auto items = text::split_ws(mor);
  if (!items.empty() && is_terminator(items.back())) items.pop_back();
  std::size_t words = 0;
  for (const auto& g : items) words += text::split(g, '~').size();
  return {items.size(), words};
}

void check_tiers(const Utterance& u, std::string_view mor_name,
                 std::string_view gra_name, Diagnostics& out) {
  const std::string* mor = u.tier(mor_name);
  const std::string* gra = u.tier(gra_name);
  if (mor == nullptr) return;
  std::size_t eligible = static_cast<std::size_t>(
      std::count_if(u.tokens.begin(), u.tokens.end(), is_mor_eligible));
  auto [groups, words] = count_mor(*mor);
  if (groups != eligible) {
    out.push_back({"", u.line, "mor-alignment",
                   std::string(mor_name) + " has " + std::to_string(groups) +
                       " groups but the main line has " +
                       std::to_string(eligible) + " eligible words",
                   Severity::kWarning});
  }
  if (gra == nullptr) return;
  auto entries = text::split_ws(*gra);
  if (entries.size() != words + 1) {
    out.push_back({"", u.line, "gra-alignment",
                   std::string(gra_name) + " has " +
                       std::to_string(entries.size()) + " entries, expected " +
                       std::to_string(words + 1),
                   Severity::kWarning});
  }
  for (std::size_t i = 0; i < entries.size(); ++i) {
    auto f = text::split(entries[i], '|');
    bool ok = f.size() == 3 && text::is_integer(f[0]) &&
              text::is_integer(f[1]) && !f[2].empty();
    if (ok) {
      long idx = std::stol(f[0]), head = std::stol(f[1]);
      ok = idx == static_cast<long>(i + 1) && head >= 0 &&
           head <= static_cast<long>(entries.size());
    }
    if (!ok) {
      out.push_back({"", u.line, "gra-format",
                     "malformed " + std::string(gra_name) + " entry '" +
                         entries[i] + "'",
                     Severity::kWarning});
      break;
    }
  }
}

}  // namespace

Diagnostics validate(const Transcript& t) {
  Diagnostics out;
  std::set<std::string> codes;
  for (const auto& p : t.participants()) {
    if (!is_valid_speaker_code(p.code)) {
      out.push_back({"", 0, "bad-participant",
                     "participant code '" + p.code + "' is not 3 uppercase "
                     "alphanumerics", Severity::kWarning});
    }
    codes.insert(p.code);
  }
  for (const auto& u : t.utterances) {
    if (codes.count(u.speaker_code) == 0) {
      out.push_back({"", u.line, "unknown-speaker",
                     "speaker '" + u.speaker_code + "' is not a participant",
                     Severity::kWarning});
    }
    if (!is_terminator(u.terminator)) {
      out.push_back({"", u.line, "missing-terminator",
                     "utterance lacks a terminator", Severity::kWarning});
    }
    bool repetition = false, plus = false;
    for (const auto& tok : u.tokens) {
      repetition = repetition ||
                   std::any_of(tok.trailing.begin(), tok.trailing.end(),
                               is_repetition_code);
      plus = plus || has_bare_plus_compound(tok);
    }
    if (repetition) {
      out.push_back({"", u.line, "repetition-code", "repetition code present",
                     Severity::kWarning});
    }
    if (plus) {
      out.push_back({"", u.line, "plus-compound",
                     "compound marked with '+' instead of '_'",
                     Severity::kWarning});
    }
    check_tiers(u, "%mor", "%gra", out);
    check_tiers(u, "%umor", "%ugra", out);
  }
  return out;
}

}  // namespace chatud
