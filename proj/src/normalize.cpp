#include "chatud/normalize.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include "chatud/error.hpp"
#include "chatud/text.hpp"

namespace chatud::normalize {

namespace {

bool is_repetition_code(std::string_view code) {
  return text::starts_with(code, "[x ") && code.back() == ']';
}

// Returns the count for a well-formed "[x N]" with N >= 2.
std::optional<int> repetition_count(std::string_view code) {
  auto inner = text::trim(code.substr(3, code.size() - 4));
  if (!text::is_integer(inner) || inner.size() > 6) return std::nullopt;
  int n = std::stoi(std::string(inner));
  if (n < 2) return std::nullopt;
  return n;
}

std::optional<RepairKind> parse_kind(std::string_view s) {
  if (s == "repetition") return RepairKind::kRepetition;
  if (s == "eye_dialect") return RepairKind::kEyeDialect;
  if (s == "clitic_spacing") return RepairKind::kCliticSpacing;
  if (s == "literal_replace") return RepairKind::kLiteralReplace;
  return std::nullopt;
}

// Number of literal (non-wildcard) bytes in a pattern, used for ranking.
std::size_t literal_weight(std::string_view pattern) {
  return static_cast<std::size_t>(
      std::count_if(pattern.begin(), pattern.end(),
                    [](char c) { return c != '*' && c != ' '; }));
}

// Matches a single-token pattern with at most one '*'. Returns the capture.
std::optional<std::string> match_form(std::string_view pattern,
                                      std::string_view form) {
  auto star = pattern.find('*');
  if (star == std::string_view::npos) {
    if (pattern == form) return std::string();
    return std::nullopt;
  }
  auto prefix = pattern.substr(0, star);
  auto suffix = pattern.substr(star + 1);
  if (form.size() <= prefix.size() + suffix.size()) return std::nullopt;
  if (!text::starts_with(form, prefix) || !text::ends_with(form, suffix)) {
    return std::nullopt;
  }
  return std::string(
      form.substr(prefix.size(), form.size() - prefix.size() - suffix.size()));
}

std::string fill(std::string_view replacement,
                 const std::vector<std::string>& captures) {
  std::string out;
  std::size_t next = 0;
  for (char c : replacement) {
    if (c == '*' && next < captures.size()) {
      out += captures[next++];
    } else {
      out.push_back(c);
    }
  }
  return out;
}

// Splices replacement tokens in for the matched token range, keeping the
// group brackets and trailing codes of the original run.
void splice(std::vector<MainToken>& out, const std::vector<MainToken>& matched,
            std::vector<MainToken> repl) {
  if (repl.empty()) return;
  repl.front().group_open += matched.front().group_open;
  auto& tail = repl.back().trailing;
  tail.insert(tail.end(), matched.back().trailing.begin(),
              matched.back().trailing.end());
  for (auto& tok : repl) out.push_back(std::move(tok));
}

bool rewritable(const MainToken& t) {
  return t.cls == TokenClass::kWord || t.cls == TokenClass::kRetraceMarked;
}

}  // namespace

std::string_view repair_kind_name(RepairKind k) {
  switch (k) {
    case RepairKind::kRepetition: return "repetition";
    case RepairKind::kEyeDialect: return "eye_dialect";
    case RepairKind::kCliticSpacing: return "clitic_spacing";
    case RepairKind::kLiteralReplace: return "literal_replace";
  }
  return "?";
}

RepairLexicon parse_repair_lexicon(std::string_view input,
                                   std::string language) {
  RepairLexicon lex;
  lex.language = std::move(language);
  std::set<std::pair<RepairKind, std::string>> seen;
  std::size_t number = 0;
  for (auto raw : text::split(input, '\n')) {
    ++number;
    if (!raw.empty() && raw.back() == '\r') raw.pop_back();
    if (text::trim(raw).empty() || raw.front() == '#') continue;
    auto f = text::split(raw, '\t');
    if (f.size() != 3) {
      throw Error(ErrorCode::kBadLexicon, "expected 3 tab-separated fields",
                  number);
    }
    auto kind = parse_kind(text::trim(f[0]));
    std::string pattern = text::collapse_ws(f[1]);
    std::string replacement = text::collapse_ws(f[2]);
    if (!kind) {
      throw Error(ErrorCode::kBadLexicon, "unknown rule kind '" + f[0] + "'",
                  number);
    }
    if (pattern.empty() || replacement.empty()) {
      throw Error(ErrorCode::kBadLexicon, "empty pattern or replacement",
                  number);
    }
    if (*kind == RepairKind::kEyeDialect && pattern == replacement) {
      throw Error(ErrorCode::kBadLexicon,
                  "eye_dialect replacement equals its pattern", number);
    }
    if (!seen.insert({*kind, pattern}).second) {
      throw Error(ErrorCode::kBadLexicon, "duplicate rule for '" + pattern + "'",
                  number);
    }
    lex.rules.push_back({*kind, std::move(pattern), std::move(replacement)});
  }
  return lex;
}

RepairLexicon load_repair_lexicon(const std::filesystem::path& path,
                                  std::string language) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot read " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_repair_lexicon(ss.str(), std::move(language));
}

Utterance expand_repetitions(const Utterance& u, Diagnostics* diags) {
  Utterance res = u;
  std::vector<MainToken> out;
  std::vector<std::size_t> open;  // output positions of unclosed '<'
  for (const auto& tok : u.tokens) {
    MainToken base = tok;
    base.trailing.clear();
    out.push_back(std::move(base));
    for (int k = 0; k < tok.group_open; ++k) open.push_back(out.size() - 1);

    std::size_t scope = out.size() - 1;
    bool own_level = true;
    int codes_since_close = 0;
    for (std::size_t ti = 0; ti < tok.trailing.size(); ++ti) {
      const auto& item = tok.trailing[ti];
      if (item == ">") {
        if (open.empty()) {
          out.back().trailing.push_back(item);
          continue;
        }
        scope = open.back();
        open.pop_back();
        own_level = false;
        codes_since_close = 0;
        out.back().trailing.push_back(item);
        continue;
      }
      if (!is_repetition_code(item)) {
        out.back().trailing.push_back(item);
        ++codes_since_close;
        continue;
      }
      auto n = repetition_count(item);
      if (!n) {
        report(diags, "bad-repetition-count",
               "repetition count in '" + item + "' is not an integer >= 2",
               u.line);
        out.back().trailing.push_back(item);
        ++codes_since_close;
        continue;
      }
      // Later codes (e.g. [/]) scope over the whole expansion, so it is
      // wrapped in a group for them.
      bool codes_follow = std::any_of(tok.trailing.begin() + static_cast<long>(ti) + 1,
                                      tok.trailing.end(),
                                      [](const std::string& s) { return s != ">"; });
      if (own_level) {
        MainToken copy = out.back();
        copy.group_open = 0;
        std::size_t first = out.size() - 1;
        for (int k = 1; k < *n; ++k) out.push_back(copy);
        if (codes_follow && codes_since_close == 0) {
          out[first].group_open += 1;
          out.back().trailing.push_back(">");
        }
        continue;
      }
      // Group scope: the brackets stay on each copy when codes before the
      // repetition still need them.
      bool per_copy_brackets = codes_since_close > 0;
      if (!per_copy_brackets) {
        auto& tr = out.back().trailing;
        auto it = std::find(tr.rbegin(), tr.rend(), std::string(">"));
        if (it != tr.rend()) tr.erase(std::next(it).base());
        out[scope].group_open -= 1;
      }
      int outer = static_cast<int>(std::count(open.begin(), open.end(), scope));
      std::vector<MainToken> slice(out.begin() + static_cast<long>(scope),
                                   out.end());
      slice.front().group_open -= outer;
      for (int k = 1; k < *n; ++k) {
        out.insert(out.end(), slice.begin(), slice.end());
      }
      if (!per_copy_brackets && codes_follow) {
        out[scope].group_open += 1;
        out.back().trailing.push_back(">");
      }
      ++codes_since_close;
    }
  }
  classify_tokens(out);
  res.tokens = std::move(out);
  return res;
}

Utterance apply_lexicon(const Utterance& u, const RepairLexicon& lex) {
  Utterance res = u;
  std::vector<MainToken> out;
  for (const auto& tok : u.tokens) {
    const RepairRule* best = nullptr;
    std::string capture;
    if (rewritable(tok)) {
      for (const auto& rule : lex.rules) {
        if (rule.kind == RepairKind::kCliticSpacing) continue;
        auto m = match_form(rule.pattern, tok.surface);
        if (!m) continue;
        if (best == nullptr ||
            literal_weight(rule.pattern) > literal_weight(best->pattern)) {
          best = &rule;
          capture = *m;
        }
      }
    }
    if (best == nullptr) {
      out.push_back(tok);
      continue;
    }
    auto repl = parse_tokens(fill(best->replacement, {capture}));
    if (tok.replacement && repl.size() == 1 && !repl.front().replacement) {
      repl.front().replacement = tok.replacement;
    }
    splice(out, {tok}, std::move(repl));
  }
  classify_tokens(out);
  res.tokens = std::move(out);
  return res;
}

Utterance fix_clitic_spacing(const Utterance& u, const RepairLexicon& lex) {
  struct Compiled {
    std::vector<std::string> pattern;
    const RepairRule* rule;
  };
  std::vector<Compiled> rules;
  for (const auto& r : lex.rules) {
    if (r.kind == RepairKind::kCliticSpacing) {
      rules.push_back({text::split_ws(r.pattern), &r});
    }
  }
  std::stable_sort(rules.begin(), rules.end(),
                   [](const Compiled& a, const Compiled& b) {
                     if (a.pattern.size() != b.pattern.size()) {
                       return a.pattern.size() > b.pattern.size();
                     }
                     return literal_weight(a.rule->pattern) >
                            literal_weight(b.rule->pattern);
                   });

  Utterance res = u;
  const auto& toks = u.tokens;
  std::vector<MainToken> out;
  std::size_t i = 0;
  while (i < toks.size()) {
    bool fired = false;
    for (const auto& c : rules) {
      std::size_t len = c.pattern.size();
      if (i + len > toks.size()) continue;
      std::vector<std::string> captures;
      bool ok = true;
      for (std::size_t k = 0; k < len && ok; ++k) {
        const auto& t = toks[i + k];
        ok = rewritable(t) && !t.replacement &&
             (k == 0 || t.group_open == 0) &&
             (k + 1 == len || t.trailing.empty());
        if (!ok) break;
        if (c.pattern[k] == "*") {
          captures.push_back(t.surface);
        } else {
          ok = c.pattern[k] == t.surface;
        }
      }
      if (!ok) continue;
      std::vector<MainToken> matched(toks.begin() + static_cast<long>(i),
                                     toks.begin() + static_cast<long>(i + len));
      splice(out, matched, parse_tokens(fill(c.rule->replacement, captures)));
      i += len;
      fired = true;
      break;
    }
    if (!fired) out.push_back(toks[i++]);
  }
  classify_tokens(out);
  res.tokens = std::move(out);
  return res;
}

Transcript normalize_transcript(const Transcript& t, const RepairLexicon& lex,
                                Diagnostics* diags) {
  Transcript res = t;
  for (auto& u : res.utterances) {
    u = apply_lexicon(fix_clitic_spacing(expand_repetitions(u, diags), lex),
                      lex);
  }
  return res;
}

}  // namespace chatud::normalize
