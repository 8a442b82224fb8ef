#include "chatud/conllu.hpp"

#include "chatud/error.hpp"
#include "chatud/text.hpp"

namespace chatud::ud {

namespace {

std::size_t parse_id(const std::string& s, std::size_t line) {
  if (s.empty() || !text::is_integer(s) || s[0] == '-' || s[0] == '+' ||
      s.size() > 9) {
    throw Error(ErrorCode::kNonContiguousIds, "bad word id '" + s + "'", line);
  }
  return static_cast<std::size_t>(std::stoul(s));
}

void finish(std::vector<ConlluSentence>& out, ConlluSentence& cur,
            std::size_t start_line) {
  if (cur.words.empty() && cur.mwt_spans.empty()) {
    cur = ConlluSentence{};
    return;
  }
  check_sentence(cur, start_line);
  out.push_back(std::move(cur));
  cur = ConlluSentence{};
}

}  // namespace

Feats parse_feats(std::string_view s) {
  Feats f;
  if (s.empty() || s == "_") return f;
  for (const auto& item : text::split(s, '|')) {
    auto eq = item.find('=');
    if (eq == std::string::npos) {
      f.emplace_back(item, "");
    } else {
      f.emplace_back(item.substr(0, eq), item.substr(eq + 1));
    }
  }
  return f;
}

std::string format_feats(const Feats& f) {
  if (f.empty()) return "_";
  std::vector<std::string> parts;
  for (const auto& [k, v] : f) parts.push_back(k + "=" + v);
  return text::join(parts, "|");
}

void check_sentence(const ConlluSentence& s, std::size_t line) {
  const std::size_t n = s.words.size();
  if (n == 0) {
    throw Error(ErrorCode::kNonContiguousIds, "sentence has no words", line);
  }
  std::size_t roots = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const auto& w = s.words[i];
    if (w.id != i + 1) {
      throw Error(ErrorCode::kNonContiguousIds,
                  "word ids must run 1.." + std::to_string(n) + ", found " +
                      std::to_string(w.id),
                  line);
    }
    if (w.head > n || w.head == w.id) {
      throw Error(ErrorCode::kBadHead,
                  "word " + std::to_string(w.id) + " has head " +
                      std::to_string(w.head),
                  line);
    }
    if (w.head == 0) ++roots;
  }
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t at = i + 1, steps = 0;
    while (at != 0) {
      at = s.words[at - 1].head;
      if (++steps > n) {
        throw Error(ErrorCode::kCyclicHeads,
                    "head cycle through word " + std::to_string(i + 1), line);
      }
    }
  }
  if (roots != 1) {
    throw Error(ErrorCode::kBadHead,
                "sentence has " + std::to_string(roots) + " roots", line);
  }
  std::size_t prev_last = 0;
  for (const auto& sp : s.mwt_spans) {
    if (sp.first > sp.last || sp.first <= prev_last || sp.last > n) {
      throw Error(ErrorCode::kNonContiguousIds,
                  "bad multiword range " + std::to_string(sp.first) + "-" +
                      std::to_string(sp.last),
                  line);
    }
    prev_last = sp.last;
  }
}

std::vector<ConlluSentence> parse_conllu(std::string_view input) {
  if (text::starts_with(input, "\xEF\xBB\xBF")) input.remove_prefix(3);
  std::vector<ConlluSentence> out;
  ConlluSentence cur;
  std::size_t number = 0, start_line = 1;
  for (auto raw : text::split(input, '\n')) {
    ++number;
    if (!raw.empty() && raw.back() == '\r') raw.pop_back();
    if (text::trim(raw).empty()) {
      finish(out, cur, start_line);
      start_line = number + 1;
      continue;
    }
    if (raw.front() == '#') {
      auto c = std::string_view(raw).substr(1);
      if (!c.empty() && c.front() == ' ') c.remove_prefix(1);
      cur.comments.emplace_back(c);
      continue;
    }
    auto f = text::split(raw, '\t');
    if (f.size() != 10) {
      throw Error(ErrorCode::kBadColumnCount,
                  "expected 10 columns, found " + std::to_string(f.size()),
                  number);
    }
    if (f[0].find('.') != std::string::npos) continue;
    auto dash = f[0].find('-');
    if (dash != std::string::npos) {
      MwtSpan sp{parse_id(f[0].substr(0, dash), number),
                 parse_id(f[0].substr(dash + 1), number), f[1]};
      cur.mwt_spans.push_back(std::move(sp));
      continue;
    }
    ConlluWord w;
    w.id = parse_id(f[0], number);
    w.form = f[1];
    w.lemma = f[2];
    w.upos = f[3];
    w.xpos = f[4];
    w.feats = parse_feats(f[5]);
    if (!text::is_integer(f[6]) || f[6][0] == '-') {
      throw Error(ErrorCode::kBadHead, "bad head '" + f[6] + "'", number);
    }
    w.head = static_cast<std::size_t>(std::stoul(f[6]));
    w.deprel = f[7];
    w.deps = f[8];
    w.misc = f[9];
    cur.words.push_back(std::move(w));
  }
  finish(out, cur, start_line);
  return out;
}

std::string serialize_sentence(const ConlluSentence& s) {
  std::string out;
  for (const auto& c : s.comments) out += "# " + c + "\n";
  std::size_t span = 0;
  for (const auto& w : s.words) {
    while (span < s.mwt_spans.size() && s.mwt_spans[span].first == w.id) {
      const auto& sp = s.mwt_spans[span++];
      out += std::to_string(sp.first) + "-" + std::to_string(sp.last) + "\t" +
             sp.surface + "\t_\t_\t_\t_\t_\t_\t_\t_\n";
    }
    out += std::to_string(w.id) + "\t" + w.form + "\t" + w.lemma + "\t" +
           w.upos + "\t" + w.xpos + "\t" + format_feats(w.feats) + "\t" +
           std::to_string(w.head) + "\t" + w.deprel + "\t" + w.deps + "\t" +
           w.misc + "\n";
  }
  return out + "\n";
}

std::string serialize_conllu(const std::vector<ConlluSentence>& sentences) {
  std::string out;
  for (const auto& s : sentences) out += serialize_sentence(s);
  return out;
}

}  // namespace chatud::ud
