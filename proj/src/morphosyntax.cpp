#include "chatud/morphosyntax.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <fstream>
#include <sstream>
#include <unordered_map>

#include "chatud/error.hpp"
#include "chatud/text.hpp"

namespace chatud::morph {

namespace {

std::string sanitize(std::string_view s, char with) {
  std::string out;
  for (char c : s) {
    if (c == '-' || c == '~' || c == '|' || c == ' ' || c == '\t' ||
        c == '\n' || c == '\r') {
      if (with) out.push_back(with);
    } else {
      out.push_back(c);
    }
  }
  return out;
}

bool is_apostrophe_at(std::string_view s, std::size_t pos, std::size_t* len) {
  if (pos < s.size() && s[pos] == '\'') {
    *len = 1;
    return true;
  }
  if (s.substr(pos, 3) == "’") {
    *len = 3;
    return true;
  }
  return false;
}

// --- contraction rules -----------------------------------------------------

struct Proclitic {
  std::string_view stem;  // without the apostrophe
  std::string_view word;
  std::string_view upos;
  std::string_view deprel;
};

constexpr std::array<Proclitic, 13> kFrench = {{
    {"jusqu", "jusque", "ADP", "case"},
    {"lorsqu", "lorsque", "SCONJ", "mark"},
    {"puisqu", "puisque", "SCONJ", "mark"},
    {"quoiqu", "quoique", "SCONJ", "mark"},
    {"qu", "que", "SCONJ", "mark"},
    {"j", "je", "PRON", "nsubj"},
    {"t", "te", "PRON", "obj"},
    {"m", "me", "PRON", "obj"},
    {"s", "se", "PRON", "expl"},
    {"l", "le", "PRON", "obj"},
    {"n", "ne", "ADV", "advmod"},
    {"d", "de", "ADP", "case"},
    {"c", "ce", "PRON", "nsubj"},
}};

constexpr std::array<Proclitic, 9> kItalian = {{
    {"un", "una", "DET", "det"},
    {"c", "ci", "PRON", "expl"},
    {"m", "mi", "PRON", "obj"},
    {"t", "ti", "PRON", "obj"},
    {"s", "si", "PRON", "expl"},
    {"v", "vi", "PRON", "obj"},
    {"l", "lo", "PRON", "obj"},
    {"d", "di", "ADP", "case"},
    {"n", "ne", "PRON", "obj"},
}};

constexpr std::array<std::string_view, 10> kEnglishIsHosts = {
    "he", "she", "it", "that", "what", "there", "here", "where", "who", "how"};

struct RulePieces {
  std::vector<MwtPiece> pieces;
  std::size_t host = 0;
};

template <std::size_t N>
std::optional<RulePieces> match_proclitic(std::string_view form,
                                          const std::array<Proclitic, N>& rules) {
  std::string lower = text::casefold(form);
  for (const auto& r : rules) {
    if (!text::starts_with(lower, r.stem)) continue;
    std::size_t alen = 0;
    if (!is_apostrophe_at(form, r.stem.size(), &alen)) continue;
    std::string_view rest = form.substr(r.stem.size() + alen);
    if (rest.empty()) continue;
    std::size_t dummy = 0;
    if (is_apostrophe_at(rest, 0, &dummy) || text::strip_punct(rest).empty()) {
      continue;
    }
    std::string word(r.word);
    if (std::isupper(static_cast<unsigned char>(form[0]))) {
      word[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(word[0])));
    }
    RulePieces out;
    out.pieces.push_back({word, std::string(r.upos), std::string(r.deprel)});
    out.pieces.push_back({std::string(rest), "", ""});
    out.host = 1;
    return out;
  }
  return std::nullopt;
}

std::optional<RulePieces> match_english(std::string_view form) {
  auto ascii = form.rfind('\'');
  auto curly = form.rfind("’");
  std::size_t pos = std::string_view::npos, alen = 0;
  if (ascii != std::string_view::npos) pos = ascii, alen = 1;
  if (curly != std::string_view::npos && (pos == std::string_view::npos || curly > pos)) {
    pos = curly, alen = 3;
  }
  if (pos == std::string_view::npos || pos == 0) return std::nullopt;
  std::string_view stem = form.substr(0, pos);
  std::string suffix = text::casefold(form.substr(pos + alen));
  std::string lstem = text::casefold(stem);
  std::string word;
  if (suffix == "re") {
    word = "are";
  } else if (suffix == "m" && lstem == "i") {
    word = "am";
  } else if (suffix == "s" && std::find(kEnglishIsHosts.begin(), kEnglishIsHosts.end(),
                                        lstem) != kEnglishIsHosts.end()) {
    word = "is";
  } else {
    return std::nullopt;
  }
  RulePieces out;
  out.pieces.push_back({std::string(stem), "", ""});
  out.pieces.push_back({word, "AUX", "dep"});
  out.host = 0;
  return out;
}

std::optional<RulePieces> rule_pieces(std::string_view form,
                                      std::string_view language) {
  std::string lang = text::canonical_language(language);
  if (lang == "fr") return match_proclitic(form, kFrench);
  if (lang == "it") return match_proclitic(form, kItalian);
  if (lang == "en") return match_english(form);
  return std::nullopt;
}

// --- sentence rebuilding -------------------------------------------------

struct Draft {
  ConlluWord w;
  std::size_t key = 0;
  std::size_t head_key = 0;
};

struct Unit {
  std::optional<std::string> surface;
  std::vector<Draft> words;

  std::string text() const { return surface ? *surface : words.front().w.form; }
};

std::vector<Unit> to_units(const ConlluSentence& s) {
  std::vector<Unit> units;
  std::size_t span = 0;
  for (std::size_t i = 0; i < s.words.size();) {
    const auto& w = s.words[i];
    Unit u;
    if (span < s.mwt_spans.size() && s.mwt_spans[span].first == w.id) {
      const auto& sp = s.mwt_spans[span++];
      u.surface = sp.surface;
      for (std::size_t id = sp.first; id <= sp.last; ++id) {
        const auto& x = s.words[id - 1];
        u.words.push_back({x, x.id, x.head});
      }
      i = sp.last;
    } else {
      u.words.push_back({w, w.id, w.head});
      ++i;
    }
    units.push_back(std::move(u));
  }
  return units;
}

ConlluSentence from_units(const std::vector<Unit>& units,
                          std::vector<std::string> comments) {
  std::unordered_map<std::size_t, std::size_t> id_of;
  std::size_t next = 1;
  for (const auto& u : units) {
    for (const auto& d : u.words) id_of[d.key] = next++;
  }
  ConlluSentence s;
  s.comments = std::move(comments);
  for (const auto& u : units) {
    std::size_t first = s.words.size() + 1;
    for (const auto& d : u.words) {
      ConlluWord w = d.w;
      w.id = id_of.at(d.key);
      w.head = d.head_key == 0 ? 0 : id_of.at(d.head_key);
      s.words.push_back(std::move(w));
    }
    if (u.surface) s.mwt_spans.push_back({first, s.words.size(), *u.surface});
  }
  return s;
}

void merge_protected(std::vector<Unit>& units, const MwtLexicon& lex) {
  std::unordered_map<std::size_t, std::size_t> redirect;
  for (std::size_t i = 0; i < units.size(); ++i) {
    for (const auto& p : lex.protections) {
      std::string acc;
      std::size_t j = i;
      while (j < units.size() && acc.size() < p.size()) acc += units[j++].text();
      if (acc != p) continue;
      std::size_t nwords = 0;
      for (std::size_t k = i; k < j; ++k) nwords += units[k].words.size();
      if (nwords < 2) break;
      std::vector<std::size_t> keys;
      for (std::size_t k = i; k < j; ++k) {
        for (const auto& d : units[k].words) keys.push_back(d.key);
      }
      auto inside = [&](std::size_t key) {
        return std::find(keys.begin(), keys.end(), key) != keys.end();
      };
      const Draft* host = nullptr;
      for (std::size_t k = i; k < j; ++k) {
        for (const auto& d : units[k].words) {
          if (inside(d.head_key)) continue;
          if (host != nullptr) {
            throw Error(ErrorCode::kHeadRemapFailure,
                        "protected form '" + p +
                            "' has more than one head outside the span");
          }
          host = &d;
        }
      }
      if (host == nullptr) {
        throw Error(ErrorCode::kHeadRemapFailure,
                    "protected form '" + p + "' has no head outside the span");
      }
      Draft merged = *host;
      merged.w.form = p;
      merged.w.lemma = text::casefold(p);
      for (auto key : keys) {
        if (key != merged.key) redirect[key] = merged.key;
      }
      Unit u;
      u.words.push_back(std::move(merged));
      units.erase(units.begin() + static_cast<long>(i),
                  units.begin() + static_cast<long>(j));
      units.insert(units.begin() + static_cast<long>(i), std::move(u));
      break;
    }
  }
  for (auto& u : units) {
    for (auto& d : u.words) {
      auto it = redirect.find(d.head_key);
      if (it != redirect.end()) d.head_key = it->second;
    }
  }
}

void split_unit(Unit& u, const std::vector<MwtPiece>& pieces, std::size_t host,
                std::string_view default_deprel, std::size_t& next_key) {
  Draft orig = u.words.front();
  std::string surface = orig.w.form;
  bool lemma_is_form = orig.w.lemma == "_" || orig.w.lemma.empty() ||
                       text::casefold(orig.w.lemma) == text::casefold(surface);
  std::vector<Draft> out;
  for (std::size_t k = 0; k < pieces.size(); ++k) {
    const auto& p = pieces[k];
    Draft d;
    if (k == host) {
      d = orig;
      d.w.form = p.form;
      if (lemma_is_form) d.w.lemma = p.form;
      if (!p.upos.empty()) d.w.upos = p.upos;
    } else {
      d.key = next_key++;
      d.head_key = orig.key;
      d.w.form = p.form;
      d.w.lemma = text::casefold(p.form);
      d.w.upos = p.upos.empty() ? orig.w.upos : p.upos;
      d.w.deprel = p.deprel.empty() ? std::string(default_deprel) : p.deprel;
    }
    out.push_back(std::move(d));
  }
  u.surface = surface;
  u.words = std::move(out);
}

// --- emission ----------------------------------------------------------

constexpr std::array<std::string_view, 14> kFeatureOrder = {
    "VerbForm", "Mood",     "Tense",  "Aspect",   "Voice",
    "Definite", "PronType", "NumType", "Case",    "Degree",
    "Polarity", "Polite",   "Clusivity", "Gender"};

const std::unordered_map<std::string_view, std::vector<std::string_view>>&
known_values() {
  static const std::unordered_map<std::string_view, std::vector<std::string_view>>
      kKnown = {
          {"VerbForm", {"Conv", "Fin", "Gdv", "Ger", "Inf", "Part", "Sup", "Vnoun"}},
          {"Mood", {"Adm", "Cnd", "Des", "Imp", "Ind", "Int", "Irr", "Jus",
                    "Nec", "Opt", "Pot", "Prp", "Qot", "Sub"}},
          {"Tense", {"Fut", "Imp", "Past", "Pqp", "Pres"}},
          {"Aspect", {"Hab", "Imp", "Iter", "Perf", "Prog", "Prosp"}},
          {"Voice", {"Act", "Antip", "Bfoc", "Cau", "Dir", "Inv", "Lfoc", "Mid",
                     "Pass", "Rcp"}},
          {"Definite", {"Com", "Cons", "Def", "Ind", "Spec"}},
          {"PronType", {"Art", "Dem", "Emp", "Exc", "Ind", "Int", "Neg", "Prs",
                        "Rcp", "Rel", "Tot"}},
          {"NumType", {"Card", "Dist", "Frac", "Mult", "Ord", "Range", "Sets"}},
          {"Case", {"Abs", "Acc", "Erg", "Nom", "Abe", "Ben", "Cau", "Cmp",
                    "Cns", "Com", "Dat", "Dis", "Equ", "Gen", "Ins", "Par",
                    "Tem", "Tra", "Voc", "Abl", "Add", "Ade", "All", "Del",
                    "Ela", "Ess", "Ill", "Ine", "Lat", "Loc", "Per", "Sbe",
                    "Sbl", "Spl", "Sub", "Sup", "Ter"}},
          {"Degree", {"Abs", "Aug", "Cmp", "Dim", "Equ", "Pos", "Sup"}},
          {"Polarity", {"Neg", "Pos"}},
          {"Polite", {"Elev", "Form", "Humb", "Infm"}},
          {"Clusivity", {"Ex", "In"}},
          {"Gender", {"Com", "Fem", "Masc", "Neut"}},
          {"Number", {"Coll", "Count", "Dual", "Grpa", "Grpl", "Inv", "Pauc",
                      "Plur", "Ptan", "Sing", "Tri"}},
          {"Person", {"0", "1", "2", "3", "4"}},
      };
  return kKnown;
}

bool is_known(std::string_view feature, std::string_view value) {
  const auto& table = known_values();
  auto it = table.find(feature);
  if (it == table.end()) return false;
  for (const auto& part : text::split(value, ',')) {
    if (std::find(it->second.begin(), it->second.end(), part) == it->second.end()) {
      return false;
    }
  }
  return true;
}

const std::string* feat(const Feats& feats, std::string_view name) {
  for (const auto& [k, v] : feats) {
    if (k == name) return &v;
  }
  return nullptr;
}

std::string tag_value(std::string_view feature, const std::string& value,
                      Diagnostics* diags) {
  if (!is_known(feature, value)) {
    report(diags, "unknown-feature-value",
           "unmapped value " + std::string(feature) + "=" + value +
               " passed through");
  }
  std::string joined;
  for (char c : value) {
    if (c != ',') joined.push_back(c);
  }
  return sanitize(joined, 0);
}

// Words kept for %mor/%gra after dropping standalone punctuation.
struct Pruned {
  std::vector<ConlluWord> words;             // renumbered
  std::vector<std::vector<std::size_t>> units;  // indices into words
  std::vector<bool> in_span;
  std::size_t root = 0;                      // 1-based index
  std::string terminator;                    // from the sentence, may be empty
};

Pruned prune(const ConlluSentence& s) {
  const std::size_t n = s.words.size();
  std::vector<bool> drop(n + 1, false), spanned(n + 1, false);
  for (const auto& sp : s.mwt_spans) {
    for (std::size_t id = sp.first; id <= sp.last; ++id) spanned[id] = true;
  }
  for (const auto& w : s.words) {
    drop[w.id] = !spanned[w.id] && w.upos == "PUNCT" && w.head != 0;
  }
  Pruned p;
  if (n > 0 && drop[n] && is_basic_terminator(s.words.back().form)) {
    p.terminator = s.words.back().form;
  }
  auto resolve = [&](std::size_t h) {
    while (h != 0 && drop[h]) h = s.words[h - 1].head;
    return h;
  };
  std::vector<std::size_t> new_id(n + 1, 0);
  std::size_t next = 1;
  for (const auto& w : s.words) {
    if (!drop[w.id]) new_id[w.id] = next++;
  }
  std::size_t span = 0;
  for (const auto& w : s.words) {
    if (drop[w.id]) continue;
    ConlluWord x = w;
    x.id = new_id[w.id];
    std::size_t h = resolve(w.head);
    x.head = h == 0 ? 0 : new_id[h];
    if (x.head == 0) p.root = x.id;
    p.words.push_back(std::move(x));
    p.in_span.push_back(spanned[w.id]);
    while (span < s.mwt_spans.size() && s.mwt_spans[span].last < w.id) ++span;
    bool continues = spanned[w.id] && span < s.mwt_spans.size() &&
                     s.mwt_spans[span].first < w.id;
    if (continues && !p.units.empty()) {
      p.units.back().push_back(p.words.size() - 1);
    } else {
      p.units.push_back({p.words.size() - 1});
    }
  }
  return p;
}

std::string dot_escape(std::string_view s) {
  std::string out;
  for (char c : s) {
    if (c == '"' || c == '\\') out.push_back('\\');
    if (c == '\n') {
      out += "\\n";
      continue;
    }
    out.push_back(c);
  }
  return out;
}

}  // namespace

// --- tokenization ---------------------------------------------------------

std::vector<BoundaryLabel> parse_boundary_labels(std::string_view s) {
  std::vector<BoundaryLabel> out;
  for (const auto& item : text::split_ws(s)) {
    if (item == "B" || item == "b") {
      out.push_back(BoundaryLabel::kBegin);
    } else if (item == "I" || item == "i") {
      out.push_back(BoundaryLabel::kInside);
    } else {
      throw Error(ErrorCode::kBadLabel, "boundary label '" + item + "' is not B or I");
    }
  }
  return out;
}

std::vector<std::string> decode_word_boundaries(
    const std::vector<std::string>& chars,
    const std::vector<BoundaryLabel>& labels) {
  if (chars.size() != labels.size()) {
    throw Error(ErrorCode::kLengthMismatch,
                std::to_string(chars.size()) + " characters but " +
                    std::to_string(labels.size()) + " labels");
  }
  std::vector<std::string> out;
  for (std::size_t i = 0; i < chars.size(); ++i) {
    if (labels[i] == BoundaryLabel::kBegin) {
      out.emplace_back();
    } else if (out.empty()) {
      throw Error(ErrorCode::kLeadingI, "first boundary label must be B");
    }
    out.back() += chars[i];
  }
  return out;
}

Utterance retokenize_utterance(const Utterance& u,
                               const std::vector<std::string>& tokens) {
  std::string old_text, new_text;
  std::map<std::pair<std::size_t, std::size_t>, std::size_t> old_range;
  for (std::size_t i = 0; i < u.tokens.size(); ++i) {
    std::size_t a = old_text.size();
    old_text += u.tokens[i].surface;
    old_range[{a, old_text.size()}] = i;
  }
  for (const auto& t : tokens) {
    if (t.empty() || t.find_first_of(" \t\n") != std::string::npos) {
      throw Error(ErrorCode::kCoverageMismatch,
                  "token '" + t + "' is empty or contains whitespace", u.line);
    }
    new_text += t;
  }
  if (old_text != new_text) {
    throw Error(ErrorCode::kCoverageMismatch,
                "tokens do not cover the main line exactly", u.line);
  }
  Utterance res = u;
  res.tokens.clear();
  std::size_t pos = 0;
  for (const auto& t : tokens) {
    auto it = old_range.find({pos, pos + t.size()});
    if (it != old_range.end()) {
      res.tokens.push_back(u.tokens[it->second]);
    } else {
      res.tokens.push_back(MainToken::from_surface(t));
    }
    pos += t.size();
  }
  classify_tokens(res.tokens);
  return res;
}

// --- multiword tokens -----------------------------------------------------

MwtLexicon parse_mwt_lexicon(std::string_view input, std::string language) {
  MwtLexicon lex;
  lex.language = text::canonical_language(language);
  std::size_t number = 0;
  for (auto raw : text::split(input, '\n')) {
    ++number;
    if (!raw.empty() && raw.back() == '\r') raw.pop_back();
    auto line = std::string(text::trim(raw));
    if (line.empty() || line[0] == '#') continue;
    if (line[0] == '=') {
      auto form = std::string(text::trim(std::string_view(line).substr(1)));
      if (form.empty()) throw Error(ErrorCode::kBadLexicon, "empty protection", number);
      lex.protections.insert(form);
      continue;
    }
    auto tab = line.find('\t');
    std::string surface = std::string(text::trim(line.substr(0, tab)));
    std::vector<MwtPiece> pieces;
    if (tab == std::string::npos) {
      if (surface.find('_') == std::string::npos) {
        throw Error(ErrorCode::kBadLexicon,
                    "expansion line needs a tab or an underscore form", number);
      }
      for (auto& part : text::split(surface, '_')) pieces.push_back({part, "", ""});
    } else {
      for (const auto& item : text::split_ws(line.substr(tab + 1))) {
        auto f = text::split(item, '/');
        if (f.size() > 3 || f[0].empty()) {
          throw Error(ErrorCode::kBadLexicon, "bad expansion piece '" + item + "'",
                      number);
        }
        pieces.push_back({f[0], f.size() > 1 ? f[1] : "", f.size() > 2 ? f[2] : ""});
      }
    }
    if (surface.empty() || pieces.size() < 2 ||
        std::any_of(pieces.begin(), pieces.end(),
                    [](const MwtPiece& p) { return p.form.empty(); })) {
      throw Error(ErrorCode::kBadLexicon,
                  "expansion of '" + surface + "' needs at least two words", number);
    }
    if (!lex.expansions.emplace(surface, std::move(pieces)).second) {
      throw Error(ErrorCode::kBadLexicon, "duplicate expansion for '" + surface + "'",
                  number);
    }
  }
  for (const auto& p : lex.protections) {
    if (lex.expansions.count(p)) {
      throw Error(ErrorCode::kBadLexicon,
                  "'" + p + "' is both expanded and protected");
    }
  }
  return lex;
}

MwtLexicon load_mwt_lexicon(const std::filesystem::path& path,
                            std::string language) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot read " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_mwt_lexicon(ss.str(), std::move(language));
}

std::optional<std::vector<std::string>> detect_rule_contractions(
    std::string_view form, std::string_view language) {
  auto r = rule_pieces(form, language);
  if (!r) return std::nullopt;
  std::vector<std::string> out;
  for (const auto& p : r->pieces) out.push_back(p.form);
  return out;
}

ConlluSentence apply_mwt_correction(const ConlluSentence& s,
                                    const MwtLexicon& lex) {
  auto units = to_units(s);
  merge_protected(units, lex);
  std::size_t next_key = s.words.size() + 1;
  for (auto& u : units) {
    if (u.surface || u.words.size() != 1) continue;
    const std::string form = u.words.front().w.form;
    if (lex.protections.count(form)) continue;
    auto it = lex.expansions.find(form);
    if (it != lex.expansions.end()) {
      bool mwe = form.find('_') != std::string::npos;
      split_unit(u, it->second, 0, mwe ? "flat" : "dep", next_key);
      continue;
    }
    if (auto r = rule_pieces(form, lex.language)) {
      split_unit(u, r->pieces, r->host, "dep", next_key);
    }
  }
  return from_units(units, s.comments);
}

// --- %mor -------------------------------------------------------------------

std::vector<std::string> map_features(std::string_view, const Feats& feats,
                                      const FeatureOptions& opts,
                                      Diagnostics* diags) {
  std::vector<std::string> tags;
  for (auto name : kFeatureOrder) {
    const std::string* v = feat(feats, name);
    if (v == nullptr || v->empty()) continue;
    if (name == "Gender" && (*v == "ComNeut" || *v == "Com,Neut")) continue;
    auto tag = tag_value(name, *v, diags);
    if (!tag.empty()) tags.push_back(std::move(tag));
  }
  const std::string* num = feat(feats, "Number");
  const std::string* per = feat(feats, "Person");
  std::string num_tag, per_tag;
  if (num != nullptr && !num->empty()) {
    if (*num == "Sing") {
      num_tag = "S";
    } else if (*num == "Plur") {
      num_tag = "P";
    } else {
      num_tag = tag_value("Number", *num, diags);
    }
  }
  if (per != nullptr && !per->empty()) {
    per_tag = (*per == "0" || *per == "4") ? "4" : tag_value("Person", *per, diags);
  }
  if (!num_tag.empty() && !per_tag.empty()) {
    tags.push_back(num_tag + per_tag);
  } else if (!num_tag.empty()) {
    if (!(opts.suppress_singular && num_tag == "S")) tags.push_back(num_tag);
  } else if (!per_tag.empty()) {
    tags.push_back(per_tag);
  }
  return tags;
}

std::string render_mor_word(const MorWord& w) {
  std::string out = w.pos + "|" + w.lemma;
  for (const auto& t : w.tags) out += "-" + t;
  return out;
}

std::string render_mor_group(const MorGroup& g) {
  std::vector<std::string> parts;
  for (const auto& w : g.words) parts.push_back(render_mor_word(w));
  return text::join(parts, "~");
}

std::vector<MorGroup> build_mor_groups(const ConlluSentence& s,
                                       const FeatureOptions& opts,
                                       Diagnostics* diags) {
  auto p = prune(s);
  std::vector<MorGroup> groups;
  for (const auto& unit : p.units) {
    MorGroup g;
    for (auto idx : unit) {
      const auto& w = p.words[idx];
      MorWord m;
      m.pos = sanitize(text::to_lower_ascii(w.upos), '_');
      std::string lemma = w.lemma;
      if (lemma.empty() || lemma == "_") lemma = w.form;
      if (!p.in_span[idx] && w.form.find('_') != std::string::npos) lemma = w.form;
      m.lemma = sanitize(lemma, '_');
      m.tags = map_features(w.upos, w.feats, opts, diags);
      g.words.push_back(std::move(m));
    }
    groups.push_back(std::move(g));
  }
  return groups;
}

std::string emit_mor(const ConlluSentence& s, const Utterance& u,
                     const FeatureOptions& opts, Diagnostics* diags) {
  auto groups = build_mor_groups(s, opts, diags);
  auto eligible = static_cast<std::size_t>(
      std::count_if(u.tokens.begin(), u.tokens.end(), is_mor_eligible));
  if (groups.size() != eligible) {
    throw Error(ErrorCode::kAlignmentMismatch,
                "analysis has " + std::to_string(groups.size()) +
                    " tokens but the main line has " + std::to_string(eligible) +
                    " eligible words",
                u.line);
  }
  std::vector<std::string> parts;
  for (const auto& g : groups) parts.push_back(render_mor_group(g));
  parts.push_back(u.terminator);
  return text::join(parts, " ");
}

// --- %gra -------------------------------------------------------------------

std::vector<GraEntry> build_gra(const ConlluSentence& s) {
  auto p = prune(s);
  std::vector<GraEntry> out;
  for (const auto& w : p.words) {
    out.push_back({w.id, w.head, text::to_upper_ascii(w.deprel)});
  }
  out.push_back({p.words.size() + 1, p.root, "PUNCT"});
  return out;
}

std::string emit_gra(const ConlluSentence& s) {
  std::vector<std::string> parts;
  for (const auto& e : build_gra(s)) {
    parts.push_back(std::to_string(e.index) + "|" + std::to_string(e.head) + "|" +
                    e.relation);
  }
  return text::join(parts, " ");
}

std::string export_dot(const ConlluSentence& s, std::string_view terminator) {
  auto p = prune(s);
  std::string term(terminator);
  if (term.empty()) term = p.terminator.empty() ? "." : p.terminator;
  std::string out = "digraph utterance {\n  node [shape=box];\n";
  for (const auto& w : p.words) {
    out += "  n" + std::to_string(w.id) + " [label=\"" + dot_escape(w.form) +
           "\"];\n";
  }
  std::size_t term_id = p.words.size() + 1;
  out += "  n" + std::to_string(term_id) + " [label=\"" + dot_escape(term) +
         "\"];\n";
  for (const auto& w : p.words) {
    if (w.head == 0) continue;
    out += "  n" + std::to_string(w.id) + " -> n" + std::to_string(w.head) +
           " [label=\"" + dot_escape(text::to_upper_ascii(w.deprel)) + "\"];\n";
  }
  if (p.root != 0) {
    out += "  n" + std::to_string(term_id) + " -> n" + std::to_string(p.root) +
           " [label=\"PUNCT\"];\n";
  }
  return out + "}\n";
}

ConlluSentence sentence_from_tiers(std::string_view mor, std::string_view gra) {
  auto groups = text::split_ws(mor);
  if (!groups.empty() && is_terminator(groups.back())) groups.pop_back();
  ConlluSentence s;
  for (const auto& g : groups) {
    std::size_t first = s.words.size() + 1;
    auto words = text::split(g, '~');
    for (const auto& item : words) {
      ConlluWord w;
      w.id = s.words.size() + 1;
      auto bar = item.find('|');
      std::string rest = bar == std::string::npos ? item : item.substr(bar + 1);
      w.upos = bar == std::string::npos ? "X" : text::to_upper_ascii(item.substr(0, bar));
      w.lemma = rest.substr(0, rest.find('-'));
      w.form = w.lemma;
      s.words.push_back(std::move(w));
    }
    if (words.size() > 1) s.mwt_spans.push_back({first, s.words.size(), g});
  }
  auto entries = text::split_ws(gra);
  if (entries.size() != s.words.size() + 1) {
    throw Error(ErrorCode::kAlignmentMismatch,
                "%gra has " + std::to_string(entries.size()) + " entries for " +
                    std::to_string(s.words.size()) + " %mor words");
  }
  for (std::size_t i = 0; i < s.words.size(); ++i) {
    auto f = text::split(entries[i], '|');
    if (f.size() != 3 || !text::is_integer(f[1]) || f[1][0] == '-') {
      throw Error(ErrorCode::kAlignmentMismatch,
                  "malformed %gra entry '" + entries[i] + "'");
    }
    s.words[i].head = static_cast<std::size_t>(std::stoul(f[1]));
    s.words[i].deprel = text::to_lower_ascii(f[2]);
  }
  ud::check_sentence(s);
  return s;
}

}  // namespace chatud::morph
