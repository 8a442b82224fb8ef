#include "chatud/analysis.hpp"

#include <algorithm>
#include <cstdio>
#include <map>
#include <unordered_map>

#include <nlohmann/json.hpp>

#include "chatud/error.hpp"
#include "chatud/text.hpp"

namespace chatud::analysis {

namespace {

const std::string* tier_text(const Utterance& u, FreqTier tier) {
  switch (tier) {
    case FreqTier::kMor: {
      const auto* m = u.tier("%mor");
      return m ? m : u.tier("%umor");
    }
    case FreqTier::kGra: {
      const auto* g = u.tier("%gra");
      return g ? g : u.tier("%ugra");
    }
    case FreqTier::kMain: return nullptr;
  }
  return nullptr;
}

std::vector<std::string> mor_groups(const std::string& mor) {
  auto items = text::split_ws(mor);
  if (!items.empty() && is_terminator(items.back())) items.pop_back();
  return items;
}

struct MorParts {
  std::string pos;
  std::string lemma;
  std::vector<std::string> tags;
};

MorParts split_mor_word(std::string_view w) {
  MorParts p;
  auto bar = w.find('|');
  std::string_view rest = w;
  if (bar != std::string_view::npos) {
    p.pos = std::string(w.substr(0, bar));
    rest = w.substr(bar + 1);
  }
  auto parts = text::split(rest, '-');
  p.lemma = parts.front();
  p.tags.assign(parts.begin() + 1, parts.end());
  return p;
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4f", v);
  return buf;
}

}  // namespace

FreqQuery parse_freq_spec(std::string_view spec) {
  auto f = text::split(spec, ':');
  if (f.size() < 2) {
    throw Error(ErrorCode::kUsage, "freq spec must be tier:facet[:pattern]");
  }
  FreqQuery q;
  if (f[0] == "main") {
    q.tier = FreqTier::kMain;
  } else if (f[0] == "mor") {
    q.tier = FreqTier::kMor;
  } else if (f[0] == "gra") {
    q.tier = FreqTier::kGra;
  } else {
    throw Error(ErrorCode::kUsage, "unknown freq tier '" + f[0] + "'");
  }
  const std::string& facet = f[1];
  bool ok = true;
  if (facet == "word") {
    q.facet = FreqFacet::kWord;
    ok = q.tier == FreqTier::kMain;
  } else if (facet == "lemma" || facet == "pos" || facet == "tag") {
    q.facet = facet == "lemma" ? FreqFacet::kLemma
              : facet == "pos" ? FreqFacet::kPos
                               : FreqFacet::kTag;
    ok = q.tier == FreqTier::kMor;
  } else if (facet == "relation") {
    q.facet = FreqFacet::kRelation;
    ok = q.tier == FreqTier::kGra;
  } else {
    ok = false;
  }
  if (!ok) {
    throw Error(ErrorCode::kUsage,
                "facet '" + facet + "' is not valid for tier '" + f[0] + "'");
  }
  if (f.size() > 2) {
    // Patterns may themselves contain ':' (relation subtypes).
    std::string pattern = f[2];
    for (std::size_t i = 3; i < f.size(); ++i) pattern += ":" + f[i];
    q.pattern = pattern;
  }
  return q;
}

FreqTable freq(const Transcript& t, const FreqQuery& q) {
  bool present = false;
  for (const auto& u : t.utterances) {
    present = present || q.tier == FreqTier::kMain || tier_text(u, q.tier);
  }
  if (!present) throw Error(ErrorCode::kMissingTier, "queried tier is absent");

  std::map<std::string, std::size_t> counts;
  auto add = [&](const std::string& term) {
    if (q.pattern && !text::glob_match(*q.pattern, term)) return;
    ++counts[term];
  };
  for (const auto& u : t.utterances) {
    if (!q.speakers.empty() && !q.speakers.count(u.speaker_code)) continue;
    if (q.tier == FreqTier::kMain) {
      for (const auto& tok : u.tokens) {
        if (is_mor_eligible(tok)) add(text::casefold(tok.target_form()));
      }
      continue;
    }
    const std::string* tier = tier_text(u, q.tier);
    if (tier == nullptr) continue;
    if (q.tier == FreqTier::kGra) {
      for (const auto& e : text::split_ws(*tier)) {
        auto f = text::split(e, '|');
        if (f.size() == 3) add(f[2]);
      }
      continue;
    }
    for (const auto& g : mor_groups(*tier)) {
      for (const auto& w : text::split(g, '~')) {
        auto p = split_mor_word(w);
        if (q.facet == FreqFacet::kLemma) add(p.lemma);
        if (q.facet == FreqFacet::kPos) add(p.pos);
        if (q.facet == FreqFacet::kTag) {
          for (const auto& tag : p.tags) add(tag);
        }
      }
    }
  }
  FreqTable table(counts.begin(), counts.end());
  std::stable_sort(table.begin(), table.end(), [](const auto& a, const auto& b) {
    return a.second > b.second;
  });
  return table;
}

double type_token_ratio(const std::vector<std::string>& sample) {
  if (sample.empty()) return 0.0;
  std::set<std::string> types(sample.begin(), sample.end());
  return static_cast<double>(types.size()) / static_cast<double>(sample.size());
}

std::optional<double> moving_average_ttr(const std::vector<std::string>& sample,
                                         std::size_t window) {
  if (window == 0 || sample.size() < window) return std::nullopt;
  std::unordered_map<std::string, std::size_t> in_window;
  for (std::size_t i = 0; i < window; ++i) ++in_window[sample[i]];
  double sum = static_cast<double>(in_window.size());
  std::size_t windows = 1;
  for (std::size_t i = window; i < sample.size(); ++i) {
    ++in_window[sample[i]];
    auto it = in_window.find(sample[i - window]);
    if (--it->second == 0) in_window.erase(it);
    sum += static_cast<double>(in_window.size());
    ++windows;
  }
  return sum / static_cast<double>(windows) / static_cast<double>(window);
}

MeasureReport measures(const Transcript& t, std::string_view speaker,
                       std::size_t mattr_window) {
  std::vector<const Utterance*> us;
  for (const auto& u : t.utterances) {
    if (u.speaker_code == speaker) us.push_back(&u);
  }
  if (us.empty()) {
    throw Error(ErrorCode::kNoUtterances,
                "speaker '" + std::string(speaker) + "' has no utterances");
  }
  MeasureReport r;
  r.speaker = std::string(speaker);
  r.utterance_count = us.size();

  // Lemmas are used only when every utterance has a %mor tier aligned to its
  // main line.
  std::vector<std::vector<std::string>> groups(us.size());
  bool lemma_based = true;
  for (std::size_t i = 0; i < us.size(); ++i) {
    auto eligible = static_cast<std::size_t>(std::count_if(
        us[i]->tokens.begin(), us[i]->tokens.end(), is_mor_eligible));
    const std::string* mor = tier_text(*us[i], FreqTier::kMor);
    if (mor) groups[i] = mor_groups(*mor);
    if (!mor || groups[i].size() != eligible) lemma_based = false;
  }
  r.lemma_based = lemma_based;

  std::vector<std::string> sample;
  std::size_t morphemes = 0;
  for (std::size_t i = 0; i < us.size(); ++i) {
    const auto& u = *us[i];
    std::size_t words = 0;
    for (const auto& tok : u.tokens) {
      if (!is_mor_eligible(tok)) continue;
      ++words;
      if (!lemma_based) sample.push_back(text::casefold(tok.target_form()));
    }
    r.word_tokens += words;
    bool aligned = !groups[i].empty() && groups[i].size() == words;
    if (!aligned) {
      morphemes += words;
    }
    for (const auto& g : groups[i]) {
      auto ws = text::split(g, '~');
      if (aligned) morphemes += ws.size();
      if (lemma_based) {
        std::vector<std::string> lemmas;
        for (const auto& w : ws) lemmas.push_back(split_mor_word(w).lemma);
        sample.push_back(text::casefold(text::join(lemmas, "~")));
      }
    }
  }
  std::set<std::string> types(sample.begin(), sample.end());
  r.word_types = types.size();
  r.ndw = r.word_types;
  r.ttr = type_token_ratio(sample);
  auto n = static_cast<double>(us.size());
  r.mlu_words = static_cast<double>(r.word_tokens) / n;
  r.mlu_morphemes = static_cast<double>(morphemes) / n;
  r.mattr = moving_average_ttr(sample, mattr_window);
  return r;
}

std::string format_measures_tsv(const std::vector<MeasureReport>& reports) {
  std::string out =
      "speaker\tutterances\tword_tokens\tword_types\tmlu_words\tmlu_morphemes\t"
      "ttr\tndw\tmattr\n";
  for (const auto& r : reports) {
    out += r.speaker + "\t" + std::to_string(r.utterance_count) + "\t" +
           std::to_string(r.word_tokens) + "\t" + std::to_string(r.word_types) +
           "\t" + fmt(r.mlu_words) + "\t" + fmt(r.mlu_morphemes) + "\t" +
           fmt(r.ttr) + "\t" + std::to_string(r.ndw) + "\t" +
           (r.mattr ? fmt(*r.mattr) : std::string("NA")) + "\n";
  }
  return out;
}

std::string format_measures_json(const std::vector<MeasureReport>& reports) {
  nlohmann::ordered_json doc = nlohmann::ordered_json::array();
  for (const auto& r : reports) {
    nlohmann::ordered_json o;
    o["speaker"] = r.speaker;
    o["utterance_count"] = r.utterance_count;
    o["word_tokens"] = r.word_tokens;
    o["word_types"] = r.word_types;
    o["mlu_words"] = r.mlu_words;
    o["mlu_morphemes"] = r.mlu_morphemes;
    o["ttr"] = r.ttr;
    o["ndw"] = r.ndw;
    o["mattr"] = r.mattr ? nlohmann::ordered_json(*r.mattr) : nlohmann::ordered_json();
    o["lemma_based"] = r.lemma_based;
    doc.push_back(std::move(o));
  }
  return doc.dump(2) + "\n";
}

std::string format_freq_tsv(const FreqTable& table) {
  std::string out = "term\tcount\n";
  for (const auto& [term, count] : table) {
    out += term + "\t" + std::to_string(count) + "\n";
  }
  return out;
}

}  // namespace chatud::analysis
