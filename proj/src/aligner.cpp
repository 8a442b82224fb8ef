#include "chatud/aligner.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>

#include <nlohmann/json.hpp>

#include "chatud/error.hpp"
#include "chatud/text.hpp"

namespace chatud::align {

namespace {

using nlohmann::json;

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot read " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

enum Step : unsigned char { kDiag = 0, kUp = 1, kLeft = 2 };

std::vector<std::string> alignable_forms(const Utterance& u) {
  std::vector<std::string> forms;
  for (const auto& tok : u.tokens) {
    if (is_alignable(tok)) forms.push_back(comparable_form(tok.target_form()));
  }
  return forms;
}

}  // namespace

Backplate parse_backplate(std::string_view text) {
  Backplate b;
  try {
    auto doc = json::parse(text);
    if (!doc.is_array()) {
      throw Error(ErrorCode::kBadBackplate, "backplate must be a JSON array");
    }
    for (const auto& e : doc) {
      BackplateToken t{e.at("surface").get<std::string>(),
                       e.at("start_ms").get<std::int64_t>(),
                       e.at("end_ms").get<std::int64_t>()};
      if (t.start_ms < 0 || t.start_ms > t.end_ms) {
        throw Error(ErrorCode::kBadBackplate,
                    "bad interval for backplate token '" + t.surface + "'");
      }
      if (!b.tokens.empty() && t.start_ms < b.tokens.back().start_ms) {
        throw Error(ErrorCode::kBadBackplate,
                    "backplate start times decrease at '" + t.surface + "'");
      }
      b.tokens.push_back(std::move(t));
    }
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kBadBackplate, e.what());
  }
  return b;
}

Backplate load_backplate(const std::filesystem::path& path) {
  return parse_backplate(read_file(path));
}

std::string serialize_backplate(const Backplate& b) {
  json doc = json::array();
  for (const auto& t : b.tokens) {
    doc.push_back(
        {{"surface", t.surface}, {"start_ms", t.start_ms}, {"end_ms", t.end_ms}});
  }
  return doc.dump(1) + "\n";
}

std::vector<AlignOp> align_sequences(const std::vector<std::string>& gold,
                                     const std::vector<std::string>& silver) {
  const std::size_t n = gold.size(), m = silver.size();
  const std::size_t w = m + 1;
  std::vector<std::uint32_t> prev(w), cur(w);
  std::vector<unsigned char> step((n + 1) * w, kDiag);
  for (std::size_t j = 0; j <= m; ++j) {
    prev[j] = static_cast<std::uint32_t>(j);
    step[j] = kLeft;
  }
  for (std::size_t i = 1; i <= n; ++i) {
    cur[0] = static_cast<std::uint32_t>(i);
    step[i * w] = kUp;
    for (std::size_t j = 1; j <= m; ++j) {
      std::uint32_t diag = prev[j - 1] + (gold[i - 1] == silver[j - 1] ? 0 : 1);
      std::uint32_t up = prev[j] + 1;
      std::uint32_t left = cur[j - 1] + 1;
      std::uint32_t best = diag;
      unsigned char s = kDiag;
      if (up < best) best = up, s = kUp;
      if (left < best) best = left, s = kLeft;
      cur[j] = best;
      step[i * w + j] = s;
    }
    std::swap(prev, cur);
  }
  std::vector<AlignOp> ops;
  std::size_t i = n, j = m;
  while (i > 0 || j > 0) {
    unsigned char s = (i == 0) ? static_cast<unsigned char>(kLeft)
                      : (j == 0) ? static_cast<unsigned char>(kUp)
                                 : step[i * w + j];
    if (s == kDiag) {
      --i, --j;
      ops.push_back({gold[i] == silver[j] ? OpKind::kMatch : OpKind::kSubstitute,
                     i, j});
    } else if (s == kUp) {
      --i;
      ops.push_back({OpKind::kDelete, i, std::nullopt});
    } else {
      --j;
      ops.push_back({OpKind::kInsert, std::nullopt, j});
    }
  }
  std::reverse(ops.begin(), ops.end());
  return ops;
}

std::size_t alignment_cost(const std::vector<AlignOp>& ops) {
  return static_cast<std::size_t>(
      std::count_if(ops.begin(), ops.end(),
                    [](const AlignOp& op) { return op.kind != OpKind::kMatch; }));
}

std::string comparable_form(std::string_view form) {
  return text::casefold(text::strip_punct(form));
}

Transcript recover_utterance_times(const Transcript& t, const Backplate& b,
                                   std::int64_t pad_ms) {
  std::vector<std::string> gold;
  std::vector<std::size_t> owner;
  for (std::size_t u = 0; u < t.utterances.size(); ++u) {
    for (auto& f : alignable_forms(t.utterances[u])) {
      gold.push_back(std::move(f));
      owner.push_back(u);
    }
  }
  std::vector<std::string> silver;
  for (const auto& tok : b.tokens) silver.push_back(comparable_form(tok.surface));

  const std::size_t nu = t.utterances.size();
  std::vector<std::optional<TimeInterval>> raw(nu);
  for (const auto& op : align_sequences(gold, silver)) {
    if (op.kind != OpKind::kMatch && op.kind != OpKind::kSubstitute) continue;
    const auto& bt = b.tokens[*op.backplate_index];
    auto& slot = raw[owner[*op.gold_index]];
    if (!slot) {
      slot = TimeInterval{bt.start_ms, bt.end_ms};
    } else {
      slot->start_ms = std::min(slot->start_ms, bt.start_ms);
      slot->end_ms = std::max(slot->end_ms, bt.end_ms);
    }
  }
  if (std::none_of(raw.begin(), raw.end(), [](const auto& r) { return r; })) {
    throw Error(ErrorCode::kNoAlignments,
                "no transcript token aligns with the backplate");
  }

  std::vector<std::optional<TimeInterval>> padded(nu);
  for (std::size_t u = 0; u < nu; ++u) {
    if (raw[u]) {
      padded[u] = TimeInterval{std::max<std::int64_t>(0, raw[u]->start_ms - pad_ms),
                               raw[u]->end_ms + pad_ms};
    }
  }
  std::int64_t last_ts = 0;
  for (const auto& tok : b.tokens) last_ts = std::max(last_ts, tok.end_ms);

  Transcript out = t;
  for (std::size_t u = 0; u < nu; ++u) {
    if (padded[u]) {
      out.utterances[u].time = padded[u];
      continue;
    }
    std::int64_t start = 0, end = last_ts;
    for (std::size_t k = u; k-- > 0;) {
      if (padded[k]) {
        start = padded[k]->end_ms;
        break;
      }
    }
    for (std::size_t k = u + 1; k < nu; ++k) {
      if (padded[k]) {
        end = padded[k]->start_ms;
        break;
      }
    }
    if (start > end) std::swap(start, end);
    out.utterances[u].time = TimeInterval{start, end};
  }
  return out;
}

Path dtw_path(const AttentionMatrix& cost) {
  check_matrix(cost);
  const std::size_t R = cost.rows, C = cost.cols;
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> acc(R * C, inf);
  auto A = [&](std::size_t r, std::size_t c) -> double& { return acc[r * C + c]; };
  for (std::size_t r = 0; r < R; ++r) {
    for (std::size_t c = 0; c < C; ++c) {
      double best = 0.0;
      if (r > 0 || c > 0) {
        best = inf;
        if (r > 0 && c > 0) best = std::min(best, A(r - 1, c - 1));
        if (r > 0) best = std::min(best, A(r - 1, c));
        if (c > 0) best = std::min(best, A(r, c - 1));
      }
      A(r, c) = best + cost.at(r, c);
    }
  }
  Path path;
  std::size_t r = R - 1, c = C - 1;
  path.emplace_back(r, c);
  while (r > 0 || c > 0) {
    if (r == 0) {
      --c;
    } else if (c == 0) {
      --r;
    } else {
      double d = A(r - 1, c - 1), up = A(r - 1, c), left = A(r, c - 1);
      if (d <= up && d <= left) {
        --r, --c;
      } else if (up <= left) {
        --r;
      } else {
        --c;
      }
    }
    path.emplace_back(r, c);
  }
  std::reverse(path.begin(), path.end());
  return path;
}

double path_cost(const AttentionMatrix& cost, const Path& p) {
  double sum = 0.0;
  for (auto [r, c] : p) sum += cost.at(r, c);
  return sum;
}

AttentionMatrix parse_attention(std::string_view text) {
  std::istringstream in{std::string(text)};
  long rows = 0, cols = 0;
  if (!(in >> rows >> cols) || rows < 1 || cols < 1) {
    throw Error(ErrorCode::kBadMatrix, "attention header must be 'rows cols'");
  }
  AttentionMatrix m(static_cast<std::size_t>(rows), static_cast<std::size_t>(cols));
  for (auto& v : m.values) {
    if (!(in >> v)) {
      throw Error(ErrorCode::kBadMatrix, "attention file has too few values");
    }
  }
  std::string extra;
  if (in >> extra) {
    throw Error(ErrorCode::kBadMatrix, "attention file has too many values");
  }
  check_matrix(m);
  return m;
}

AttentionMatrix load_attention(const std::filesystem::path& path) {
  return parse_attention(read_file(path));
}

std::string serialize_attention(const AttentionMatrix& m) {
  std::ostringstream out;
  out << m.rows << ' ' << m.cols << '\n' << std::setprecision(17);
  for (std::size_t r = 0; r < m.rows; ++r) {
    for (std::size_t c = 0; c < m.cols; ++c) {
      if (c) out << ' ';
      out << m.at(r, c);
    }
    out << '\n';
  }
  return out.str();
}

TokenGroupMap parse_token_groups(std::string_view text) {
  TokenGroupMap g;
  try {
    auto doc = json::parse(text);
    if (!doc.is_array()) {
      throw Error(ErrorCode::kBadMatrix, "token groups must be a JSON array");
    }
    for (const auto& e : doc) {
      auto start = e.at("row_start").get<std::int64_t>();
      auto end = e.at("row_end_exclusive").get<std::int64_t>();
      if (start < 0 || end < start) {
        throw Error(ErrorCode::kBadMatrix, "token group range runs backwards");
      }
      if (!g.groups.empty() &&
          static_cast<std::size_t>(start) < g.groups.back().row_end) {
        throw Error(ErrorCode::kBadMatrix, "token groups overlap");
      }
      g.groups.push_back({e.at("form").get<std::string>(),
                          static_cast<std::size_t>(start),
                          static_cast<std::size_t>(end)});
    }
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kBadMatrix, e.what());
  }
  return g;
}

TokenGroupMap load_token_groups(const std::filesystem::path& path) {
  return parse_token_groups(read_file(path));
}

std::vector<WordTiming> align_words(const std::vector<std::string>& forms,
                                    const AttentionMatrix& m,
                                    const TokenGroupMap& g,
                                    std::int64_t frame_ms,
                                    std::int64_t utt_start_ms, int kernel) {
  check_matrix(m);
  if (frame_ms <= 0) throw Error(ErrorCode::kUsage, "frame_ms must be positive");
  if (forms.size() != g.groups.size()) {
    throw Error(ErrorCode::kLengthMismatch,
                std::to_string(forms.size()) + " forms but " +
                    std::to_string(g.groups.size()) + " token groups");
  }
  for (const auto& grp : g.groups) {
    if (grp.row_end <= grp.row_start) {
      throw Error(ErrorCode::kEmptyGroup,
                  "form '" + grp.form + "' maps to no decoder rows");
    }
    if (grp.row_end > m.rows) {
      throw Error(ErrorCode::kBadMatrix,
                  "token group for '" + grp.form + "' exceeds matrix rows");
    }
  }
  AttentionMatrix cost = median_filter_rows(mean_center(m), kernel);
  for (auto& v : cost.values) v = -v;
  auto path = dtw_path(cost);

  std::vector<std::size_t> lo(m.rows, std::numeric_limits<std::size_t>::max());
  std::vector<std::size_t> hi(m.rows, 0);
  for (auto [r, c] : path) {
    lo[r] = std::min(lo[r], c);
    hi[r] = std::max(hi[r], c);
  }
  std::vector<WordTiming> out;
  for (std::size_t k = 0; k < forms.size(); ++k) {
    const auto& grp = g.groups[k];
    std::size_t first = lo[grp.row_start], last = hi[grp.row_start];
    for (std::size_t r = grp.row_start; r < grp.row_end; ++r) {
      first = std::min(first, lo[r]);
      last = std::max(last, hi[r]);
    }
    auto s = static_cast<std::int64_t>(first) * frame_ms + utt_start_ms;
    auto e = static_cast<std::int64_t>(last + 1) * frame_ms + utt_start_ms;
    out.push_back({forms[k], {s, e}});
  }
  return out;
}

Transcript recover_word_times(
    const Transcript& t,
    const std::vector<std::optional<UtteranceAttention>>& attention,
    const WordPassOptions& opts, Diagnostics* diags) {
  Transcript out = t;
  const long n = static_cast<long>(
      std::min(attention.size(), out.utterances.size()));
  std::vector<std::string> failures(static_cast<std::size_t>(n));

#pragma omp parallel for schedule(dynamic)
  for (long i = 0; i < n; ++i) {
    auto idx = static_cast<std::size_t>(i);
    const auto& att = attention[idx];
    if (!att) continue;
    auto& u = out.utterances[idx];
    try {
      std::vector<std::string> forms;
      for (const auto& tok : u.tokens) {
        if (is_alignable(tok)) forms.push_back(tok.surface);
      }
      std::int64_t start = u.time ? u.time->start_ms : 0;
      auto words = align_words(forms, att->matrix, att->groups, opts.frame_ms,
                               start, opts.kernel);
      u.set_tier("%wor", format_wor_tier(words, u.terminator));
      if (opts.tighten && !words.empty()) {
        u.time = TimeInterval{words.front().interval.start_ms,
                              words.back().interval.end_ms};
      }
    } catch (const std::exception& e) {
      failures[idx] = e.what();
    }
  }
  for (std::size_t i = 0; i < failures.size(); ++i) {
    if (!failures[i].empty()) {
      report(diags, "word-alignment",
             "utterance " + std::to_string(i) + ": " + failures[i],
             t.utterances[i].line);
    }
  }
  return out;
}

std::string format_wor_tier(const std::vector<WordTiming>& words,
                            std::string_view terminator) {
  std::vector<std::string> parts;
  for (const auto& w : words) {
    parts.push_back(w.form + " " + format_bullet(w.interval));
  }
  parts.emplace_back(terminator);
  return text::join(parts, " ");
}

}  // namespace chatud::align
