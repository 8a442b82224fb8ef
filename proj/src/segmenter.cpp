#include "chatud/segmenter.hpp"

#include <fstream>
#include <sstream>

#include "chatud/error.hpp"
#include "chatud/text.hpp"

namespace chatud::seg {

namespace {

std::string_view terminator_for(SegLabel l) {
  switch (l) {
    case SegLabel::kEndInterrogative: return "?";
    case SegLabel::kEndExclamatory: return "!";
    default: return ".";
  }
}

SegLabel end_for(std::string_view terminator) {
  if (terminator == "?") return SegLabel::kEndInterrogative;
  if (terminator == "!") return SegLabel::kEndExclamatory;
  return SegLabel::kEndDeclarative;
}

}  // namespace

std::optional<SegLabel> label_from_int(int v) {
  if (v < 0 || v > 5) return std::nullopt;
  return static_cast<SegLabel>(v);
}

bool is_end(SegLabel l) {
  return l == SegLabel::kEndDeclarative || l == SegLabel::kEndInterrogative ||
         l == SegLabel::kEndExclamatory;
}

std::vector<Utterance> decode_stream(const LabeledStream& s,
                                     std::string_view speaker_code) {
  std::vector<Utterance> out;
  std::optional<Utterance> cur;
  auto close = [&](std::string_view terminator) {
    cur->terminator = std::string(terminator);
    classify_tokens(cur->tokens);
    out.push_back(std::move(*cur));
    cur.reset();
  };
  std::size_t n = std::min(s.tokens.size(), s.labels.size());
  for (std::size_t i = 0; i < n; ++i) {
    SegLabel l = s.labels[i];
    if (l == SegLabel::kStart && cur && !cur->tokens.empty()) close(".");
    if (!cur) {
      cur.emplace();
      cur->speaker_code = std::string(speaker_code);
    }
    cur->tokens.push_back(MainToken::from_surface(s.tokens[i]));
    if (l == SegLabel::kCommaAfter) {
      cur->tokens.push_back(MainToken::from_surface(","));
    } else if (is_end(l)) {
      close(terminator_for(l));
    }
  }
  if (cur) close(".");
  return out;
}

LabeledStream encode_utterances(const std::vector<Utterance>& us) {
  LabeledStream s;
  for (const auto& u : us) {
    if (!is_basic_terminator(u.terminator)) {
      throw Error(ErrorCode::kUnsupportedTerminator,
                  "cannot encode terminator '" + u.terminator + "'", u.line);
    }
    std::size_t first = s.tokens.size();
    for (const auto& tok : u.tokens) {
      if (tok.surface == ",") {
        if (s.tokens.size() > first) s.labels.back() = SegLabel::kCommaAfter;
        continue;
      }
      s.tokens.push_back(tok.surface);
      s.labels.push_back(s.tokens.size() == first + 1 ? SegLabel::kStart
                                                      : SegLabel::kMiddle);
    }
    if (s.tokens.size() > first) s.labels.back() = end_for(u.terminator);
  }
  return s;
}

Diagnostics validate_stream(const LabeledStream& s) {
  Diagnostics d;
  if (s.tokens.size() != s.labels.size()) {
    d.push_back({"", 0, "label-count",
                 std::to_string(s.tokens.size()) + " tokens but " +
                     std::to_string(s.labels.size()) + " labels",
                 Severity::kError});
  }
  bool open = false;
  for (std::size_t i = 0; i < s.labels.size(); ++i) {
    SegLabel l = s.labels[i];
    if (l == SegLabel::kStart) {
      if (open) {
        d.push_back({"", i + 1, "start-after-start",
                     "Start label inside an open utterance",
                     Severity::kWarning});
      }
      open = true;
    } else if (is_end(l)) {
      open = false;
    }
  }
  return d;
}

std::vector<SegLabel> parse_labels(std::string_view input) {
  std::vector<SegLabel> out;
  std::size_t number = 0;
  for (const auto& raw : text::split(input, '\n')) {
    ++number;
    auto line = text::trim(raw);
    if (line.empty()) continue;
    std::optional<SegLabel> l;
    if (text::is_integer(line) && line.size() < 4) {
      l = label_from_int(std::stoi(std::string(line)));
    }
    if (!l) {
      throw Error(ErrorCode::kBadLabel,
                  "label '" + std::string(line) + "' is not in 0..5", number);
    }
    out.push_back(*l);
  }
  return out;
}

FileLabelProvider::FileLabelProvider(std::filesystem::path path)
    : path_(std::move(path)) {}

std::vector<SegLabel> FileLabelProvider::labels(
    const std::vector<std::string>&) const {
  std::ifstream in(path_, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot read " + path_.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_labels(ss.str());
}

std::vector<Utterance> segment_with_provider(
    const std::vector<std::string>& tokens, const LabelProvider& provider,
    std::string_view speaker_code) {
  auto labels = provider.labels(tokens);
  if (labels.size() != tokens.size()) {
    throw Error(ErrorCode::kProviderLengthMismatch,
                "provider returned " + std::to_string(labels.size()) +
                    " labels for " + std::to_string(tokens.size()) + " tokens");
  }
  return decode_stream({tokens, std::move(labels)}, speaker_code);
}

}  // namespace chatud::seg
