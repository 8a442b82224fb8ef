#include <gtest/gtest.h>

#include <algorithm>

#include "chatud/chat.hpp"
#include "chatud/error.hpp"
#include "chatud/text.hpp"
#include "generators.hpp"

using namespace chatud;

namespace {

const char* kBrownOne =
    "@UTF8\n@Begin\n@Languages:\teng\n@Participants:\tMOT Mother\n"
    "@ID:\teng|demo|MOT|||||Mother|||\n"
    "*MOT:\tbut you don't have a brown one .\n"
    "%mor:\tcconj|but pron|you-Prs-Nom-S2 aux|do-Fin-Ind-Pres-S2~part|not\n"
    "\tverb|have-Inf-S det|a-Ind-Art adj|brown-Pos-S1 noun|one .\n"
    "%gra:\t1|5|CC 2|5|NSUBJ 3|5|AUX 4|5|ADVMOD 5|0|ROOT 6|8|DET 7|8|AMOD 8|5|OBJ\n"
    "\t9|5|PUNCT\n"
    "@End\n";

bool has_code(const Diagnostics& ds, const std::string& code) {
  return std::any_of(ds.begin(), ds.end(), [&](const Diagnostic& d) { return d.code == code; });
}

}  // namespace

TEST(ParseChat, BrownOneBlock) {
  auto t = parse_chat(kBrownOne);
  ASSERT_EQ(t.utterances.size(), 1u);
  const auto& u = t.utterances[0];
  EXPECT_EQ(u.speaker_code, "MOT");
  // 7 surface tokens; don't holds two syntactic words, so 9 positions with
  // the terminator, one per %gra entry
  EXPECT_EQ(u.tokens.size(), 7u);
  EXPECT_EQ(text::split_ws(*u.tier("%gra")).size(), 9u);
  EXPECT_EQ(u.terminator, ".");
  ASSERT_EQ(u.tiers.size(), 2u);
  EXPECT_EQ(u.tiers[0].first, "%mor");
  EXPECT_EQ(u.tiers[1].first, "%gra");
  EXPECT_EQ(text::split_ws(*u.tier("%mor")).size(), 8u);
}

TEST(ParseChat, HeadersOnly) {
  auto t = parse_chat("@Begin\n@Participants:\tCHI Target_Child\n@End\n");
  EXPECT_TRUE(t.utterances.empty());
  ASSERT_EQ(t.participants().size(), 1u);
  EXPECT_EQ(t.participants()[0].code, "CHI");
}

TEST(ParseChat, Errors) {
  auto code_of = [](const char* doc) {
    try {
      parse_chat(doc);
    } catch (const Error& e) {
      return e.code();
    }
    return ErrorCode::kUsage;
  };
  EXPECT_EQ(code_of("@Participants:\tCHI Target_Child\n*CHI:\thi .\n@End\n"),
            ErrorCode::kMalformedHeader);
  EXPECT_EQ(code_of("@Begin\n*CHI:\thi .\n@End\n"), ErrorCode::kMalformedHeader);
  EXPECT_EQ(code_of("@Begin\n@Participants:\tCHI Target_Child\n%mor:\tn|hi .\n@End\n"),
            ErrorCode::kOrphanTier);
  EXPECT_EQ(code_of("@Begin\n@Participants:\tCHI Target_Child\n*CHI:\thi there\n@End\n"),
            ErrorCode::kBadTerminator);
}

TEST(ParseChat, BulletsAndTokens) {
  auto t = parse_chat(
      "@Begin\n@Participants:\tCHI Target_Child\n"
      "*CHI:\t&-um singin(g) tactor [: tractor] ice_cream . \x15" "0_1500\x15\n@End\n");
  const auto& u = t.utterances.at(0);
  ASSERT_TRUE(u.time.has_value());
  EXPECT_EQ(u.time->start_ms, 0);
  EXPECT_EQ(u.time->end_ms, 1500);
  ASSERT_EQ(u.tokens.size(), 4u);
  EXPECT_EQ(u.tokens[0].cls, TokenClass::kFiller);
  EXPECT_EQ(u.tokens[1].spoken(), "singin");
  EXPECT_EQ(u.tokens[1].full_form(), "singing");
  ASSERT_EQ(u.tokens[1].omitted_letters.size(), 1u);
  EXPECT_EQ(u.tokens[1].omitted_letters[0].offset, 6u);
  EXPECT_EQ(u.tokens[1].omitted_letters[0].letters, "g");
  ASSERT_TRUE(u.tokens[2].replacement.has_value());
  EXPECT_EQ(*u.tokens[2].replacement, "tractor");
  EXPECT_EQ(u.tokens[3].compound_parts, (std::vector<std::string>{"ice", "cream"}));
}

TEST(ParseChat, RetraceScope) {
  auto t = parse_chat(
      "@Begin\n@Participants:\tCHI Target_Child\n*CHI:\t<I want> [/] I want it .\n@End\n");
  const auto& toks = t.utterances.at(0).tokens;
  ASSERT_EQ(toks.size(), 5u);
  EXPECT_EQ(toks[0].cls, TokenClass::kRetraceMarked);
  EXPECT_EQ(toks[1].cls, TokenClass::kRetraceMarked);
  EXPECT_EQ(toks[2].cls, TokenClass::kWord);
}

TEST(ParseChat, CrlfBomAndContinuation) {
  std::string doc = "\xEF\xBB\xBF@Begin\r\n@Participants:\tCHI Target_Child\r\n"
                    "*CHI:\tmore\r\n\tball .\r\n@End\r\n";
  auto t = parse_chat(doc);
  ASSERT_EQ(t.utterances.size(), 1u);
  EXPECT_EQ(t.utterances[0].tokens.size(), 2u);
  EXPECT_EQ(serialize_chat(t),
            "@Begin\n@Participants:\tCHI Target_Child\n*CHI:\tmore ball .\n@End\n");
}

TEST(SerializeChat, CanonicalRoundTripIsByteIdentical) {
  EXPECT_EQ(serialize_chat(parse_chat(kBrownOne)), kBrownOne);
}

TEST(SerializeChat, BulletRendering) {
  Transcript t;
  t.headers = {{"Begin", std::nullopt}, {"Participants", "CHI Target_Child"}};
  Utterance u;
  u.speaker_code = "CHI";
  u.tokens = parse_tokens("hi");
  u.terminator = ".";
  u.time = TimeInterval{0, 1500};
  t.utterances.push_back(u);
  t.trailing_headers = {{"End", std::nullopt}};
  auto out = serialize_chat(t);
  EXPECT_NE(out.find("*CHI:\thi . \x15" "0_1500\x15\n"), std::string::npos);
}

TEST(SerializeChat, WrapsLongTiersAt80Columns) {
  std::string words;
  for (int i = 0; i < 30; ++i) words += "doggie ";
  auto t = parse_chat("@Begin\n@Participants:\tCHI Target_Child\n*CHI:\t" + words +
                      ".\n@End\n");
  auto out = serialize_chat(t);
  for (const auto& line : text::split(out, '\n')) {
    // the tab after the speaker code counts as one column here
    EXPECT_LE(text::utf8_length(line), 80u) << line;
  }
  EXPECT_EQ(parse_chat(out), t);
}

TEST(SerializeChat, RandomRoundTrip) {
  gen::Rng rng(7);
  for (int i = 0; i < 50; ++i) {
    auto doc = gen::random_chat_text(rng);
    auto t = parse_chat(doc);
    auto once = serialize_chat(t);
    EXPECT_EQ(parse_chat(once), t) << doc;
    EXPECT_EQ(serialize_chat(parse_chat(once)), once);
    for (const auto& u : t.utterances) {
      for (const auto& tok : u.tokens) {
        EXPECT_EQ(text::join(tok.compound_parts, "_"), tok.surface);
      }
    }
  }
}

TEST(Validate, BrownOneIsClean) {
  EXPECT_TRUE(validate(parse_chat(kBrownOne)).empty());
}

TEST(Validate, RepetitionCode) {
  auto t = parse_chat("@Begin\n@Participants:\tCHI Target_Child\n*CHI:\tno [x 3] .\n@End\n");
  auto ds = validate(t);
  ASSERT_TRUE(has_code(ds, "repetition-code"));
  auto it = std::find_if(ds.begin(), ds.end(),
                         [](const Diagnostic& d) { return d.code == "repetition-code"; });
  EXPECT_EQ(it->message, "repetition code present");
}

TEST(Validate, MorGroupDeleted) {
  std::string doc = kBrownOne;
  auto pos = doc.find("cconj|but ");
  doc.erase(pos, std::string("cconj|but ").size());
  EXPECT_TRUE(has_code(validate(parse_chat(doc)), "mor-alignment"));
}

TEST(Validate, UnknownSpeakerAndPlusCompound) {
  auto t = parse_chat(
      "@Begin\n@Participants:\tCHI Target_Child\n*MOT:\tice+cream .\n@End\n");
  auto ds = validate(t);
  EXPECT_TRUE(has_code(ds, "unknown-speaker"));
  EXPECT_TRUE(has_code(ds, "plus-compound"));
}

TEST(Validate, GeneratedCanonicalFilesWithoutRepetitionAreClean) {
  gen::Rng rng(11);
  int checked = 0;
  for (int i = 0; i < 200 && checked < 50; ++i) {
    auto doc = gen::random_chat_text(rng);
    if (doc.find("[x ") != std::string::npos || doc.find("%mor") != std::string::npos) continue;
    ++checked;
    EXPECT_TRUE(validate(parse_chat(doc)).empty()) << doc;
  }
  EXPECT_GT(checked, 10);
}
