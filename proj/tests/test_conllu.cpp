#include <gtest/gtest.h>

#include <fstream>
#include <sstream>

#include "chatud/conllu.hpp"
#include "chatud/error.hpp"

using namespace chatud;
using namespace chatud::ud;

namespace {

std::string fixture(const std::string& name) {
  std::ifstream in(std::string(CHATUD_FIXTURES) + "/" + name);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

ErrorCode code_of(const std::string& text) {
  try {
    parse_conllu(text);
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::kUsage;
}

std::string row(const std::string& id, const std::string& form, const std::string& head,
                const std::string& rel) {
  return id + "\t" + form + "\t" + form + "\tX\t_\t_\t" + head + "\t" + rel + "\t_\t_\n";
}

}  // namespace

TEST(ParseConllu, BrownOne) {
  auto ss = parse_conllu(fixture("brown_one.conllu"));
  ASSERT_EQ(ss.size(), 1u);
  const auto& s = ss[0];
  EXPECT_EQ(s.words.size(), 9u);
  ASSERT_EQ(s.mwt_spans.size(), 1u);
  EXPECT_EQ(s.mwt_spans[0], (MwtSpan{3, 4, "don't"}));
  EXPECT_EQ(s.word(5).deprel, "root");
  EXPECT_EQ(s.word(5).head, 0u);
  EXPECT_EQ(s.word(2).feats.size(), 4u);
  ASSERT_EQ(s.comments.size(), 1u);
  EXPECT_EQ(s.comments[0], "text = but you don't have a brown one .");
}

TEST(ParseConllu, EmptyInputAndMultipleSentences) {
  EXPECT_TRUE(parse_conllu("").empty());
  auto two = row("1", "a", "0", "root") + "\n" + row("1", "b", "0", "root") + "\n";
  EXPECT_EQ(parse_conllu(two).size(), 2u);
}

TEST(ParseConllu, SkipsEmptyNodesAndBom) {
  auto text = "\xEF\xBB\xBF" + row("1", "a", "0", "root") +
              "1.1\tx\tx\tX\t_\t_\t_\t_\t0:root\t_\n" + row("2", "b", "1", "dep") + "\n";
  auto ss = parse_conllu(text);
  ASSERT_EQ(ss.size(), 1u);
  EXPECT_EQ(ss[0].words.size(), 2u);
}

TEST(ParseConllu, Errors) {
  EXPECT_EQ(code_of("1\ta\ta\tX\t_\t_\t0\troot\t_\n\n"), ErrorCode::kBadColumnCount);
  EXPECT_EQ(code_of(row("1", "a", "0", "root") + row("3", "b", "1", "dep") + "\n"),
            ErrorCode::kNonContiguousIds);
  EXPECT_EQ(code_of(row("1", "a", "2", "dep") + row("2", "b", "1", "dep") + "\n"),
            ErrorCode::kCyclicHeads);
  EXPECT_EQ(code_of(row("1", "a", "0", "root") + row("2", "b", "7", "dep") + "\n"),
            ErrorCode::kBadHead);
  EXPECT_EQ(code_of(row("1", "a", "0", "root") + row("2", "b", "0", "root") + "\n"),
            ErrorCode::kBadHead);
}

TEST(ParseConllu, RoundTrip) {
  auto text = fixture("brown_one.conllu");
  auto ss = parse_conllu(text);
  EXPECT_EQ(serialize_conllu(ss), text);
  EXPECT_EQ(parse_conllu(serialize_conllu(ss)), ss);
}

TEST(Feats, ParseFormat) {
  auto f = parse_feats("Case=Nom|Number=Sing");
  ASSERT_EQ(f.size(), 2u);
  EXPECT_EQ(f[1], (std::pair<std::string, std::string>{"Number", "Sing"}));
  EXPECT_EQ(format_feats(f), "Case=Nom|Number=Sing");
  EXPECT_TRUE(parse_feats("_").empty());
  EXPECT_EQ(format_feats({}), "_");
}
