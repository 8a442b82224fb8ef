#include <gtest/gtest.h>

#include "chatud/text.hpp"

using namespace chatud::text;

TEST(Text, SplitJoinTrim) {
  EXPECT_EQ(split("a,b,,c", ','), (std::vector<std::string>{"a", "b", "", "c"}));
  EXPECT_EQ(split_ws("  a \t b\n"), (std::vector<std::string>{"a", "b"}));
  EXPECT_EQ(join({"a", "b"}, "~"), "a~b");
  EXPECT_EQ(trim("  x y \t"), "x y");
  EXPECT_EQ(collapse_ws(" a   b "), "a b");
}

TEST(Text, Utf8) {
  EXPECT_EQ(utf8_chars("カルト"), (std::vector<std::string>{"カ", "ル", "ト"}));
  EXPECT_EQ(utf8_length("niño"), 4u);
}

TEST(Text, CaseAndPunct) {
  EXPECT_EQ(casefold("Mommy"), "mommy");
  EXPECT_EQ(casefold("ÉCOLE"), "école");
  EXPECT_EQ(strip_punct("\"hello!\""), "hello");
  EXPECT_EQ(strip_punct("don't"), "don't");
  EXPECT_EQ(to_upper_ascii("nsubj:pass"), "NSUBJ:PASS");
}

TEST(Text, Glob) {
  EXPECT_TRUE(glob_match("*COMP", "CCOMP"));
  EXPECT_TRUE(glob_match("a?c", "abc"));
  EXPECT_FALSE(glob_match("a?c", "abbc"));
  EXPECT_TRUE(glob_match("*", ""));
}

TEST(Text, Language) {
  EXPECT_EQ(canonical_language("eng"), "en");
  EXPECT_EQ(canonical_language("fra"), "fr");
  EXPECT_EQ(canonical_language("FR"), "fr");
  EXPECT_TRUE(is_integer("42"));
  EXPECT_FALSE(is_integer("4a"));
}
