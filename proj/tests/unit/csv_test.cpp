#include <gtest/gtest.h>

#include "steer/csv.hpp"
#include "steer/error.hpp"

using steer::csv::parse;

TEST(Csv, SplitsSimpleRecords) {
  const auto r = parse("a,b\n1,2\n");
  ASSERT_EQ(r.size(), 2u);
  EXPECT_EQ(r[0], (steer::csv::Record{"a", "b"}));
  EXPECT_EQ(r[1], (steer::csv::Record{"1", "2"}));
}

TEST(Csv, HandlesQuotesAndEmbeddedDelimiters) {
  const auto r = parse("name,note\n\"x, y\",\"say \"\"hi\"\"\"\n\"multi\nline\",z\n");
  ASSERT_EQ(r.size(), 3u);
  EXPECT_EQ(r[1][0], "x, y");
  EXPECT_EQ(r[1][1], "say \"hi\"");
  EXPECT_EQ(r[2][0], "multi\nline");
}

TEST(Csv, CrlfAndMissingFinalNewline) {
  const auto r = parse("a,b\r\n1,2\r\n3,4");
  ASSERT_EQ(r.size(), 3u);
  EXPECT_EQ(r[2], (steer::csv::Record{"3", "4"}));
}

TEST(Csv, SkipsBlankLinesAndBom) {
  const auto r = parse("\xEF\xBB\xBF" "a\n\n1\n\n");
  ASSERT_EQ(r.size(), 2u);
  EXPECT_EQ(r[0][0], "a");
}

TEST(Csv, KeepsEmptyFields) {
  const auto r = parse("a,b,c\n,,\n");
  ASSERT_EQ(r.size(), 2u);
  EXPECT_EQ(r[1], (steer::csv::Record{"", "", ""}));
}

TEST(Csv, EmptyInput) { EXPECT_TRUE(parse("").empty()); }

TEST(Csv, RejectsUnterminatedQuote) {
  try {
    parse("a\n\"open\n");
    FAIL();
  } catch (const steer::Error& e) {
    EXPECT_EQ(e.code(), steer::ErrorCode::UnparseableCell);
  }
}

TEST(Csv, RejectsStrayQuote) { EXPECT_THROW(parse("a\nx\"y\n"), steer::Error); }

TEST(Csv, EscapeRoundTrips) {
  const std::vector<std::string> fields = {"plain", "with,comma", "with \"quote\"", "two\nlines", ""};
  std::string line;
  for (std::size_t i = 0; i < fields.size(); ++i) line += (i ? "," : "") + steer::csv::escape(fields[i]);
  const auto r = parse("h1,h2,h3,h4,h5\n" + line + "\n");
  ASSERT_EQ(r.size(), 2u);
  EXPECT_EQ(r[1], fields);
  EXPECT_EQ(steer::csv::escape("plain"), "plain");
}
