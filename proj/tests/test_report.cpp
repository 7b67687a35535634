#include <gtest/gtest.h>

#include <cmath>
#include <cstdlib>
#include <limits>
#include <sstream>

#include "zeroscope/report.hpp"

using namespace zeroscope::report;

TEST(Csv, QuotesOnlyWhenNeeded) {
  EXPECT_EQ(csv_field("plain"), "plain");
  EXPECT_EQ(csv_field(""), "");
  EXPECT_EQ(csv_field("a,b"), "\"a,b\"");
  EXPECT_EQ(csv_field("say \"hi\""), "\"say \"\"hi\"\"\"");
  EXPECT_EQ(csv_field("line\nbreak"), "\"line\nbreak\"");
  EXPECT_EQ(csv_field("cr\r"), "\"cr\r\"");
}

TEST(Csv, RowsEndWithCrlf) {
  std::ostringstream os;
  CsvWriter w(os);
  w.row({"q", "char", "note"});
  w.row({"5", "5:2", "x,y"});
  EXPECT_EQ(os.str(), "q,char,note\r\n5,5:2,\"x,y\"\r\n");
}

TEST(Numbers, RoundTrip) {
  for (double v : {0.1, 1.0 / 3.0, -7.20748, 1e-300, 6.020948904697597, 2.0}) {
    EXPECT_EQ(std::strtod(format_double(v).c_str(), nullptr), v);
  }
  EXPECT_EQ(format_double(2.0), "2");
  EXPECT_EQ(format_double(std::numeric_limits<double>::infinity()), "inf");
  EXPECT_TRUE(number(std::nan("")).is_null());
  EXPECT_EQ(number(1.5).get<double>(), 1.5);
}

TEST(Plot, HeaderAndColumns) {
  std::ostringstream os;
  write_plot_data(os, {"t", "z"}, {{0.5, 1.0}, {1.0, -2.25}});
  EXPECT_EQ(os.str(), "# t z\n0.5 1\n1 -2.25\n");
}

TEST(Errors, DocumentShape) {
  const auto j = error_document("domain", "bad q");
  EXPECT_EQ(j["error"]["kind"], "domain");
  EXPECT_EQ(j["error"]["message"], "bad q");
  std::ostringstream os;
  emit("-", j.dump(), os);
  EXPECT_EQ(json::parse(os.str()), j);
  EXPECT_THROW(emit("/nonexistent-dir/x.json", "{}", os), zeroscope::resource_error);
}
