// tests/io_test.cpp

// Copyright 2026  cleanjoint authors

// See ../COPYING for clarification regarding multiple authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#include <gtest/gtest.h>

#include <cstring>
#include <limits>
#include <random>
#include <sstream>
#include <vector>

#include "cleanjoint/io.hpp"
#include "cleanjoint/report.hpp"

using namespace cleanjoint;

namespace {

std::string parse_error(const std::string& text) {
  std::istringstream in(text);
  try {
    read_csv(in, "m.csv");
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::Parse);
    return e.what();
  }
  return "";
}

}  // namespace

TEST(Csv, ReadsWithAndWithoutHeader) {
  std::istringstream plain("0.9,0.1\n0.4, 0.6\r\n\n");
  const auto a = read_csv(plain);
  EXPECT_EQ(a.rows, 2u);
  EXPECT_EQ(a.cols, 2u);
  EXPECT_EQ(a.values, (std::vector<double>{0.9, 0.1, 0.4, 0.6}));
  EXPECT_TRUE(a.header.empty());

  std::istringstream headed("cat,dog\n1e-3,+0.5\n");
  const auto b = read_csv(headed);
  EXPECT_EQ(b.header, (std::vector<std::string>{"cat", "dog"}));
  EXPECT_EQ(b.values, (std::vector<double>{1e-3, 0.5}));
}

TEST(Csv, ErrorsNamePosition) {
  EXPECT_NE(parse_error("0.1,0.2\n0.3,abc\n").find("line 2, column 2"), std::string::npos);
  EXPECT_NE(parse_error("0.1,0.2\n0.3\n").find("line 2"), std::string::npos);
  EXPECT_NE(parse_error("a,b\n0.1,0.2\nx,0.3\n").find("line 3, column 1"), std::string::npos);
}

TEST(Csv, RoundTripsDoublesExactly) {
  std::mt19937_64 gen(5);
  std::vector<double> v;
  for (int i = 0; i < 300; ++i) {
    double d;
    const auto bits = gen();
    std::memcpy(&d, &bits, sizeof d);
    if (std::isfinite(d)) v.push_back(d);
  }
  v.insert(v.end(), {0.1, 1.0 / 3, -0.0, 5e-324, std::numeric_limits<double>::max()});
  v.resize(v.size() / 3 * 3);
  std::ostringstream out;
  write_csv(out, v.size() / 3, 3, v);
  std::istringstream in(out.str());
  const auto t = read_csv(in);
  ASSERT_EQ(t.values.size(), v.size());
  for (std::size_t i = 0; i < v.size(); ++i) EXPECT_EQ(std::memcmp(&t.values[i], &v[i], sizeof(double)), 0) << i;
}

TEST(Labels, ReadHeaderAndErrors) {
  std::istringstream a("label\n0\n1\n 2 \n");
  EXPECT_EQ(read_labels(a), (std::vector<long long>{0, 1, 2}));
  std::istringstream b("0\n1.5\n");
  EXPECT_THROW(read_labels(b), Error);
  std::istringstream c("0,1\n");
  EXPECT_THROW(read_labels(c), Error);
  std::istringstream empty("");
  EXPECT_TRUE(read_labels(empty).empty());
}

TEST(Files, MissingFileIsIoError) {
  try {
    read_csv_file("/nonexistent/probs.csv");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::Io);
    EXPECT_EQ(exit_code(e.kind()), 1);
  }
}

TEST(Checksum, KnownDigests) {
  EXPECT_EQ(fnv1a_hex(""), "cbf29ce484222325");
  EXPECT_EQ(fnv1a_hex("a"), "af63dc4c8601ec8c");
}

TEST(Report, MatricesRoundTripThroughJson) {
  std::mt19937_64 gen(9);
  std::uniform_real_distribution<double> u(0, 1);
  Dense<double> a(3, 4, 0.0);
  for (std::size_t r = 0; r < 3; ++r)
    for (std::size_t c = 0; c < 4; ++c) a(r, c) = u(gen) / 7.0;
  const std::string text = Json{{"m", to_json(a)}}.dump();
  const auto back = dense_from_json(Json::parse(text)["m"]);
  EXPECT_EQ(back, a);
  EXPECT_THROW(dense_from_json(Json::parse("[[1,2],[3]]")), Error);
}
