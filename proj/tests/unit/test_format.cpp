// SPDX-License-Identifier: Apache-2.0
//
// diffcap: classical capacities of diffraction-limited optical links
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#include <gtest/gtest.h>

#include <charconv>
#include <cmath>
#include <limits>
#include <random>
#include <string>

#include "diffcap/error.hpp"
#include "diffcap/format.hpp"

namespace diffcap {
namespace {

TEST(FormatDouble, ShortestRoundTrip) {
  EXPECT_EQ(format_double(0.1), "0.1");
  EXPECT_EQ(format_double(20.0), "20");
  EXPECT_EQ(format_double(-2.5e-300), "-2.5e-300");
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-300, 300);
  for (int i = 0; i < 2000; ++i) {
    const double v = std::pow(10.0, u(rng)) * (i % 2 ? 1 : -1);
    const std::string s = format_double(v);
    double back = 0;
    std::from_chars(s.data(), s.data() + s.size(), back);
    EXPECT_EQ(back, v) << s;
  }
}

TEST(FormatDouble, RejectsNonFinite) {
  EXPECT_THROW(format_double(std::numeric_limits<double>::infinity()), Error);
  EXPECT_THROW(format_double(std::nan("")), Error);
}

TEST(FormatCsv, HeaderRowsAndLineEndings) {
  const std::string csv = format_csv({"rank", "eta"}, {{0, 1}, {1, 0.25}});
  EXPECT_EQ(csv, "rank,eta\n0,1\n1,0.25\n");
  EXPECT_EQ(csv.find('\r'), std::string::npos);
  EXPECT_EQ(format_csv({"a"}, {}), "a\n");
}

TEST(FormatCsv, RowWidthChecked) { EXPECT_THROW(format_csv({"a", "b"}, {{1.0}}), Error); }

}  // namespace
}  // namespace diffcap
