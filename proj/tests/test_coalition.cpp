/*
 * Copyright 2026 The causal-explain Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include <gtest/gtest.h>

#include "causal_explain/coalition.hpp"
#include "causal_explain/rational.hpp"

namespace ce = causal_explain;
using ce::Coalition;
using ce::Rational;

TEST(Rational, ParsesDecimalsExactly) {
  EXPECT_EQ(ce::parse_rational("2.5"), Rational(5, 2));
  EXPECT_EQ(ce::parse_rational("0.1") * 10, Rational(1));
  EXPECT_EQ(ce::parse_rational("-3"), Rational(-3));
  EXPECT_EQ(ce::parse_rational("1e-3"), Rational(1, 1000));
  EXPECT_EQ(ce::parse_rational("1.25E2"), Rational(125));
  EXPECT_EQ(ce::parse_rational(" 7/14 "), Rational(1, 2));
}

TEST(Rational, RejectsMalformedText) {
  for (const char* text : {"", "abc", "1.2.3", "1e", "1/0", "--1", "0x10"}) {
    EXPECT_THROW(ce::parse_rational(text), ce::Error) << text;
  }
}

TEST(Rational, Formatting) {
  EXPECT_EQ(ce::to_string(Rational(3, 2)), "3/2");
  EXPECT_EQ(ce::to_string(Rational(4, 2)), "2");
  EXPECT_EQ(ce::to_string(Rational(0)), "0");
  EXPECT_EQ(ce::pow2_inverse(4), Rational(1, 16));
  EXPECT_EQ(ce::factorial(5), 120);
}

TEST(Coalition, BasicOperations) {
  const Coalition s = Coalition::of(5, {0, 2});
  EXPECT_EQ(s.size(), 2u);
  EXPECT_TRUE(s.contains(2));
  EXPECT_FALSE(s.contains(1));
  EXPECT_EQ(ce::to_string(s), "{1,3}");
  EXPECT_EQ(s.with(4).mask(), 0b10101u);
  EXPECT_EQ(s.without(0), Coalition::of(5, {2}));
  EXPECT_EQ(s.complement(), Coalition::of(5, {1, 3, 4}));
  EXPECT_TRUE(s.subset_of(Coalition::full(5)));
  EXPECT_TRUE(Coalition::empty(5).subset_of(s));
  EXPECT_EQ((s | Coalition::of(5, {1})).members(), (std::vector<std::size_t>{0, 1, 2}));
  EXPECT_EQ((s - Coalition::of(5, {2})), Coalition::of(5, {0}));
}

TEST(Coalition, Capacity) {
  EXPECT_NO_THROW(Coalition::full(64));
  EXPECT_EQ(Coalition::full(64).size(), 64u);
  try {
    Coalition::full(65);
    FAIL();
  } catch (const ce::Error& e) {
    EXPECT_EQ(e.code(), ce::ErrorCode::kCapacity);
    EXPECT_EQ(e.exit_code(), 3);
  }
  EXPECT_THROW(Coalition::of(3, {3}), ce::Error);
  EXPECT_THROW(Coalition(3, 0b1000), ce::Error);
}
