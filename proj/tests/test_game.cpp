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

#include <random>

#include "causal_explain/axioms.hpp"
#include "causal_explain/game.hpp"
#include "oracles.hpp"

namespace ce = causal_explain;
using ce::Coalition;
using ce::Game;
using ce::Rational;

namespace {

std::vector<bool> table_of(const Game& g) {
  std::vector<bool> out;
  for (std::uint64_t s = 0; s <= ce::full_mask(g.size()); ++s) out.push_back(g.wins(s));
  return out;
}

}  // namespace

TEST(WeightedVoting, WinningCoalitions) {
  const Game g = ce::make_weighted_voting({1, 1, 2}, 2);
  EXPECT_EQ(g.kind(), ce::GameKind::kWeightedVoting);
  EXPECT_FALSE(g(Coalition::empty(3)));
  EXPECT_FALSE(g(Coalition::of(3, {0})));
  EXPECT_TRUE(g(Coalition::of(3, {0, 1})));
  EXPECT_TRUE(g(Coalition::of(3, {2})));
}

TEST(WeightedVoting, FractionalWeights) {
  const Game g = ce::make_weighted_voting({ce::parse_rational("0.5"), ce::parse_rational("0.25")}, ce::parse_rational("0.75"));
  EXPECT_FALSE(g(Coalition::of(2, {0})));
  EXPECT_TRUE(g(Coalition::full(2)));
}

TEST(WeightedVoting, HugeWeightsUseBigIntegers) {
  const Rational big = ce::parse_rational("123456789012345678901234567890");
  const Game g = ce::make_weighted_voting({big, big, Rational(1)}, big * 2);
  EXPECT_TRUE(g(Coalition::of(3, {0, 1})));
  EXPECT_FALSE(g(Coalition::of(3, {0, 2})));
}

TEST(WeightedVoting, RejectsInvalidInput) {
  EXPECT_THROW(ce::make_weighted_voting({1, -1}, 1), ce::Error);
  EXPECT_THROW(ce::make_weighted_voting({1, 1}, 0), ce::Error);
  EXPECT_THROW(ce::make_weighted_voting({}, 1), ce::Error);
}

TEST(TruthTable, RejectsNonMonotoneTable) {
  // v({1}) = 1 but v({1,2}) = 0.
  try {
    ce::make_truth_table(2, {false, true, false, false});
    FAIL();
  } catch (const ce::Error& e) {
    EXPECT_EQ(e.code(), ce::ErrorCode::kInvalidGame);
    EXPECT_NE(std::string(e.what()).find("{1}"), std::string::npos);
    EXPECT_NE(std::string(e.what()).find("{1,2}"), std::string::npos);
  }
}

TEST(TruthTable, RejectsWinningEmptySetAndBadSize) {
  EXPECT_THROW(ce::make_truth_table(1, {true, true}), ce::Error);
  EXPECT_THROW(ce::make_truth_table(2, {false, true}), ce::Error);
}

TEST(TruthTable, TabulateRoundTrips) {
  const Game g = ce::make_weighted_voting({3, 1, 1, 1}, 3);
  const Game t = ce::tabulate(g);
  EXPECT_TRUE(ce::extensionally_equal(g, t));
  EXPECT_EQ(table_of(t), table_of(g));
}

TEST(ExplicitCauses, UpClosure) {
  const Game g = ce::make_explicit_cause_game(5, {Coalition::of(5, {0, 1}), Coalition::of(5, {0, 2}),
                                                  Coalition::of(5, {0, 3})});
  EXPECT_TRUE(g(Coalition::of(5, {0, 1, 4})));
  EXPECT_FALSE(g(Coalition::of(5, {1, 2, 3, 4})));
  EXPECT_FALSE(ce::monotonicity_violation(g));
}

TEST(ExplicitCauses, RejectsNonAntichain) {
  try {
    ce::make_explicit_cause_game(3, {Coalition::of(3, {0}), Coalition::of(3, {0, 1})});
    FAIL();
  } catch (const ce::Error& e) {
    EXPECT_EQ(e.code(), ce::ErrorCode::kInvalidCauseFamily);
  }
  EXPECT_THROW(ce::make_explicit_cause_game(3, {Coalition::empty(3)}), ce::Error);
}

TEST(ExplicitCauses, DictatorAndUnanimity) {
  const Game d = ce::make_dictator(3, 0);
  EXPECT_TRUE(d(Coalition::of(3, {0})));
  EXPECT_FALSE(d(Coalition::of(3, {1, 2})));
  const Game u = ce::make_unanimity(4, Coalition::of(4, {0, 1}));
  EXPECT_TRUE(u(Coalition::of(4, {0, 1, 3})));
  EXPECT_FALSE(u(Coalition::of(4, {0, 2, 3})));
}

TEST(Callable, WrapsFunctionAndChecksEmptySet) {
  const Game g = ce::make_callable_game(3, [](const Coalition& s) { return s.size() >= 2; });
  EXPECT_EQ(g.kind(), ce::GameKind::kCallable);
  EXPECT_TRUE(g(Coalition::of(3, {0, 2})));
  EXPECT_THROW(ce::make_callable_game(2, [](const Coalition&) { return true; }), ce::Error);
}

TEST(Game, EvaluationChecksUniverse) {
  const Game g = ce::make_dictator(3, 0);
  EXPECT_THROW(g(Coalition::of(4, {0})), ce::Error);
}

TEST(Game, LabelsFallBackToNumbers) {
  const Game g = ce::make_dictator(2, 0);
  EXPECT_EQ(g.label(1), "2");
  const Game named = g.with_names({"x", "y"});
  EXPECT_EQ(named.label(1), "y");
  EXPECT_THROW(g.with_names({"x"}), ce::Error);
}

TEST(Contract, UnanimityBecomesDictator) {
  const Game u = ce::make_unanimity(2, Coalition::full(2));
  const ce::Contraction c = ce::contract(u, Coalition::full(2));
  EXPECT_EQ(c.game.size(), 1u);
  EXPECT_TRUE(c.game(Coalition::of(1, {0})));
  EXPECT_FALSE(c.game(Coalition::empty(1)));
}

TEST(Contract, CaseSplit) {
  const Game v = ce::make_explicit_cause_game(5, {Coalition::of(5, {0, 1}), Coalition::of(5, {0, 2}),
                                                  Coalition::of(5, {0, 3})});
  const Coalition t = Coalition::of(5, {0, 1});
  const ce::Contraction c = ce::contract(v, t);
  ASSERT_EQ(c.game.size(), 4u);
  EXPECT_EQ(c.merged_feature, 0u);
  EXPECT_TRUE(c.game(Coalition::of(4, {c.merged_feature})));
  // Without [T], the game is v restricted to the remaining features.
  for (std::uint64_t s = 0; s < 16; ++s) {
    if (s & 1) continue;
    std::uint64_t original = 0;
    for (std::size_t k = 1; k < 4; ++k) {
      if (s >> k & 1) original |= std::uint64_t{1} << c.members[k].members()[0];
    }
    EXPECT_EQ(c.game.wins(s), v.wins(original)) << s;
  }
  EXPECT_FALSE(ce::monotonicity_violation(c.game));
  EXPECT_EQ(c.game.label(0), "[1,2]");
}

TEST(Contract, NeedsTwoFeatures) {
  const Game v = ce::make_dictator(3, 0);
  try {
    ce::contract(v, Coalition::of(3, {0}));
    FAIL();
  } catch (const ce::Error& e) {
    EXPECT_EQ(e.code(), ce::ErrorCode::kInvalidArgument);
  }
}

TEST(Permute, Definition) {
  const Game d = ce::make_dictator(3, 0);
  const Game p = ce::permute(d, {1, 0, 2});
  // (pi v)({2}) = v({pi(2)}) = v({1}) = 1.
  EXPECT_TRUE(p(Coalition::of(3, {1})));
  EXPECT_FALSE(p(Coalition::of(3, {0})));
  EXPECT_TRUE(ce::extensionally_equal(ce::permute(p, {1, 0, 2}), d));
  EXPECT_TRUE(ce::extensionally_equal(ce::permute(d, ce::identity_permutation(3)), d));
  EXPECT_THROW(ce::permute(d, {0, 0, 1}), ce::Error);
  EXPECT_THROW(ce::permute(d, {0, 1}), ce::Error);
}

TEST(Permute, MatchesDefinitionOnRandomGames) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t n = 3 + trial % 4;
    const Game v = ce::random_monotone_game(n, 0.3, 100 + trial);
    auto pi = ce::identity_permutation(n);
    std::shuffle(pi.begin(), pi.end(), rng);
    const Game p = ce::permute(v, pi);
    for (std::uint64_t s = 0; s <= ce::full_mask(n); ++s) {
      std::uint64_t image = 0;
      for (std::size_t i = 0; i < n; ++i) {
        if (s >> i & 1) image |= std::uint64_t{1} << pi[i];
      }
      ASSERT_EQ(p.wins(s), v.wins(image));
    }
  }
}

TEST(RandomGames, AreMonotoneAndSeeded) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const Game g = ce::random_monotone_game(6, 0.2, seed);
    EXPECT_FALSE(ce::monotonicity_violation(g));
    EXPECT_TRUE(ce::extensionally_equal(g, ce::random_monotone_game(6, 0.2, seed)));
  }
  const Game zero = ce::random_monotone_game(5, 0.0, 1);
  EXPECT_TRUE(oracle::minimal(zero).empty());
}
