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

#include "causal_explain/axioms.hpp"
#include "causal_explain/indices.hpp"
#include "oracles.hpp"

namespace ce = causal_explain;
using ce::Coalition;
using ce::Game;
using ce::IndexKind;
using ce::Rational;
using ce::Scale;

namespace {

using Values = std::vector<Rational>;

Game pivot_game(bool prime) {
  if (!prime) return ce::make_explicit_cause_game(5, {Coalition::of(5, {0})});
  return ce::make_explicit_cause_game(5, {Coalition::of(5, {0, 1}), Coalition::of(5, {0, 2}), Coalition::of(5, {0, 3})});
}

Values oracle_values(const Game& v, IndexKind kind) {
  switch (kind) {
    case IndexKind::kResponsibility: return oracle::responsibility(v);
    case IndexKind::kHollerPackel: return oracle::holler_packel(v);
    case IndexKind::kDeeganPackel: return oracle::deegan_packel(v);
    case IndexKind::kJohnston: return oracle::johnston(v);
    case IndexKind::kShapley: return oracle::shapley(v);
    case IndexKind::kBanzhaf: return oracle::banzhaf(v);
  }
  return {};
}

}  // namespace

TEST(Responsibility, Examples) {
  const Game unanimity = ce::make_unanimity(3, Coalition::of(3, {0, 1}));
  EXPECT_EQ(ce::responsibility(ce::minimal_causes(unanimity)).values, (Values{Rational(1, 2), Rational(1, 2), 0}));
  const Game dictator = ce::make_dictator(3, 1);
  EXPECT_EQ(ce::responsibility(ce::minimal_causes(dictator)).values, (Values{0, 1, 0}));
  const Game wvg = ce::make_weighted_voting({1, 1, 2}, 2);
  EXPECT_EQ(ce::responsibility(ce::minimal_causes(wvg)).values, (Values{Rational(1, 2), Rational(1, 2), 1}));
}

TEST(HollerPackel, Examples) {
  const Game unanimity = ce::make_unanimity(2, Coalition::full(2));
  EXPECT_EQ(ce::holler_packel(ce::minimal_causes(unanimity)).values, (Values{Rational(1, 2), Rational(1, 2)}));
  EXPECT_EQ(ce::holler_packel(ce::minimal_causes(pivot_game(true)), Scale::kPerCause)[0], 3);
}

TEST(DeeganPackel, PerCauseAndRaw) {
  const auto v = ce::minimal_causes(pivot_game(false));
  const auto w = ce::minimal_causes(pivot_game(true));
  EXPECT_EQ(ce::deegan_packel(v, Scale::kPerCause)[0], 1);
  EXPECT_EQ(ce::deegan_packel(w, Scale::kPerCause)[0], Rational(3, 2));
  EXPECT_EQ(ce::deegan_packel(v, Scale::kRaw)[0], Rational(1, 16));
  EXPECT_EQ(ce::deegan_packel(w, Scale::kRaw)[0], Rational(3, 32));
}

TEST(Johnston, Examples) {
  // One quasi-minimal cause {1,2} in a two-feature game: 1/2 of the weight
  // 1/2^{n-1} = 1/2 each.
  const Game unanimity = ce::make_unanimity(2, Coalition::full(2));
  EXPECT_EQ(ce::johnston(ce::quasi_minimal_causes(unanimity)).values, (Values{Rational(1, 4), Rational(1, 4)}));
  const Game dictator = ce::make_dictator(3, 0);
  EXPECT_EQ(ce::johnston(ce::quasi_minimal_causes(dictator)).values, (Values{1, 0, 0}));
  const Game wvg = ce::make_weighted_voting({1, 1, 2}, 2);
  EXPECT_EQ(ce::johnston(ce::quasi_minimal_causes(wvg)).values, (Values{Rational(1, 8), Rational(1, 8), Rational(3, 4)}));
}

TEST(Shapley, Examples) {
  EXPECT_EQ(ce::shapley(ce::make_weighted_voting({1, 1, 2}, 2)).values, (Values{Rational(1, 6), Rational(1, 6), Rational(2, 3)}));
  EXPECT_EQ(ce::shapley(ce::make_unanimity(3, Coalition::full(3))).values, (Values{Rational(1, 3), Rational(1, 3), Rational(1, 3)}));
}

TEST(Banzhaf, Examples) {
  EXPECT_EQ(ce::banzhaf(ce::make_weighted_voting({1, 1, 2}, 2)).values, (Values{Rational(1, 4), Rational(1, 4), Rational(3, 4)}));
  EXPECT_EQ(ce::banzhaf(ce::make_dictator(4, 2)).values, (Values{0, 0, 1, 0}));
}

TEST(Indices, WrongFamilyKindIsRejected) {
  const Game g = ce::make_dictator(2, 0);
  const auto minimal = ce::minimal_causes(g);
  const auto quasi = ce::quasi_minimal_causes(g);
  EXPECT_THROW(ce::responsibility(quasi), ce::Error);
  EXPECT_THROW(ce::holler_packel(quasi), ce::Error);
  EXPECT_THROW(ce::deegan_packel(quasi), ce::Error);
  EXPECT_THROW(ce::johnston(minimal), ce::Error);
  EXPECT_THROW(ce::shapley(minimal), ce::Error);
  EXPECT_THROW(ce::banzhaf(minimal), ce::Error);
}

TEST(Indices, NamesRoundTrip) {
  for (IndexKind kind : ce::kAllIndexKinds) EXPECT_EQ(ce::parse_index_kind(ce::index_kind_name(kind)), kind);
  EXPECT_THROW(ce::parse_index_kind("owen"), ce::Error);
  EXPECT_EQ(ce::parse_scale("per-cause"), Scale::kPerCause);
  EXPECT_THROW(ce::parse_scale("log"), ce::Error);
}

TEST(Indices, MatchBruteForceDefinitions) {
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    const std::size_t n = 3 + seed % 4;
    const Game v = ce::random_monotone_game(n, 0.25, 1000 + seed);
    const ce::GameFamilies families(v);
    for (IndexKind kind : ce::kAllIndexKinds) {
      EXPECT_EQ(ce::compute_index(families, kind).values, oracle_values(v, kind))
          << ce::index_kind_name(kind) << " seed " << seed;
    }
  }
}

TEST(Indices, InvariantsOnRandomGames) {
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    const std::size_t n = 2 + seed % 6;
    const Game v = ce::random_monotone_game(n, 0.2, 2000 + seed);
    const ce::GameFamilies f(v);
    const Rational half = ce::pow2_inverse(n - 1);
    Rational size_sum = 0;
    for (const auto& s : f.minimal.causes()) size_sum += s.size();
    EXPECT_EQ(ce::holler_packel(f.minimal).total(), size_sum * half);                      // TMCE
    EXPECT_EQ(ce::deegan_packel(f.minimal).total(), Rational(f.minimal.size()) * half);    // MCE
    EXPECT_EQ(ce::johnston(f.quasi_minimal).total(), Rational(f.quasi_minimal.size()) * half);
    EXPECT_EQ(ce::shapley(f.quasi_minimal).total(), v.wins(ce::full_mask(n)) ? 1 : 0);     // GE
    for (IndexKind kind : ce::kAllIndexKinds) {
      const auto values = ce::compute_index(f, kind).values;
      for (std::size_t i = 0; i < n; ++i) {
        EXPECT_GE(values[i], 0);
        EXPECT_LE(values[i], 1);
        if (f.minimal.feature_family(i).empty()) {
          EXPECT_EQ(values[i], 0);
        }
      }
    }
    // Raw and per-cause scales rank features identically.
    for (IndexKind kind : {IndexKind::kHollerPackel, IndexKind::kDeeganPackel}) {
      const auto raw = ce::compute_index(f, kind, Scale::kRaw).values;
      const auto per = ce::compute_index(f, kind, Scale::kPerCause).values;
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) EXPECT_EQ(raw[i] < raw[j], per[i] < per[j]);
    }
  }
}

TEST(Responsibility, ContractionInequality) {
  std::size_t equality_cases = 0;
  for (std::uint64_t seed = 0; seed < 80; ++seed) {
    const std::size_t n = 3 + seed % 4;
    const Game v = ce::random_monotone_game(n, 0.2, 3000 + seed);
    const auto minimal = ce::minimal_causes(v);
    const auto rho = ce::responsibility(minimal);
    for (std::uint64_t t = 0; t <= ce::full_mask(n); ++t) {
      const Coalition merged(n, t);
      if (merged.size() < 2) continue;
      bool non_null = true;
      for (std::size_t i : merged.members()) non_null = non_null && rho[i] > 0;
      if (!non_null) continue;
      const ce::Contraction c = ce::contract(v, merged);
      const Rational combined = ce::responsibility(ce::minimal_causes(c.game))[c.merged_feature];
      Rational sum = 0;
      for (std::size_t i : merged.members()) sum += rho[i];
      EXPECT_LE(combined, sum);
      const auto causes = minimal.causes();
      bool smallest = std::find(causes.begin(), causes.end(), merged) != causes.end();
      for (std::size_t i : merged.members()) smallest = smallest && rho[i] == Rational(1, merged.size());
      if (smallest) {
        EXPECT_EQ(combined, sum);
        ++equality_cases;
      }
    }
  }
  EXPECT_GT(equality_cases, 10u);
}

TEST(Contraction, MinimalCausesOfMergedFeature) {
  // M_[T](v_[T]) is the minimalization of {(S \ T) + [T] : S in M(v), S meets T}
  // together with the causes disjoint from T.
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    const std::size_t n = 3 + seed % 4;
    const Game v = ce::random_monotone_game(n, 0.25, 4000 + seed);
    const auto minimal = ce::minimal_causes(v).causes();
    const Coalition merged = Coalition::of(n, {0, 1});
    const ce::Contraction c = ce::contract(v, merged);
    auto to_reduced = [&](const Coalition& s) {
      std::vector<std::size_t> members;
      for (std::size_t k = 0; k < c.members.size(); ++k) {
        if (!(c.members[k] & s).is_empty()) members.push_back(k);
      }
      return Coalition::of(c.game.size(), members);
    };
    std::vector<Coalition> predicted;
    for (const Coalition& s : minimal) predicted.push_back(to_reduced(s));
    EXPECT_EQ(ce::minimal_causes(c.game).causes(), ce::minimalize(predicted)) << "seed " << seed;
  }
}

TEST(Contraction, RawFormulaNeedsMinimalization) {
  // M = {{1,2},{1,3,4}}, T = {1,2}: {1,3,4} maps to {[T],3,4}, which contains {[T]}.
  const Game v = ce::make_explicit_cause_game(4, {Coalition::of(4, {0, 1}), Coalition::of(4, {0, 2, 3})});
  const ce::Contraction c = ce::contract(v, Coalition::of(4, {0, 1}));
  EXPECT_EQ(ce::minimal_causes(c.game).causes(), (std::vector<Coalition>{Coalition::of(3, {0})}));
}
