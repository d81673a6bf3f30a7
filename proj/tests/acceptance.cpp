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

// Acceptance checks: one PASS/FAIL line per criterion. Exits non-zero if any
// criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>

#include "causal_explain/causal_explain.hpp"
#include "oracles.hpp"

namespace ce = causal_explain;
using ce::AxiomId;
using ce::Coalition;
using ce::Game;
using ce::IndexKind;
using ce::Rational;
using Clock = std::chrono::steady_clock;

namespace {

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok && pass) detail << "first failure: " << what << "; ";
    pass = pass && ok;
  }
};

int failures = 0;

void report(const std::string& name, const std::function<void(Outcome&)>& body) {
  Outcome outcome;
  const auto start = Clock::now();
  try {
    body(outcome);
  } catch (const std::exception& e) {
    outcome.require(false, std::string("exception: ") + e.what());
  }
  const double seconds = std::chrono::duration<double>(Clock::now() - start).count();
  if (!outcome.pass) ++failures;
  std::printf("%s  %-28s %s(%.2fs)\n", outcome.pass ? "PASS" : "FAIL", name.c_str(), outcome.detail.str().c_str(), seconds);
  std::fflush(stdout);
}

double seconds_since(Clock::time_point start) { return std::chrono::duration<double>(Clock::now() - start).count(); }

std::vector<Rational> oracle_index(const Game& v, IndexKind kind) {
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

Game random_wvg(std::size_t n, std::mt19937_64& rng) {
  std::vector<Rational> weights;
  long long total = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const long long w = 1 + static_cast<long long>(rng() % 10);
    weights.emplace_back(w);
    total += w;
  }
  return ce::make_weighted_voting(weights, Rational(total / 2 + 1));
}

void oracle_equivalence(Outcome& out) {
  const auto start = Clock::now();
  std::size_t comparisons = 0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const std::size_t n = 3 + seed % 4;
    const double density = 0.05 + 0.05 * static_cast<double>(seed % 7);
    const Game v = ce::random_monotone_game(n, density, 0xACCE55 + seed);
    const ce::GameFamilies families(v);
    for (IndexKind kind : ce::kAllIndexKinds) {
      const bool equal = ce::compute_index(families, kind).values == oracle_index(v, kind);
      out.require(equal, std::string(ce::index_kind_name(kind)) + " differs on seed " + std::to_string(seed));
      ++comparisons;
    }
  }
  const double elapsed = seconds_since(start);
  out.require(elapsed < 10.0, "runtime over 10 s");
  out.detail << "100 games x 6 indices exact (" << comparisons << " vectors) ";
}

void pivot_games(Outcome& out) {
  const auto v = ce::load_input_file(std::string(CAUSAL_EXPLAIN_DATA) + "/pivot_alone.json");
  const auto w = ce::load_input_file(std::string(CAUSAL_EXPLAIN_DATA) + "/pivot_shared.json");
  const auto mv = ce::minimal_causes(v.game), mw = ce::minimal_causes(w.game);
  const Rational pv = ce::deegan_packel(mv, ce::Scale::kPerCause)[0];
  const Rational pw = ce::deegan_packel(mw, ce::Scale::kPerCause)[0];
  const Rational rv = ce::deegan_packel(mv, ce::Scale::kRaw)[0];
  const Rational rw = ce::deegan_packel(mw, ce::Scale::kRaw)[0];
  out.require(pv == 1 && pw == Rational(3, 2), "per-cause values");
  out.require(rv == Rational(1, 16) && rw == Rational(3, 32), "raw values");
  out.detail << "per-cause " << ce::to_string(pv) << ", " << ce::to_string(pw) << "; raw " << ce::to_string(rv) << ", "
             << ce::to_string(rw) << " ";
}

void axiom_suites(Outcome& out) {
  constexpr std::size_t kTrials = 200;
  std::size_t suites = 0;
  for (const char* name : {"responsibility", "holler-packel", "deegan-packel", "shapley", "banzhaf", "alternate-johnston"}) {
    for (AxiomId axiom : ce::characterizing_axioms(name)) {
      const auto check = ce::check_axiom(name, axiom, kTrials, 20260101);
      out.require(check.passed, std::string(name) + " violates " + std::string(ce::axiom_name(axiom)) + ": " + check.detail);
      out.require(check.trials >= kTrials, std::string(name) + " " + std::string(ce::axiom_name(axiom)) + " ran only " +
                                               std::to_string(check.trials) + " applicable trials");
      ++suites;
    }
  }
  std::size_t witnesses = 0;
  for (auto [name, axiom] : {std::pair{"holler-packel", AxiomId::kISM}, std::pair{"deegan-packel", AxiomId::kCM}}) {
    const auto check = ce::check_axiom(name, axiom, kTrials, 20260101);
    const bool found = !check.passed && check.witness &&
                       ce::evaluate_axiom_instance(ce::named_procedure(name), axiom, *check.witness).verdict ==
                           ce::Verdict::kViolated;
    out.require(found, std::string("no replayable witness for ") + name + " vs " + std::string(ce::axiom_name(axiom)));
    witnesses += found ? 1 : 0;
  }
  out.detail << suites << " suites x " << kTrials << " trials clean; " << witnesses << "/2 expected witnesses ";
}

void impossibility(Outcome& out) {
  const auto trace = ce::demonstrate_impossibility();
  out.require(trace.contradiction && trace.forced_sum == 2 && trace.required_sum == 1, "trace");
  out.detail << "sum gamma(v') = " << ce::to_string(trace.forced_sum) << " != " << ce::to_string(trace.required_sum) << " ";
}

void contraction(Outcome& out) {
  std::size_t equality = 0, strict = 0, pairs = 0;
  for (std::uint64_t seed = 0; seed < 150; ++seed) {
    const std::size_t n = 3 + seed % 4;
    // Plant T as a smallest minimal cause for every third game.
    Game v = ce::random_monotone_game(n, 0.2, 0xC0 + seed);
    std::mt19937_64 rng(seed);
    if (seed % 3 == 0) {
      const Coalition t = Coalition::of(n, {0, 1});
      std::vector<Coalition> causes{t};
      for (const auto& s : ce::random_antichain(n, 0.2, rng)) {
        if (!(s & t).is_empty() && s.size() < t.size()) continue;
        if (!ce::comparable_with_any(causes, s)) causes.push_back(s);
      }
      v = ce::make_explicit_cause_game(n, causes);
    }
    const auto minimal = ce::minimal_causes(v);
    const auto causes = minimal.causes();
    const auto rho = ce::responsibility(minimal);
    for (std::uint64_t mask = 0; mask <= ce::full_mask(n); ++mask) {
      const Coalition t(n, mask);
      if (t.size() < 2) continue;
      bool non_null = true;
      for (std::size_t i : t.members()) non_null = non_null && rho[i] > 0;
      if (!non_null) continue;
      const auto c = ce::contract(v, t);
      const Rational merged = ce::responsibility(ce::minimal_causes(c.game))[c.merged_feature];
      Rational sum = 0;
      for (std::size_t i : t.members()) sum += rho[i];
      ++pairs;
      out.require(merged <= sum, "inequality fails for T=" + ce::to_string(t));
      bool smallest = std::find(causes.begin(), causes.end(), t) != causes.end();
      for (std::size_t i : t.members()) smallest = smallest && rho[i] == Rational(1, t.size());
      if (smallest) {
        out.require(merged == sum, "equality branch fails for T=" + ce::to_string(t));
        ++equality;
      } else if (merged < sum) {
        ++strict;
      }
    }
  }
  out.require(equality >= 20, "too few equality-branch cases");
  out.require(strict >= 100, "fewer than 100 strict pairs");
  out.detail << pairs << " (game, T) pairs; " << equality << " equality-branch exact; " << strict << " strict ";
}

void unbiasedness(Outcome& out) {
  std::size_t games = 0;
  for (std::uint64_t seed = 0; seed < 48; ++seed) {
    const std::size_t n = 1 + seed % 8;
    const Game v = ce::random_monotone_game(n, 0.1 + 0.05 * static_cast<double>(seed % 5), 0xB1A5 + seed);
    const auto config = ce::SamplingConfig::exhaustive_for(n);
    out.require(ce::estimate_johnston(v, config).estimates.values == oracle::johnston(v), "johnston");
    out.require(ce::estimate_deegan_packel(v, config).estimates.values == oracle::deegan_packel(v), "deegan-packel");
    out.require(ce::estimate_holler_packel(v, config).estimates.values == oracle::holler_packel(v), "holler-packel");
    ++games;
  }
  out.detail << games << " games n<=8, all three estimators expectation exact ";
}

void hoeffding(Outcome& out) {
  const auto start = Clock::now();
  constexpr double kEps = 0.05, kDelta = 0.05;
  const std::uint64_t m = ce::sample_size(kEps, kDelta, 10);
  out.require(m == 2397, "m = " + std::to_string(m));
  const IndexKind kinds[3] = {IndexKind::kJohnston, IndexKind::kDeeganPackel, IndexKind::kHollerPackel};
  int within[3] = {0, 0, 0};
  double mean_worst[3] = {0, 0, 0};
  std::mt19937_64 rng(0x40EFD);
  for (std::uint64_t trial = 0; trial < 100; ++trial) {
    const Game v = random_wvg(10, rng);
    const ce::GameFamilies families(v);
    ce::SamplingConfig config;
    config.samples = m;
    config.seed = 0x5EED0000 + trial;
    for (int a = 0; a < 3; ++a) {
      const auto exact = ce::compute_index(families, kinds[a]).values;
      const auto est = ce::estimate(v, kinds[a], config).estimates.values;
      double worst = 0;
      for (std::size_t i = 0; i < 10; ++i) worst = std::max(worst, std::abs(ce::to_double(est[i] - exact[i])));
      if (worst <= kEps) ++within[a];
      mean_worst[a] += worst / 100;
    }
  }
  for (int a = 0; a < 3; ++a) out.require(within[a] >= 90, std::string(ce::index_kind_name(kinds[a])) + " coverage");
  out.require(seconds_since(start) < 120.0, "runtime over 2 min");
  out.detail << "m=" << m << "; within eps: johnston " << within[0] << "/100, deegan-packel " << within[1] << "/100, holler-packel " << within[2]
             << "/100; mean max error " << mean_worst[0] << ", " << mean_worst[1] << ", " << mean_worst[2] << " ";
}

void responsibility_estimator(Outcome& out) {
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    const std::size_t n = 1 + seed % 8;
    const Game v = ce::random_monotone_game(n, 0.15, 0x4E5 + seed);
    const auto exact = oracle::responsibility(v);
    out.require(ce::estimate_responsibility(v, ce::SamplingConfig::exhaustive_for(n)).estimates.values == exact,
                "exhaustive mode differs");
    for (std::uint64_t m : {1, 3, 10, 30, 100}) {
      for (std::uint64_t s = 0; s < 10; ++s) {
        ce::SamplingConfig config;
        config.samples = m;
        config.seed = s;
        const auto est = ce::estimate_responsibility(v, config).estimates.values;
        for (std::size_t i = 0; i < n; ++i) out.require(est[i] <= exact[i], "estimate exceeds exact value");
      }
    }
  }
  std::size_t sweeps = 0;
  const std::pair<const char*, AxiomId> relative[] = {
      {"estimate-responsibility", AxiomId::kRMM}, {"estimate-responsibility", AxiomId::kRS},
      {"estimate-responsibility", AxiomId::kNF},  {"estimate-deegan-packel", AxiomId::kRMM},
      {"estimate-deegan-packel", AxiomId::kRS},   {"estimate-deegan-packel", AxiomId::kNF},
      {"estimate-holler-packel", AxiomId::kRMM},  {"estimate-holler-packel", AxiomId::kRS},
      {"estimate-holler-packel", AxiomId::kNF},   {"estimate-johnston", AxiomId::kRQM},
      {"estimate-johnston", AxiomId::kRS},        {"estimate-johnston", AxiomId::kNF}};
  for (auto [name, axiom] : relative) {
    const auto check = ce::check_axiom(name, axiom, 50, 0x5EED);
    out.require(check.passed && check.trials >= 50, std::string(name) + " " + std::string(ce::axiom_name(axiom)) + ": " + check.detail);
    ++sweeps;
  }
  out.detail << "exhaustive exact on 40 games; rho_hat <= rho over 2000 runs; " << sweeps
             << " relative-property sweeps x 50 seeds clean ";
}

void partition(Outcome& out) {
  std::mt19937_64 rng(0x9A27);
  std::size_t checked = 0;
  for (int t = 0; t < 20; ++t) {
    std::vector<std::uint64_t> values(1 + rng() % 12);
    std::uint64_t total = 0;
    for (auto& x : values) {
      x = 1 + rng() % 15;
      total += x;
    }
    if (total % 2 == 1) ++values.back();  // PARTITION instances need an even total to be solvable
    const auto inst = ce::partition_game(values);
    const std::size_t enumerated = ce::minimal_causes(inst.game).feature_family(inst.pivot).size();
    out.require(enumerated == inst.subset_sum_count, "multiset " + std::to_string(t));
    ++checked;
  }
  const auto small = ce::partition_game({1, 1, 2});
  const Rational eta = ce::holler_packel(ce::minimal_causes(small.game))[small.pivot];
  out.require(eta == Rational(1, 4), "A={1,1,2}");
  out.detail << checked << " multisets match subset-sum counts; A={1,1,2} eta_4 = " << ce::to_string(eta) << " ";
}

void causal_semantics(Outcome& out) {
  const auto in = ce::load_input_file(std::string(CAUSAL_EXPLAIN_DATA) + "/arsonist.json");
  const std::size_t n = in.game.size();
  const Coalition a1 = Coalition::of(n, {2}), a12 = Coalition::of(n, {2, 3});
  out.require(in.game.label(2) == "A1" && in.game.label(3) == "A2", "feature order");
  out.require(!in.game(a1), "v({A1}) should be 0");
  out.require(in.game(a12), "v({A1,A2}) should be 1");
  const auto rho = ce::responsibility(ce::minimal_causes(in.game));
  for (std::size_t i = 0; i < n; ++i) out.require(rho[i] == Rational(1, 2), "responsibility 1/2");

  std::mt19937_64 rng(0xD1EC7);
  for (std::size_t k = 1; k <= 10; ++k) {
    const Game wvg = random_wvg(k, rng);
    const ce::OutputFunction f = [&](const ce::FeaturePoint& x) {
      std::uint64_t mask = 0;
      for (std::size_t i = 0; i < k; ++i) mask |= static_cast<std::uint64_t>(x[i] != 0) << i;
      return wvg.wins(mask) ? 1 : 0;
    };
    const Game embedded = ce::direct_effect_game(f, ce::FeaturePoint(k, 0), ce::ConstraintSet::product(std::vector<std::size_t>(k, 2)));
    out.require(ce::extensionally_equal(embedded, wvg), "direct-effect embedding n=" + std::to_string(k));
  }
  out.detail << "arsonist v({A1})=0, v({A1,A2})=1, rho=1/2; WVG embedding exact for n=1..10 ";
}

void performance(Outcome& out) {
  const auto start = Clock::now();
  std::mt19937_64 rng(0x20);
  const Game v = random_wvg(20, rng);
  const ce::GameFamilies families(v);
  for (IndexKind kind : ce::kAllIndexKinds) (void)ce::compute_index(families, kind);
  const double elapsed = seconds_since(start);
  out.require(elapsed < 60.0, "over 60 s");
  out.detail << "n=20: " << families.minimal.size() << " minimal, " << families.quasi_minimal.size() << " quasi-minimal ";
}

}  // namespace

int main() {
  report("oracle-equivalence", oracle_equivalence);
  report("pivot-games", pivot_games);
  report("axiom-suites", axiom_suites);
  report("impossibility-trace", impossibility);
  report("contraction-bound", contraction);
  report("unbiasedness", unbiasedness);
  report("hoeffding-coverage", hoeffding);
  report("responsibility-estimator", responsibility_estimator);
  report("partition-vectors", partition);
  report("causal-semantics", causal_semantics);
  report("performance-n20", performance);
  std::printf("%d criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
