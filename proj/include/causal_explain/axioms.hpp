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

#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <numeric>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "causal_explain/causes.hpp"
#include "causal_explain/coalition.hpp"
#include "causal_explain/errors.hpp"
#include "causal_explain/game.hpp"
#include "causal_explain/indices.hpp"
#include "causal_explain/rational.hpp"
#include "causal_explain/sampling.hpp"

namespace causal_explain {

// ---------------------------------------------------------------------------
// Random monotone games.

// Keeps the inclusion-minimal members, deduplicated, in ascending mask order.
inline std::vector<Coalition> minimalize(std::vector<Coalition> sets) {
  std::sort(sets.begin(), sets.end());
  sets.erase(std::unique(sets.begin(), sets.end()), sets.end());
  std::vector<Coalition> out;
  for (const Coalition& s : sets) {
    bool dominated = std::any_of(sets.begin(), sets.end(),
                                 [&](const Coalition& t) { return t != s && t.subset_of(s); });
    if (!dominated) out.push_back(s);
  }
  return out;
}

inline bool comparable_with_any(const std::vector<Coalition>& family, const Coalition& s) {
  return std::any_of(family.begin(), family.end(),
                     [&](const Coalition& t) { return t.subset_of(s) || s.subset_of(t); });
}

// Visits the non-empty coalitions in random order, proposing each with
// probability `density`; a proposal joins if it is incomparable with every
// member so far.
inline std::vector<Coalition> random_antichain(std::size_t n, double density, std::mt19937_64& rng) {
  check_exhaustive_capacity(n);
  std::vector<std::uint64_t> order(full_mask(n));
  std::iota(order.begin(), order.end(), std::uint64_t{1});
  std::shuffle(order.begin(), order.end(), rng);
  std::bernoulli_distribution propose(std::clamp(density, 0.0, 1.0));
  std::vector<Coalition> out;
  for (std::uint64_t mask : order) {
    if (!propose(rng)) continue;
    Coalition s(n, mask);
    if (!comparable_with_any(out, s)) out.push_back(s);
  }
  std::sort(out.begin(), out.end());
  return out;
}

// Up-closure of a random antichain, stored as a truth table.
inline Game random_monotone_game(std::size_t n, double density, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const Game explicit_game = make_explicit_cause_game(n, random_antichain(n, density, rng));
  return tabulate(explicit_game);
}

// ---------------------------------------------------------------------------
// Synthetic (G, chi) pairs for the alternate Johnston index.

struct SyntheticQuasiFamily {
  std::size_t n = 0;
  std::vector<Coalition> sets;
  std::vector<Coalition> critical;  // chi, parallel to `sets`

  void validate() const {
    if (sets.size() != critical.size()) fail(ErrorCode::kInvalidArgument, "chi must map every set of G");
    for (std::size_t k = 0; k < sets.size(); ++k) {
      if (sets[k].universe() != n || critical[k].universe() != n) {
        fail(ErrorCode::kInvalidArgument, "synthetic family uses the wrong universe");
      }
      if (sets[k].is_empty()) fail(ErrorCode::kInvalidArgument, "G cannot contain the empty set");
      if (critical[k].is_empty() || !critical[k].subset_of(sets[k])) {
        fail(ErrorCode::kInvalidArgument, "chi" + to_string(sets[k]) + " = " + to_string(critical[k]) +
                                              " is not a non-empty subset of " + to_string(sets[k]));
      }
    }
    std::vector<Coalition> sorted = sets;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
      fail(ErrorCode::kInvalidArgument, "G lists the same set twice");
    }
  }

  // G_i = { S in G : i in chi(S) }.
  std::vector<Coalition> feature_family(std::size_t i) const {
    std::vector<Coalition> out;
    for (std::size_t k = 0; k < sets.size(); ++k) {
      if (critical[k].contains(i)) out.push_back(sets[k]);
    }
    std::sort(out.begin(), out.end());
    return out;
  }

  static SyntheticQuasiFamily from_family(const CauseFamily& family) {
    SyntheticQuasiFamily out{family.universe(), family.causes(), {}};
    for (std::size_t k = 0; k < family.size(); ++k) out.critical.push_back(family.critical(k));
    return out;
  }
};

// omega_i = sum over G_i of 1/|chi(S)|, per-cause scale.
inline IndexVector alternate_johnston(const SyntheticQuasiFamily& family) {
  family.validate();
  IndexVector out{IndexKind::kJohnston, Scale::kPerCause, std::vector<Rational>(family.n, Rational(0))};
  for (std::size_t k = 0; k < family.sets.size(); ++k) {
    const Rational share = ratio(1, family.critical[k].size());
    for (std::size_t i : family.critical[k].members()) out.values[i] += share;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Axioms.

enum class AxiomId {
  kMSM, kUE, kS, kNF, kC, kMM, kTMCE, kCM, kMCE, kISM, kE,
  kQMM, kAQM, kAQCE, kAS, kANF, kGE, kTP, kRQM, kRMM, kRS,
};

inline constexpr std::pair<AxiomId, std::string_view> kAxiomNames[] = {
    {AxiomId::kMSM, "MSM"}, {AxiomId::kUE, "UE"},     {AxiomId::kS, "S"},       {AxiomId::kNF, "NF"},
    {AxiomId::kC, "C"},     {AxiomId::kMM, "MM"},     {AxiomId::kTMCE, "TMCE"}, {AxiomId::kCM, "CM"},
    {AxiomId::kMCE, "MCE"}, {AxiomId::kISM, "ISM"},   {AxiomId::kE, "E"},       {AxiomId::kQMM, "QMM"},
    {AxiomId::kAQM, "AQM"}, {AxiomId::kAQCE, "AQCE"}, {AxiomId::kAS, "AS"},     {AxiomId::kANF, "ANF"},
    {AxiomId::kGE, "GE"},   {AxiomId::kTP, "TP"},     {AxiomId::kRQM, "RQM"},   {AxiomId::kRMM, "RMM"},
    {AxiomId::kRS, "RS"},
};

inline std::string_view axiom_name(AxiomId id) {
  for (const auto& [axiom, name] : kAxiomNames) {
    if (axiom == id) return name;
  }
  return "?";
}

inline AxiomId parse_axiom(std::string_view name) {
  for (const auto& [axiom, label] : kAxiomNames) {
    if (label == name) return axiom;
  }
  fail(ErrorCode::kInvalidArgument, "unknown axiom '" + std::string(name) + "'");
}

// An index under test. Game indices see a monotone game, family indices a
// synthetic (G, chi) pair, estimators a game plus a sampling seed.
struct GameIndexProcedure {
  std::string name;
  std::function<std::vector<Rational>(const Game&)> compute;
};
struct FamilyIndexProcedure {
  std::string name;
  std::function<std::vector<Rational>(const SyntheticQuasiFamily&)> compute;
};
struct EstimatorProcedure {
  std::string name;
  std::function<std::vector<Rational>(const Game&, std::uint64_t seed)> compute;
};
using IndexProcedure = std::variant<GameIndexProcedure, FamilyIndexProcedure, EstimatorProcedure>;

inline std::string procedure_name(const IndexProcedure& procedure) {
  return std::visit([](const auto& p) { return p.name; }, procedure);
}

// Samples drawn per estimator run inside the axiom sweeps.
inline constexpr std::uint64_t kAxiomEstimatorSamples = 48;

inline IndexProcedure named_procedure(std::string_view name) {
  for (IndexKind kind : kAllIndexKinds) {
    if (index_kind_name(kind) == name) {
      return GameIndexProcedure{std::string(name),
                                [kind](const Game& g) { return compute_index(g, kind).values; }};
    }
    if ("estimate-" + std::string(index_kind_name(kind)) == name) {
      if (kind == IndexKind::kShapley || kind == IndexKind::kBanzhaf) break;
      return EstimatorProcedure{std::string(name), [kind](const Game& g, std::uint64_t seed) {
                                  SamplingConfig config;
                                  config.samples = kAxiomEstimatorSamples;
                                  config.seed = seed;
                                  return estimate(g, kind, config).estimates.values;
                                }};
    }
  }
  if (name == "alternate-johnston") {
    return FamilyIndexProcedure{"alternate-johnston",
                                [](const SyntheticQuasiFamily& f) { return alternate_johnston(f).values; }};
  }
  fail(ErrorCode::kInvalidArgument, "unknown index procedure '" + std::string(name) + "'");
}

// The axiom set each shipped index is characterized by (or, for the
// estimators, guaranteed to keep for every seed).
inline std::vector<AxiomId> characterizing_axioms(std::string_view name) {
  using A = AxiomId;
  if (name == "responsibility") return {A::kMSM, A::kUE, A::kS, A::kNF, A::kC};
  if (name == "holler-packel") return {A::kMM, A::kTMCE, A::kS, A::kNF, A::kCM};
  if (name == "deegan-packel") return {A::kMM, A::kMCE, A::kS, A::kNF, A::kISM};
  if (name == "shapley") return {A::kS, A::kNF, A::kGE};
  if (name == "banzhaf") return {A::kS, A::kNF, A::kTP};
  if (name == "johnston") return {A::kS, A::kNF};
  if (name == "alternate-johnston") return {A::kAQM, A::kAQCE, A::kAS, A::kANF};
  if (name == "estimate-johnston") return {A::kRQM, A::kRS, A::kNF};
  if (name == "estimate-deegan-packel" || name == "estimate-holler-packel" || name == "estimate-responsibility") {
    return {A::kRMM, A::kRS, A::kNF};
  }
  fail(ErrorCode::kInvalidArgument, "unknown index procedure '" + std::string(name) + "'");
}

// Everything needed to replay one trial. Failing checks return the instance
// that broke the axiom so it can be re-evaluated independently.
struct AxiomInstance {
  std::size_t n = 0;
  std::vector<std::vector<Coalition>> games;  // antichains of v (and v')
  std::vector<SyntheticQuasiFamily> families;
  std::optional<std::size_t> feature;
  std::vector<std::size_t> permutation;
  std::optional<Coalition> merged;
  std::uint64_t estimator_seed = 0;
};

enum class Verdict { kNotApplicable, kHolds, kViolated };

struct InstanceOutcome {
  Verdict verdict = Verdict::kNotApplicable;
  std::string detail;
  std::vector<std::string> tags;  // e.g. "equality-branch", "strict"
};

struct AxiomCheck {
  AxiomId axiom = AxiomId::kE;
  std::string procedure;
  bool passed = true;
  std::size_t trials = 0;    // applicable trials evaluated
  std::size_t attempts = 0;  // generated instances, applicable or not
  std::map<std::string, std::size_t> tags;
  std::optional<AxiomInstance> witness;
  std::string detail;
};

namespace axioms_detail {

using Rng = std::mt19937_64;

inline std::size_t uniform(Rng& rng, std::size_t lo, std::size_t hi) {
  return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
}

inline bool coin(Rng& rng, double p) { return std::bernoulli_distribution(p)(rng); }

inline std::vector<Coalition> sample_antichain(std::size_t n, Rng& rng) {
  // Between roughly n/2 and 3n proposals in expectation.
  const double expected = std::uniform_real_distribution<double>(0.5, 3.0)(rng) * static_cast<double>(n);
  return random_antichain(n, expected / static_cast<double>(full_mask(n)), rng);
}

inline Coalition random_subset(std::size_t n, Rng& rng, std::uint64_t within) {
  return Coalition(n, std::uniform_int_distribution<std::uint64_t>(0, full_mask(n))(rng) & within);
}

inline Coalition random_nonempty_subset(std::size_t n, Rng& rng, const Coalition& within) {
  const auto members = within.members();
  for (;;) {
    Coalition s = random_subset(n, rng, within.mask());
    if (!s.is_empty()) return s;
    if (members.empty()) fail(ErrorCode::kInvariantViolation, "no non-empty subset of the empty set");
  }
}

inline std::vector<std::size_t> random_permutation(std::size_t n, Rng& rng) {
  auto pi = identity_permutation(n);
  std::shuffle(pi.begin(), pi.end(), rng);
  return pi;
}

inline std::vector<Coalition> containing(const std::vector<Coalition>& family, std::size_t i) {
  std::vector<Coalition> out;
  for (const Coalition& s : family) {
    if (s.contains(i)) out.push_back(s);
  }
  return out;
}

inline bool is_subfamily(const std::vector<Coalition>& a, const std::vector<Coalition>& b) {
  return std::all_of(a.begin(), a.end(), [&](const Coalition& s) { return std::find(b.begin(), b.end(), s) != b.end(); });
}

// Perfect matching S_j -> T_j with S_j subset of T_j (Kuhn's algorithm).
inline bool containment_matching(const std::vector<Coalition>& small, const std::vector<Coalition>& large) {
  if (small.size() != large.size()) return false;
  std::vector<int> owner(large.size(), -1);
  std::function<bool(std::size_t, std::vector<bool>&)> augment = [&](std::size_t a, std::vector<bool>& seen) {
    for (std::size_t b = 0; b < large.size(); ++b) {
      if (seen[b] || !small[a].subset_of(large[b])) continue;
      seen[b] = true;
      if (owner[b] < 0 || augment(static_cast<std::size_t>(owner[b]), seen)) {
        owner[b] = static_cast<int>(a);
        return true;
      }
    }
    return false;
  };
  for (std::size_t a = 0; a < small.size(); ++a) {
    std::vector<bool> seen(large.size(), false);
    if (!augment(a, seen)) return false;
  }
  return true;
}

// Replaces causes of `base` that avoid i (drops some, adds some) and, when
// `grow` is set, adds new causes through i. M_i(v) stays inside M_i(v').
inline std::vector<Coalition> extend_around(const std::vector<Coalition>& base, std::size_t n, std::size_t i,
                                            bool grow, Rng& rng) {
  std::vector<Coalition> out;
  for (const Coalition& s : base) {
    if (s.contains(i) || !coin(rng, 0.4)) out.push_back(s);
  }
  const std::size_t additions = uniform(rng, 0, n);
  for (std::size_t a = 0; a < additions; ++a) {
    Coalition s = random_nonempty_subset(n, rng, Coalition::full(n));
    s = grow && coin(rng, 0.6) ? s.with(i) : s.without(i);
    if (s.is_empty() || comparable_with_any(out, s)) continue;
    out.push_back(s);
  }
  std::sort(out.begin(), out.end());
  return out;
}

inline std::vector<Rational> eval_game(const GameIndexProcedure& p, std::size_t n, const std::vector<Coalition>& causes) {
  return p.compute(make_explicit_cause_game(n, causes));
}

inline std::string values_text(const std::vector<Rational>& values) {
  std::string out = "(";
  for (std::size_t k = 0; k < values.size(); ++k) out += (k ? ", " : "") + to_string(values[k]);
  return out + ")";
}

inline std::string family_text(const std::vector<Coalition>& family) {
  std::string out = "{";
  for (std::size_t k = 0; k < family.size(); ++k) out += (k ? "," : "") + to_string(family[k]);
  return out + "}";
}

inline InstanceOutcome holds(std::vector<std::string> tags = {}) {
  return InstanceOutcome{Verdict::kHolds, {}, std::move(tags)};
}
inline InstanceOutcome violated(std::string detail) { return InstanceOutcome{Verdict::kViolated, std::move(detail), {}}; }
inline InstanceOutcome not_applicable() { return InstanceOutcome{}; }

// --- instance generators ----------------------------------------------------

inline AxiomInstance generate_game_instance(AxiomId axiom, Rng& rng) {
  AxiomInstance inst;
  inst.n = uniform(rng, 3, 7);
  const std::size_t n = inst.n;
  const std::size_t i = uniform(rng, 0, n - 1);
  switch (axiom) {
    case AxiomId::kMSM: {
      auto v = sample_antichain(n, rng);
      auto w = coin(rng, 0.35) ? extend_around(v, n, i, /*grow=*/false, rng) : sample_antichain(n, rng);
      inst.games = {v, w};
      inst.feature = i;
      break;
    }
    case AxiomId::kUE: {
      std::vector<Coalition> v;
      for (const Coalition& s : sample_antichain(n, rng)) {
        if (!s.contains(i)) v.push_back(s);
      }
      v.push_back(Coalition::of(n, {i}));
      std::sort(v.begin(), v.end());
      inst.games = {v};
      inst.feature = i;
      break;
    }
    case AxiomId::kS:
      inst.games = {sample_antichain(n, rng)};
      inst.permutation = random_permutation(n, rng);
      break;
    case AxiomId::kNF: {
      const Coalition nulls = random_nonempty_subset(n, rng, Coalition::full(n));
      std::vector<Coalition> v;
      for (const Coalition& s : sample_antichain(n, rng)) {
        if ((s & nulls).is_empty()) v.push_back(s);
      }
      inst.games = {v};
      break;
    }
    case AxiomId::kC: {
      const std::size_t t = uniform(rng, 2, std::min<std::size_t>(n, 4));
      auto order = random_permutation(n, rng);
      std::vector<std::size_t> picked(order.begin(), order.begin() + static_cast<long>(t));
      const Coalition merged = Coalition::of(n, picked);
      std::vector<Coalition> v;
      if (coin(rng, 0.5)) {
        // T is a smallest minimal cause for each of its members.
        v.push_back(merged);
        for (const Coalition& s : sample_antichain(n, rng)) {
          if (!(s & merged).is_empty() && s.size() < merged.size()) continue;
          if (!comparable_with_any(v, s)) v.push_back(s);
        }
      } else {
        v = sample_antichain(n, rng);
      }
      std::sort(v.begin(), v.end());
      inst.games = {v};
      inst.merged = merged;
      break;
    }
    case AxiomId::kMM:
    case AxiomId::kQMM: {
      auto v = sample_antichain(n, rng);
      inst.games = {v, extend_around(v, n, i, coin(rng, 0.7), rng)};
      inst.feature = i;
      break;
    }
    case AxiomId::kCM:
      inst.games = {sample_antichain(n, rng), sample_antichain(n, rng)};
      inst.feature = i;
      break;
    case AxiomId::kISM: {
      auto w = sample_antichain(n, rng);
      auto through = containing(w, i);
      std::vector<Coalition> shrinkable;
      for (const Coalition& s : through) {
        if (s.size() >= 2) shrinkable.push_back(s);
      }
      if (shrinkable.empty() || coin(rng, 0.2)) {
        inst.games = {w, w};
      } else {
        const Coalition big = shrinkable[uniform(rng, 0, shrinkable.size() - 1)];
        const Coalition dropped = random_nonempty_subset(n, rng, big.without(i));
        const Coalition small = big - dropped;
        std::vector<Coalition> v;
        for (const Coalition& s : w) {
          if (s != big) v.push_back(s);
        }
        v.push_back(small);
        inst.games = {minimalize(v), w};
      }
      inst.feature = i;
      break;
    }
    case AxiomId::kTMCE:
    case AxiomId::kMCE:
    case AxiomId::kGE:
    case AxiomId::kTP:
      inst.games = {sample_antichain(n, rng)};
      break;
    default:
      fail(ErrorCode::kInvariantViolation, "no game generator for " + std::string(axiom_name(axiom)));
  }
  return inst;
}

inline SyntheticQuasiFamily random_synthetic_family(std::size_t n, Rng& rng, const Coalition& forbidden_critical) {
  SyntheticQuasiFamily family{n, {}, {}};
  const std::size_t count = uniform(rng, 1, 2 * n);
  const Coalition allowed = forbidden_critical.complement();
  for (std::size_t k = 0; k < count; ++k) {
    const Coalition s = random_nonempty_subset(n, rng, Coalition::full(n));
    if ((s & allowed).is_empty()) continue;
    if (std::find(family.sets.begin(), family.sets.end(), s) != family.sets.end()) continue;
    family.sets.push_back(s);
    family.critical.push_back(random_nonempty_subset(n, rng, s & allowed));
  }
  return family;
}

inline AxiomInstance generate_family_instance(AxiomId axiom, Rng& rng) {
  AxiomInstance inst;
  inst.n = uniform(rng, 3, 7);
  const std::size_t n = inst.n;
  const std::size_t i = uniform(rng, 0, n - 1);
  switch (axiom) {
    case AxiomId::kAQM: {
      SyntheticQuasiFamily g = random_synthetic_family(n, rng, Coalition::empty(n));
      SyntheticQuasiFamily h = g;
      const bool grow = coin(rng, 0.7);
      SyntheticQuasiFamily extra =
          random_synthetic_family(n, rng, grow ? Coalition::empty(n) : Coalition::of(n, {i}));
      for (std::size_t k = 0; k < extra.sets.size(); ++k) {
        if (std::find(h.sets.begin(), h.sets.end(), extra.sets[k]) != h.sets.end()) continue;
        h.sets.push_back(extra.sets[k]);
        h.critical.push_back(extra.critical[k]);
      }
      inst.families = {g, h};
      inst.feature = i;
      break;
    }
    case AxiomId::kAQCE:
      inst.families = {random_synthetic_family(n, rng, Coalition::empty(n))};
      break;
    case AxiomId::kAS:
      inst.families = {random_synthetic_family(n, rng, Coalition::empty(n))};
      inst.permutation = random_permutation(n, rng);
      break;
    case AxiomId::kANF: {
      Coalition nulls = random_nonempty_subset(n, rng, Coalition::full(n));
      if (nulls.size() == n) nulls = nulls.without(i);
      inst.families = {random_synthetic_family(n, rng, nulls)};
      break;
    }
    default:
      fail(ErrorCode::kInvariantViolation, "no family generator for " + std::string(axiom_name(axiom)));
  }
  return inst;
}

// Antichains with planted relations between features: M_i within M_j,
// M_i = M_j, and null features.
inline AxiomInstance generate_estimator_instance(Rng& rng) {
  AxiomInstance inst;
  inst.n = uniform(rng, 3, 7);
  const std::size_t n = inst.n;
  std::vector<Coalition> causes = sample_antichain(n, rng);
  const std::size_t edits = uniform(rng, 1, 3);
  for (std::size_t e = 0; e < edits; ++e) {
    const std::size_t i = uniform(rng, 0, n - 1);
    std::size_t j = uniform(rng, 0, n - 2);
    if (j >= i) ++j;
    switch (uniform(rng, 0, 2)) {
      case 0:  // every cause through i also goes through j
        for (Coalition& s : causes) {
          if (s.contains(i)) s = s.with(j);
        }
        break;
      case 1:  // i and j always appear together
        for (Coalition& s : causes) {
          if (s.contains(i) || s.contains(j)) s = s.with(i).with(j);
        }
        break;
      default:  // i becomes null
        causes.erase(std::remove_if(causes.begin(), causes.end(), [&](const Coalition& s) { return s.contains(i); }),
                     causes.end());
        break;
    }
    causes = minimalize(causes);
  }
  inst.games = {causes};
  inst.estimator_seed = std::uniform_int_distribution<std::uint64_t>()(rng);
  return inst;
}

// --- evaluators -------------------------------------------------------------

inline std::size_t smallest_size(const std::vector<Coalition>& family) {
  std::size_t best = 0;
  for (const Coalition& s : family) {
    if (best == 0 || s.size() < best) best = s.size();
  }
  return best;
}

inline InstanceOutcome evaluate_game_axiom(const GameIndexProcedure& p, AxiomId axiom, const AxiomInstance& inst) {
  const std::size_t n = inst.n;
  const Game v = make_explicit_cause_game(n, inst.games.at(0));
  const GameFamilies fam(v);
  const auto gamma = p.compute(v);
  if (gamma.size() != n) return violated("index returned " + std::to_string(gamma.size()) + " values for n=" + std::to_string(n));

  switch (axiom) {
    case AxiomId::kMSM: {
      const std::size_t i = *inst.feature;
      const Game w = make_explicit_cause_game(n, inst.games.at(1));
      const auto mi_v = fam.minimal.feature_family(i);
      const auto mi_w = minimal_causes(w).feature_family(i);
      if (mi_v.empty() || mi_w.empty()) return not_applicable();
      const auto gamma_w = p.compute(w);
      const std::size_t kv = smallest_size(mi_v), kw = smallest_size(mi_w);
      // Smaller smallest cause, higher value; equal sizes, equal values.
      if (kv == kw) {
        if (gamma[i] != gamma_w[i]) {
          return violated("equal smallest-cause sizes " + std::to_string(kv) + " but values " + to_string(gamma[i]) +
                          " vs " + to_string(gamma_w[i]));
        }
        return holds({"equality-branch"});
      }
      const bool ok = kv < kw ? gamma[i] >= gamma_w[i] : gamma[i] <= gamma_w[i];
      if (!ok) {
        return violated("smallest causes " + std::to_string(kv) + " vs " + std::to_string(kw) + " but values " +
                        to_string(gamma[i]) + " vs " + to_string(gamma_w[i]));
      }
      return holds();
    }
    case AxiomId::kUE: {
      const std::size_t i = *inst.feature;
      const auto mi = fam.minimal.feature_family(i);
      if (mi.size() != 1 || mi[0] != Coalition::of(n, {i})) return not_applicable();
      if (gamma[i] != 1) return violated("M_i(v) = {{i}} but value " + to_string(gamma[i]));
      return holds();
    }
    case AxiomId::kS: {
      const Game permuted = permute(v, inst.permutation);
      const auto gamma_pi = p.compute(permuted);
      for (std::size_t j = 0; j < n; ++j) {
        if (gamma_pi[j] != gamma[inst.permutation[j]]) {
          return violated("feature " + std::to_string(j + 1) + " of the permuted game gets " + to_string(gamma_pi[j]) +
                          ", its preimage " + std::to_string(inst.permutation[j] + 1) + " had " +
                          to_string(gamma[inst.permutation[j]]));
        }
      }
      return holds();
    }
    case AxiomId::kNF: {
      bool any = false;
      for (std::size_t j = 0; j < n; ++j) {
        if (!fam.minimal.feature_family(j).empty()) continue;
        any = true;
        if (gamma[j] != 0) return violated("null feature " + std::to_string(j + 1) + " gets " + to_string(gamma[j]));
      }
      return any ? holds() : not_applicable();
    }
    case AxiomId::kC: {
      const Coalition merged = *inst.merged;
      for (std::size_t j : merged.members()) {
        if (fam.minimal.feature_family(j).empty()) return not_applicable();
      }
      const Contraction reduced = contract(v, merged);
      const auto gamma_t = p.compute(reduced.game);
      Rational sum = 0;
      for (std::size_t j : merged.members()) sum += gamma[j];
      const Rational& combined = gamma_t[reduced.merged_feature];
      if (combined > sum) {
        return violated("[T] gets " + to_string(combined) + " > sum over T " + to_string(sum));
      }
      const auto causes = fam.minimal.causes();
      bool equality_case = std::find(causes.begin(), causes.end(), merged) != causes.end();
      for (std::size_t j : merged.members()) {
        equality_case = equality_case && smallest_size(fam.minimal.feature_family(j)) == merged.size();
      }
      if (equality_case) {
        if (combined != sum) {
          return violated("T is a smallest minimal cause of each member but [T] gets " + to_string(combined) +
                          " != " + to_string(sum));
        }
        return holds({"equality-branch"});
      }
      return holds({combined < sum ? "strict" : "tight"});
    }
    case AxiomId::kMM:
    case AxiomId::kQMM: {
      const std::size_t i = *inst.feature;
      const Game w = make_explicit_cause_game(n, inst.games.at(1));
      const GameFamilies fam_w(w);
      const bool quasi = axiom == AxiomId::kQMM;
      const auto a = quasi ? fam.quasi_minimal.feature_family(i) : fam.minimal.feature_family(i);
      const auto b = quasi ? fam_w.quasi_minimal.feature_family(i) : fam_w.minimal.feature_family(i);
      if (!is_subfamily(a, b)) return not_applicable();
      const auto gamma_w = p.compute(w);
      if (gamma[i] > gamma_w[i]) {
        return violated("family grows but value drops: " + to_string(gamma[i]) + " > " + to_string(gamma_w[i]));
      }
      if (a == b) {
        if (gamma[i] != gamma_w[i]) {
          return violated("identical families but values " + to_string(gamma[i]) + " vs " + to_string(gamma_w[i]));
        }
        return holds({"equality-branch"});
      }
      return holds();
    }
    case AxiomId::kTMCE: {
      Rational expected = 0;
      for (const Coalition& s : fam.minimal.causes()) expected += s.size();
      expected *= pow2_inverse(n - 1);
      Rational total = 0;
      for (const auto& x : gamma) total += x;
      if (total != expected) return violated("sum " + to_string(total) + " != " + to_string(expected));
      return holds();
    }
    case AxiomId::kMCE: {
      const Rational expected = Rational(fam.minimal.size()) * pow2_inverse(n - 1);
      Rational total = 0;
      for (const auto& x : gamma) total += x;
      if (total != expected) return violated("sum " + to_string(total) + " != " + to_string(expected));
      return holds();
    }
    case AxiomId::kCM: {
      const std::size_t i = *inst.feature;
      const Game w = make_explicit_cause_game(n, inst.games.at(1));
      const auto gamma_w = p.compute(w);
      const std::size_t cv = fam.minimal.feature_family(i).size();
      const std::size_t cw = minimal_causes(w).feature_family(i).size();
      if (cv == cw) {
        if (gamma[i] != gamma_w[i]) {
          return violated("equal counts " + std::to_string(cv) + " but values " + to_string(gamma[i]) + " vs " +
                          to_string(gamma_w[i]));
        }
        return holds({"equality-branch"});
      }
      const bool ok = cv < cw ? gamma[i] <= gamma_w[i] : gamma[i] >= gamma_w[i];
      if (!ok) {
        return violated("counts " + std::to_string(cv) + " vs " + std::to_string(cw) + " but values " +
                        to_string(gamma[i]) + " vs " + to_string(gamma_w[i]));
      }
      return holds();
    }
    case AxiomId::kISM: {
      const std::size_t i = *inst.feature;
      const Game w = make_explicit_cause_game(n, inst.games.at(1));
      const auto small = fam.minimal.feature_family(i);
      const auto large = minimal_causes(w).feature_family(i);
      if (small.empty() || !containment_matching(small, large)) return not_applicable();
      const auto gamma_w = p.compute(w);
      if (small == large) {
        if (gamma[i] != gamma_w[i]) {
          return violated("identical families but values " + to_string(gamma[i]) + " vs " + to_string(gamma_w[i]));
        }
        return holds({"equality-branch"});
      }
      if (!(gamma[i] > gamma_w[i])) {
        return violated("M_i(v) = " + family_text(small) + " shrinks M_i(v') = " + family_text(large) +
                        " but values " + to_string(gamma[i]) + " vs " + to_string(gamma_w[i]) + " are not strictly ordered");
      }
      return holds({"strict"});
    }
    case AxiomId::kGE: {
      Rational total = 0;
      for (const auto& x : gamma) total += x;
      const Rational expected = v(Coalition::full(n)) ? 1 : 0;
      if (total != expected) return violated("sum " + to_string(total) + " != v(N) = " + to_string(expected));
      return holds();
    }
    case AxiomId::kTP: {
      BigInt swings = 0;
      for (std::size_t j = 0; j < n; ++j) {
        const std::uint64_t bit = std::uint64_t{1} << j;
        for (std::uint64_t s = 0; s <= full_mask(n); ++s) {
          if (s & bit) continue;
          swings += static_cast<int>(v.wins(s | bit)) - static_cast<int>(v.wins(s));
        }
      }
      const Rational expected = Rational(swings) * pow2_inverse(n - 1);
      Rational total = 0;
      for (const auto& x : gamma) total += x;
      if (total != expected) return violated("sum " + to_string(total) + " != total power " + to_string(expected));
      return holds();
    }
    default:
      fail(ErrorCode::kInvalidArgument,
           "axiom " + std::string(axiom_name(axiom)) + " does not apply to the game index '" + p.name + "'");
  }
}

inline SyntheticQuasiFamily permute_family(const SyntheticQuasiFamily& family, const std::vector<std::size_t>& pi) {
  SyntheticQuasiFamily out{family.n, {}, {}};
  for (std::size_t k = 0; k < family.sets.size(); ++k) {
    out.sets.emplace_back(family.n, permute_mask(family.sets[k].mask(), pi));
    out.critical.emplace_back(family.n, permute_mask(family.critical[k].mask(), pi));
  }
  return out;
}

inline InstanceOutcome evaluate_family_axiom(const FamilyIndexProcedure& p, AxiomId axiom, const AxiomInstance& inst) {
  const std::size_t n = inst.n;
  const SyntheticQuasiFamily& g = inst.families.at(0);
  g.validate();
  const auto omega = p.compute(g);
  if (omega.size() != n) return violated("index returned the wrong number of values");
  switch (axiom) {
    case AxiomId::kAQM: {
      const std::size_t i = *inst.feature;
      const SyntheticQuasiFamily& h = inst.families.at(1);
      h.validate();
      // Shared sets must carry the same chi: one feasible mapping for both.
      for (std::size_t a = 0; a < g.sets.size(); ++a) {
        for (std::size_t b = 0; b < h.sets.size(); ++b) {
          if (g.sets[a] == h.sets[b] && g.critical[a] != h.critical[b]) return not_applicable();
        }
      }
      const auto gi = g.feature_family(i), hi = h.feature_family(i);
      if (!is_subfamily(gi, hi)) return not_applicable();
      const auto omega_h = p.compute(h);
      if (omega[i] > omega_h[i]) return violated("G_i within H_i but " + to_string(omega[i]) + " > " + to_string(omega_h[i]));
      if (gi == hi) {
        if (omega[i] != omega_h[i]) return violated("G_i = H_i but values differ");
        return holds({"equality-branch"});
      }
      return holds();
    }
    case AxiomId::kAQCE: {
      Rational total = 0;
      for (const auto& x : omega) total += x;
      if (total != Rational(g.sets.size())) {
        return violated("sum " + to_string(total) + " != |G| = " + std::to_string(g.sets.size()));
      }
      return holds();
    }
    case AxiomId::kAS: {
      const auto omega_pi = p.compute(permute_family(g, inst.permutation));
      for (std::size_t i = 0; i < n; ++i) {
        if (omega_pi[inst.permutation[i]] != omega[i]) {
          return violated("feature " + std::to_string(i + 1) + " maps to " + std::to_string(inst.permutation[i] + 1) +
                          " but values " + to_string(omega[i]) + " vs " + to_string(omega_pi[inst.permutation[i]]));
        }
      }
      return holds();
    }
    case AxiomId::kANF: {
      bool any = false;
      for (std::size_t i = 0; i < n; ++i) {
        if (!g.feature_family(i).empty()) continue;
        any = true;
        if (omega[i] != 0) return violated("feature " + std::to_string(i + 1) + " is never critical but gets " + to_string(omega[i]));
      }
      return any ? holds() : not_applicable();
    }
    default:
      fail(ErrorCode::kInvalidArgument,
           "axiom " + std::string(axiom_name(axiom)) + " does not apply to the family index '" + p.name + "'");
  }
}

inline InstanceOutcome evaluate_estimator_axiom(const EstimatorProcedure& p, AxiomId axiom, const AxiomInstance& inst) {
  const std::size_t n = inst.n;
  const Game v = make_explicit_cause_game(n, inst.games.at(0));
  const GameFamilies fam(v);
  const auto gamma = p.compute(v, inst.estimator_seed);
  std::vector<std::vector<Coalition>> m(n), g(n);
  for (std::size_t i = 0; i < n; ++i) {
    m[i] = fam.minimal.feature_family(i);
    g[i] = fam.quasi_minimal.feature_family(i);
  }
  bool any = false;
  for (std::size_t i = 0; i < n; ++i) {
    if (axiom == AxiomId::kNF) {
      if (!m[i].empty()) continue;
      any = true;
      if (gamma[i] != 0) return violated("null feature " + std::to_string(i + 1) + " estimated at " + to_string(gamma[i]));
      continue;
    }
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j) continue;
      const std::string pair = "features " + std::to_string(i + 1) + ", " + std::to_string(j + 1);
      switch (axiom) {
        case AxiomId::kRQM:
          if (!is_subfamily(g[i], g[j])) break;
          any = true;
          if (gamma[i] > gamma[j]) return violated(pair + ": G_i within G_j but " + to_string(gamma[i]) + " > " + to_string(gamma[j]));
          break;
        case AxiomId::kRMM:
          if (!is_subfamily(m[i], m[j])) break;
          any = true;
          if (gamma[i] > gamma[j]) return violated(pair + ": M_i within M_j but " + to_string(gamma[i]) + " > " + to_string(gamma[j]));
          break;
        case AxiomId::kRS:
          if (m[i] != m[j]) break;
          any = true;
          if (gamma[i] != gamma[j]) return violated(pair + ": M_i = M_j but " + to_string(gamma[i]) + " != " + to_string(gamma[j]));
          break;
        default:
          fail(ErrorCode::kInvalidArgument,
               "axiom " + std::string(axiom_name(axiom)) + " does not apply to the estimator '" + p.name + "'");
      }
    }
  }
  return any ? holds() : not_applicable();
}

inline bool is_game_axiom(AxiomId a) {
  switch (a) {
    case AxiomId::kMSM: case AxiomId::kUE: case AxiomId::kS: case AxiomId::kNF: case AxiomId::kC:
    case AxiomId::kMM: case AxiomId::kTMCE: case AxiomId::kCM: case AxiomId::kMCE: case AxiomId::kISM:
    case AxiomId::kQMM: case AxiomId::kGE: case AxiomId::kTP:
      return true;
    default:
      return false;
  }
}

inline bool is_family_axiom(AxiomId a) {
  return a == AxiomId::kAQM || a == AxiomId::kAQCE || a == AxiomId::kAS || a == AxiomId::kANF;
}

inline bool is_estimator_axiom(AxiomId a) {
  return a == AxiomId::kRQM || a == AxiomId::kRMM || a == AxiomId::kRS || a == AxiomId::kNF;
}

inline void require_applicable(const IndexProcedure& procedure, AxiomId axiom) {
  if (axiom == AxiomId::kE) {
    fail(ErrorCode::kInvalidArgument, "(E) is only used by the impossibility demonstration");
  }
  const bool ok = std::visit(
      [axiom](const auto& p) {
        using P = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<P, GameIndexProcedure>) return is_game_axiom(axiom);
        if constexpr (std::is_same_v<P, FamilyIndexProcedure>) return is_family_axiom(axiom);
        if constexpr (std::is_same_v<P, EstimatorProcedure>) return is_estimator_axiom(axiom);
      },
      procedure);
  if (!ok) {
    fail(ErrorCode::kInvalidArgument, "axiom " + std::string(axiom_name(axiom)) + " does not apply to '" +
                                          procedure_name(procedure) + "'");
  }
}

}  // namespace axioms_detail

// Re-runs one instance; used by the sweeps and to re-check stored witnesses.
inline InstanceOutcome evaluate_axiom_instance(const IndexProcedure& procedure, AxiomId axiom,
                                               const AxiomInstance& instance) {
  axioms_detail::require_applicable(procedure, axiom);
  return std::visit(
      [&](const auto& p) -> InstanceOutcome {
        using P = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<P, GameIndexProcedure>) return axioms_detail::evaluate_game_axiom(p, axiom, instance);
        if constexpr (std::is_same_v<P, FamilyIndexProcedure>) return axioms_detail::evaluate_family_axiom(p, axiom, instance);
        if constexpr (std::is_same_v<P, EstimatorProcedure>) return axioms_detail::evaluate_estimator_axiom(p, axiom, instance);
      },
      procedure);
}

// Runs `trials` applicable randomized instances (seeded per trial index, so
// the first witness found is fixed by the seed). Gives up after 50x as many
// attempts if too few instances turn out applicable.
inline AxiomCheck check_axiom(const IndexProcedure& procedure, AxiomId axiom, std::size_t trials, std::uint64_t seed) {
  axioms_detail::require_applicable(procedure, axiom);
  AxiomCheck check;
  check.axiom = axiom;
  check.procedure = procedure_name(procedure);
  const bool estimator = std::holds_alternative<EstimatorProcedure>(procedure);
  const bool family = std::holds_alternative<FamilyIndexProcedure>(procedure);
  const std::size_t max_attempts = trials * 50 + 50;
  for (std::size_t attempt = 0; check.trials < trials && attempt < max_attempts; ++attempt) {
    std::seed_seq seq{seed, static_cast<std::uint64_t>(attempt), static_cast<std::uint64_t>(axiom)};
    axioms_detail::Rng rng(seq);
    AxiomInstance instance = estimator ? axioms_detail::generate_estimator_instance(rng)
                             : family  ? axioms_detail::generate_family_instance(axiom, rng)
                                       : axioms_detail::generate_game_instance(axiom, rng);
    ++check.attempts;
    InstanceOutcome outcome = evaluate_axiom_instance(procedure, axiom, instance);
    if (outcome.verdict == Verdict::kNotApplicable) continue;
    ++check.trials;
    for (const std::string& tag : outcome.tags) ++check.tags[tag];
    if (outcome.verdict == Verdict::kViolated) {
      check.passed = false;
      check.detail = outcome.detail;
      check.witness = std::move(instance);
      break;
    }
  }
  return check;
}

inline AxiomCheck check_axiom(std::string_view procedure, AxiomId axiom, std::size_t trials, std::uint64_t seed) {
  return check_axiom(named_procedure(procedure), axiom, trials, seed);
}

// ---------------------------------------------------------------------------
// No index satisfies (MM), (E), (S) and (NF): replay of the n = 4 argument.

struct ProofStep {
  std::string claim;
  std::vector<AxiomId> cites;
  std::vector<Rational> values;
};

struct ImpossibilityTrace {
  std::vector<ProofStep> steps;
  std::vector<Rational> forced_v;        // gamma(v), M(v) = {{1,2}}
  std::vector<Rational> forced_v_prime;  // gamma(v'), M(v') = {{1,2},{3,4}}
  Rational forced_sum;                   // sum of gamma(v')
  Rational required_sum;                 // what (E) demands
  bool contradiction = false;
};

inline ImpossibilityTrace demonstrate_impossibility() {
  constexpr std::size_t n = 4;
  auto premise = [](bool ok, const std::string& what) {
    if (!ok) fail(ErrorCode::kInvariantViolation, "impossibility premise failed: " + what);
  };
  ImpossibilityTrace trace;
  const Coalition a = Coalition::of(n, {0, 1});
  const Coalition b = Coalition::of(n, {2, 3});
  const Game v = make_explicit_cause_game(n, {a});
  const Game v_prime = make_explicit_cause_game(n, {a, b});
  const CauseFamily m_v = minimal_causes(v);
  const CauseFamily m_vp = minimal_causes(v_prime);
  premise(m_v.causes() == std::vector<Coalition>{a}, "M(v) = {{1,2}}");
  premise(m_vp.causes() == std::vector<Coalition>{a, b}, "M(v') = {{1,2},{3,4}}");

  std::vector<Rational> gv(n, Rational(0));
  // (NF): 3 and 4 are in no minimal cause of v.
  premise(m_v.feature_family(2).empty() && m_v.feature_family(3).empty(), "3 and 4 are null in v");
  trace.steps.push_back({"features 3 and 4 are null in v, so gamma_3(v) = gamma_4(v) = 0", {AxiomId::kNF}, {0, 0}});
  // (S): swapping 1 and 2 leaves v unchanged, so gamma_1(v) = gamma_2(v).
  premise(extensionally_equal(permute(v, {1, 0, 2, 3}), v), "swap(1,2) fixes v");
  // (E): the four values sum to 1.
  const Rational total = 1;
  gv[0] = gv[1] = (total - gv[2] - gv[3]) / 2;
  trace.steps.push_back({"swap(1,2) fixes v and the values sum to 1, so gamma_1(v) = gamma_2(v) = 1/2",
                         {AxiomId::kS, AxiomId::kE}, {gv[0], gv[1]}});
  trace.forced_v = gv;

  // v'' = pi v with pi = (1 3)(2 4): M(v'') = {{3,4}} and by (S)
  // gamma_3(v'') = gamma_1(v), gamma_4(v'') = gamma_2(v).
  const std::vector<std::size_t> pi = {2, 3, 0, 1};
  const Game v_second = permute(v, pi);
  const CauseFamily m_vs = minimal_causes(v_second);
  premise(m_vs.causes() == std::vector<Coalition>{b}, "M(pi v) = {{3,4}}");
  std::vector<Rational> gvs(n);
  for (std::size_t j = 0; j < n; ++j) gvs[j] = gv[pi[j]];
  trace.steps.push_back({"v'' = (1 3)(2 4) v has M(v'') = {{3,4}}, so gamma_3(v'') = gamma_4(v'') = 1/2",
                         {AxiomId::kS}, {gvs[2], gvs[3]}});

  // (MM) equality clause: identical M_i give identical values.
  std::vector<Rational> gvp(n);
  for (std::size_t i : {0, 1}) {
    premise(m_vp.feature_family(i) == m_v.feature_family(i), "M_i(v') = M_i(v) for i in {1,2}");
    gvp[i] = gv[i];
  }
  for (std::size_t i : {2, 3}) {
    premise(m_vp.feature_family(i) == m_vs.feature_family(i), "M_i(v') = M_i(v'') for i in {3,4}");
    gvp[i] = gvs[i];
  }
  trace.steps.push_back({"M_i(v') = M_i(v) for i in {1,2} and M_i(v') = M_i(v'') for i in {3,4}, so every "
                         "gamma_i(v') = 1/2",
                         {AxiomId::kMM}, gvp});
  trace.forced_v_prime = gvp;
  trace.forced_sum = 0;
  for (const Rational& x : gvp) trace.forced_sum += x;
  trace.required_sum = 1;
  trace.contradiction = trace.forced_sum != trace.required_sum;
  trace.steps.push_back({"sum of gamma_i(v') is " + to_string(trace.forced_sum) + " but (E) requires 1",
                         {AxiomId::kE}, {trace.forced_sum}});
  return trace;
}

// ---------------------------------------------------------------------------
// Counting-PARTITION test vectors.

struct PartitionInstance {
  std::vector<std::uint64_t> values;  // A
  std::uint64_t total = 0;            // W
  Game game;                          // w = (a_1..a_m, 1), q = (W+1)/2
  std::size_t pivot = 0;              // feature m+1, 0-based index m
  // Subsets of A (by position) summing to W/2; 0 when W is odd. This is
  // the counting-PARTITION answer.
  std::uint64_t subset_sum_count = 0;
  // Subsets summing to floor(W/2). Always equals |M_{m+1}(v)| = |G_{m+1}(v)|,
  // and equals subset_sum_count when W is even.
  std::uint64_t floor_half_count = 0;
};

inline PartitionInstance partition_game(const std::vector<std::uint64_t>& values) {
  if (values.empty()) fail(ErrorCode::kInvalidArgument, "PARTITION instance must be non-empty");
  if (values.size() > 30) fail(ErrorCode::kCapacity, "brute-force subset count limited to 30 values");
  std::uint64_t total = 0;
  std::vector<Rational> weights;
  for (std::uint64_t a : values) {
    if (a == 0) fail(ErrorCode::kInvalidArgument, "PARTITION entries must be positive");
    total += a;
    weights.emplace_back(a);
  }
  weights.emplace_back(1);
  PartitionInstance out{values, total, make_weighted_voting(weights, ratio(total + 1, 2)), values.size(), 0, 0};
  const std::uint64_t target = total / 2;
  for (std::uint64_t s = 0; s < (std::uint64_t{1} << values.size()); ++s) {
    std::uint64_t sum = 0;
    for (std::size_t k = 0; k < values.size(); ++k) {
      if ((s >> k) & 1U) sum += values[k];
    }
    if (sum == target) ++out.floor_half_count;
  }
  if (total % 2 == 0) out.subset_sum_count = out.floor_half_count;
  return out;
}

}  // namespace causal_explain
