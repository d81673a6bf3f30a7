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
#include <bit>
#include <cstdint>
#include <functional>
#include <limits>
#include <memory>
#include <numeric>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "causal_explain/coalition.hpp"
#include "causal_explain/errors.hpp"
#include "causal_explain/rational.hpp"

namespace causal_explain {

enum class GameKind {
  kTruthTable,
  kWeightedVoting,
  kUnanimity,
  kExplicitMinimalCauses,
  kCausalValue,
  kContracted,
  kPermuted,
  kCallable,
};

inline std::string_view game_kind_name(GameKind kind) {
  switch (kind) {
    case GameKind::kTruthTable: return "truth-table";
    case GameKind::kWeightedVoting: return "weighted-voting";
    case GameKind::kUnanimity: return "unanimity";
    case GameKind::kExplicitMinimalCauses: return "explicit-minimal-causes";
    case GameKind::kCausalValue: return "causal-value";
    case GameKind::kContracted: return "contracted";
    case GameKind::kPermuted: return "permuted";
    case GameKind::kCallable: return "callable";
  }
  return "unknown";
}

// Evaluation backend of a game. Implementations are immutable after
// construction, so a single instance may be evaluated from many threads.
class GameImpl {
 public:
  virtual ~GameImpl() = default;
  virtual bool eval(std::uint64_t mask) const = 0;
};

// A monotone binary set function v over the coalitions of n features with
// v(empty) = 0. Cheap to copy; copies share the immutable backend.
class Game {
 public:
  Game(std::size_t n, GameKind kind, std::shared_ptr<const GameImpl> impl,
       std::vector<std::string> names = {})
      : n_(n), kind_(kind), impl_(std::move(impl)), names_(std::move(names)) {
    check_feature_count(n_);
    if (!names_.empty() && names_.size() != n_) {
      fail(ErrorCode::kInvalidArgument, "expected " + std::to_string(n_) + " feature names, got " +
                                            std::to_string(names_.size()));
    }
  }

  std::size_t size() const { return n_; }
  GameKind kind() const { return kind_; }

  bool operator()(const Coalition& s) const {
    if (s.universe() != n_) {
      fail(ErrorCode::kInvalidArgument, "coalition over " + std::to_string(s.universe()) +
                                            " features passed to a game over " + std::to_string(n_));
    }
    return impl_->eval(s.mask());
  }

  // Unchecked evaluation for inner loops; mask must lie within full_mask(n).
  bool wins(std::uint64_t mask) const { return impl_->eval(mask); }

  const std::vector<std::string>& names() const { return names_; }
  std::string label(std::size_t i) const {
    return names_.empty() ? std::to_string(i + 1) : names_[i];
  }

  Game with_names(std::vector<std::string> names) const {
    return Game(n_, kind_, impl_, std::move(names));
  }

  template <class T>
  const T* backend() const {
    return dynamic_cast<const T*>(impl_.get());
  }

 private:
  std::size_t n_;
  GameKind kind_;
  std::shared_ptr<const GameImpl> impl_;
  std::vector<std::string> names_;
};

// ---------------------------------------------------------------------------
// Weighted voting: v(S) = 1 iff sum_{i in S} w_i >= q, compared exactly.

class WeightedVotingImpl final : public GameImpl {
 public:
  WeightedVotingImpl(std::vector<Rational> weights, Rational threshold)
      : weights_(std::move(weights)), threshold_(std::move(threshold)) {
    // Rescale to a common denominator so evaluation is integer addition.
    BigInt lcm = boost::multiprecision::denominator(threshold_);
    for (const Rational& w : weights_) {
      lcm = boost::multiprecision::lcm(lcm, BigInt(boost::multiprecision::denominator(w)));
    }
    auto scaled = [&](const Rational& r) {
      return BigInt(boost::multiprecision::numerator(r) * (lcm / boost::multiprecision::denominator(r)));
    };
    BigInt total = 0;
    for (const Rational& w : weights_) {
      big_weights_.push_back(scaled(w));
      total += big_weights_.back();
    }
    big_threshold_ = scaled(threshold_);
    const BigInt limit = std::numeric_limits<std::int64_t>::max();
    fits_int64_ = total <= limit && big_threshold_ <= limit;
    if (fits_int64_) {
      for (const BigInt& w : big_weights_) small_weights_.push_back(w.convert_to<std::int64_t>());
      small_threshold_ = big_threshold_.convert_to<std::int64_t>();
    }
  }

  bool eval(std::uint64_t mask) const override {
    if (fits_int64_) {
      std::int64_t sum = 0;
      for (std::uint64_t m = mask; m != 0; m &= m - 1) sum += small_weights_[std::countr_zero(m)];
      return sum >= small_threshold_;
    }
    BigInt sum = 0;
    for (std::uint64_t m = mask; m != 0; m &= m - 1) sum += big_weights_[std::countr_zero(m)];
    return sum >= big_threshold_;
  }

  const std::vector<Rational>& weights() const { return weights_; }
  const Rational& threshold() const { return threshold_; }

 private:
  std::vector<Rational> weights_;
  Rational threshold_;
  std::vector<BigInt> big_weights_;
  BigInt big_threshold_;
  bool fits_int64_ = false;
  std::vector<std::int64_t> small_weights_;
  std::int64_t small_threshold_ = 0;
};

inline Game make_weighted_voting(std::vector<Rational> weights, Rational threshold) {
  if (weights.empty()) fail(ErrorCode::kInvalidGame, "weighted voting game needs at least one feature");
  check_feature_count(weights.size());
  for (std::size_t i = 0; i < weights.size(); ++i) {
    if (weights[i] < 0) {
      fail(ErrorCode::kInvalidGame, "weight of feature " + std::to_string(i + 1) +
                                        " is negative (" + to_string(weights[i]) + ")");
    }
  }
  if (threshold <= 0) {
    fail(ErrorCode::kInvalidGame, "threshold must be positive so that the empty coalition loses (q=" +
                                      to_string(threshold) + ")");
  }
  const std::size_t n = weights.size();
  return Game(n, GameKind::kWeightedVoting,
              std::make_shared<WeightedVotingImpl>(std::move(weights), std::move(threshold)));
}

// ---------------------------------------------------------------------------
// Truth tables.

class TruthTableImpl final : public GameImpl {
 public:
  explicit TruthTableImpl(std::vector<std::uint64_t> bits) : bits_(std::move(bits)) {}
  bool eval(std::uint64_t mask) const override { return ((bits_[mask >> 6] >> (mask & 63)) & 1U) != 0; }
  const std::vector<std::uint64_t>& bits() const { return bits_; }

 private:
  std::vector<std::uint64_t> bits_;
};

inline constexpr std::size_t kMaxTableFeatures = 30;

// Returns the first covering pair (S, S + {i}) with v(S) = 1 > v(S + {i}),
// scanning masks in ascending order.
template <class Eval>
std::optional<std::pair<std::uint64_t, std::uint64_t>> find_monotonicity_violation(std::size_t n,
                                                                                   Eval&& eval) {
  const std::uint64_t end = std::uint64_t{1} << n;
  for (std::uint64_t s = 0; s < end; ++s) {
    if (!eval(s)) continue;
    for (std::size_t i = 0; i < n; ++i) {
      const std::uint64_t bit = std::uint64_t{1} << i;
      if ((s & bit) == 0 && !eval(s | bit)) return std::make_pair(s, s | bit);
    }
  }
  return std::nullopt;
}

inline Game make_truth_table(std::size_t n, std::vector<bool> table) {
  if (n > kMaxTableFeatures) {
    fail(ErrorCode::kCapacity, "truth tables are limited to n <= " + std::to_string(kMaxTableFeatures));
  }
  const std::uint64_t entries = std::uint64_t{1} << n;
  if (table.size() != entries) {
    fail(ErrorCode::kInvalidGame, "truth table for n=" + std::to_string(n) + " needs " +
                                      std::to_string(entries) + " entries, got " +
                                      std::to_string(table.size()));
  }
  if (table[0]) fail(ErrorCode::kInvalidGame, "the empty coalition must be losing");
  auto violation = find_monotonicity_violation(n, [&](std::uint64_t s) { return bool(table[s]); });
  if (violation) {
    fail(ErrorCode::kInvalidGame,
         "table is not monotone: " + to_string(Coalition(n, violation->first)) + " is a subset of " +
             to_string(Coalition(n, violation->second)) + " but wins while the superset loses");
  }
  std::vector<std::uint64_t> bits((entries + 63) / 64, 0);
  for (std::uint64_t s = 0; s < entries; ++s) {
    if (table[s]) bits[s >> 6] |= std::uint64_t{1} << (s & 63);
  }
  return Game(n, GameKind::kTruthTable, std::make_shared<TruthTableImpl>(std::move(bits)));
}

// Evaluates every coalition once and returns the result as a truth-table game.
inline Game tabulate(const Game& game) {
  const std::size_t n = game.size();
  if (n > kMaxTableFeatures) {
    fail(ErrorCode::kCapacity, "cannot tabulate a game with n=" + std::to_string(n));
  }
  const std::uint64_t entries = std::uint64_t{1} << n;
  std::vector<std::uint64_t> bits((entries + 63) / 64, 0);
  for (std::uint64_t s = 0; s < entries; ++s) {
    if (game.wins(s)) bits[s >> 6] |= std::uint64_t{1} << (s & 63);
  }
  return Game(n, GameKind::kTruthTable, std::make_shared<TruthTableImpl>(std::move(bits)),
              game.names());
}

// ---------------------------------------------------------------------------
// Games realized from an explicit antichain of minimal causes.

class ExplicitCauseImpl final : public GameImpl {
 public:
  explicit ExplicitCauseImpl(std::vector<std::uint64_t> causes) : causes_(std::move(causes)) {}
  bool eval(std::uint64_t mask) const override {
    return std::any_of(causes_.begin(), causes_.end(),
                       [mask](std::uint64_t c) { return (c & ~mask) == 0; });
  }
  const std::vector<std::uint64_t>& causes() const { return causes_; }

 private:
  std::vector<std::uint64_t> causes_;
};

inline Game make_explicit_cause_game(std::size_t n, const std::vector<Coalition>& causes) {
  check_feature_count(n);
  std::vector<std::uint64_t> masks;
  masks.reserve(causes.size());
  for (const Coalition& c : causes) {
    if (c.universe() != n) {
      fail(ErrorCode::kInvalidCauseFamily,
           "cause " + to_string(c) + " is over " + std::to_string(c.universe()) + " features, expected " +
               std::to_string(n));
    }
    if (c.is_empty()) fail(ErrorCode::kInvalidCauseFamily, "the empty set cannot be a cause");
    masks.push_back(c.mask());
  }
  std::sort(masks.begin(), masks.end());
  for (std::size_t a = 0; a < masks.size(); ++a) {
    for (std::size_t b = 0; b < masks.size(); ++b) {
      if (a != b && (masks[a] & ~masks[b]) == 0) {
        fail(ErrorCode::kInvalidCauseFamily,
             "causes do not form an antichain: " + to_string(Coalition(n, masks[a])) + " is contained in " +
                 to_string(Coalition(n, masks[b])));
      }
    }
  }
  return Game(n, GameKind::kExplicitMinimalCauses, std::make_shared<ExplicitCauseImpl>(std::move(masks)));
}

// Only supersets of `carrier` win.
inline Game make_unanimity(std::size_t n, const Coalition& carrier) {
  if (carrier.universe() != n || carrier.is_empty()) {
    fail(ErrorCode::kInvalidGame, "unanimity carrier must be a non-empty subset of the features");
  }
  return Game(n, GameKind::kUnanimity,
              std::make_shared<ExplicitCauseImpl>(std::vector<std::uint64_t>{carrier.mask()}));
}

inline Game make_dictator(std::size_t n, std::size_t dictator) {
  return make_unanimity(n, Coalition::of(n, {dictator}));
}

// ---------------------------------------------------------------------------
// Black-box games.

class CallableImpl final : public GameImpl {
 public:
  CallableImpl(std::size_t n, std::function<bool(const Coalition&)> fn) : n_(n), fn_(std::move(fn)) {}
  bool eval(std::uint64_t mask) const override { return fn_(Coalition(n_, mask)); }

 private:
  std::size_t n_;
  std::function<bool(const Coalition&)> fn_;
};

// Wraps a user function. The function must be monotone and safe to call
// concurrently; only v(empty) = 0 is verified here.
inline Game make_callable_game(std::size_t n, std::function<bool(const Coalition&)> fn,
                               GameKind kind = GameKind::kCallable) {
  check_feature_count(n);
  auto impl = std::make_shared<CallableImpl>(n, std::move(fn));
  if (impl->eval(0)) fail(ErrorCode::kInvalidGame, "the empty coalition must be losing");
  return Game(n, kind, std::move(impl));
}

// ---------------------------------------------------------------------------
// Transforms.

class ContractedImpl final : public GameImpl {
 public:
  ContractedImpl(Game base, std::vector<std::uint64_t> expansion)
      : base_(std::move(base)), expansion_(std::move(expansion)) {}
  bool eval(std::uint64_t mask) const override {
    std::uint64_t original = 0;
    for (std::uint64_t m = mask; m != 0; m &= m - 1) original |= expansion_[std::countr_zero(m)];
    return base_.wins(original);
  }

 private:
  Game base_;
  std::vector<std::uint64_t> expansion_;
};

// v_[T] together with the feature mapping: `members[k]` is the set of
// original features that reduced feature k stands for.
struct Contraction {
  Game game;
  std::size_t merged_feature;
  std::vector<Coalition> members;
};

// Merges T into one feature [T]. [T] takes the smallest index of T and the
// remaining features are renumbered densely in their original order.
inline Contraction contract(const Game& game, const Coalition& merged) {
  const std::size_t n = game.size();
  if (merged.universe() != n) fail(ErrorCode::kInvalidArgument, "contracted set is over the wrong universe");
  if (merged.size() < 2) {
    fail(ErrorCode::kInvalidArgument, "contraction needs |T| >= 2, got " + to_string(merged));
  }
  const std::size_t anchor = merged.members().front();
  std::vector<std::uint64_t> expansion;
  std::vector<Coalition> members;
  std::vector<std::string> names;
  std::size_t merged_index = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (merged.contains(i) && i != anchor) continue;
    if (i == anchor) {
      merged_index = expansion.size();
      expansion.push_back(merged.mask());
    } else {
      expansion.push_back(std::uint64_t{1} << i);
    }
    members.emplace_back(n, expansion.back());
    if (i == anchor) {
      std::string label = "[";
      for (std::size_t j : merged.members()) label += (label.size() > 1 ? "," : "") + game.label(j);
      names.push_back(label + "]");
    } else {
      names.push_back(game.label(i));
    }
  }
  const std::size_t reduced_n = expansion.size();
  Game reduced(reduced_n, GameKind::kContracted, std::make_shared<ContractedImpl>(game, std::move(expansion)),
               std::move(names));
  return Contraction{std::move(reduced), merged_index, std::move(members)};
}

inline std::vector<std::size_t> identity_permutation(std::size_t n) {
  std::vector<std::size_t> out(n);
  std::iota(out.begin(), out.end(), std::size_t{0});
  return out;
}

inline void check_permutation(std::size_t n, const std::vector<std::size_t>& pi) {
  if (pi.size() != n) fail(ErrorCode::kInvalidArgument, "permutation has the wrong length");
  std::vector<bool> seen(n, false);
  for (std::size_t v : pi) {
    if (v >= n || seen[v]) fail(ErrorCode::kInvalidArgument, "map is not a bijection on the features");
    seen[v] = true;
  }
}

// Image of a coalition under pi: { pi(i) | i in S }.
inline std::uint64_t permute_mask(std::uint64_t mask, const std::vector<std::size_t>& pi) {
  std::uint64_t out = 0;
  for (std::uint64_t m = mask; m != 0; m &= m - 1) out |= std::uint64_t{1} << pi[std::countr_zero(m)];
  return out;
}

inline std::vector<std::size_t> inverse_permutation(const std::vector<std::size_t>& pi) {
  std::vector<std::size_t> inv(pi.size());
  for (std::size_t i = 0; i < pi.size(); ++i) inv[pi[i]] = i;
  return inv;
}

class PermutedImpl final : public GameImpl {
 public:
  PermutedImpl(Game base, std::vector<std::size_t> pi) : base_(std::move(base)), pi_(std::move(pi)) {}
  bool eval(std::uint64_t mask) const override { return base_.wins(permute_mask(mask, pi_)); }

 private:
  Game base_;
  std::vector<std::size_t> pi_;
};

// (pi v)(S) = v({ pi(i) | i in S }).
inline Game permute(const Game& game, const std::vector<std::size_t>& pi) {
  check_permutation(game.size(), pi);
  std::vector<std::string> names;
  if (!game.names().empty()) {
    for (std::size_t i = 0; i < pi.size(); ++i) names.push_back(game.names()[pi[i]]);
  }
  return Game(game.size(), GameKind::kPermuted, std::make_shared<PermutedImpl>(game, pi), std::move(names));
}

// ---------------------------------------------------------------------------
// Exhaustive checks (small n).

inline std::optional<std::pair<Coalition, Coalition>> monotonicity_violation(const Game& game) {
  if (game.size() > kMaxTableFeatures) fail(ErrorCode::kCapacity, "game too large for an exhaustive check");
  auto v = find_monotonicity_violation(game.size(), [&](std::uint64_t s) { return game.wins(s); });
  if (!v) return std::nullopt;
  return std::make_pair(Coalition(game.size(), v->first), Coalition(game.size(), v->second));
}

inline bool extensionally_equal(const Game& a, const Game& b) {
  if (a.size() != b.size()) return false;
  if (a.size() > kMaxTableFeatures) fail(ErrorCode::kCapacity, "game too large for an exhaustive comparison");
  const std::uint64_t end = std::uint64_t{1} << a.size();
  for (std::uint64_t s = 0; s < end; ++s) {
    if (a.wins(s) != b.wins(s)) return false;
  }
  return true;
}

}  // namespace causal_explain
