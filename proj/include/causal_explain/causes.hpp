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

#include <bit>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "causal_explain/coalition.hpp"
#include "causal_explain/errors.hpp"
#include "causal_explain/game.hpp"

namespace causal_explain {

// Exhaustive enumeration visits all 2^n coalitions.
inline constexpr std::size_t kMaxExhaustiveFeatures = 24;

inline void check_exhaustive_capacity(std::size_t n) {
  if (n > kMaxExhaustiveFeatures) {
    fail(ErrorCode::kCapacity, "exhaustive enumeration supports n <= " +
                                   std::to_string(kMaxExhaustiveFeatures) + " (n=" + std::to_string(n) +
                                   "); use the sampling estimators instead");
  }
}

enum class CauseKind { kMinimal, kQuasiMinimal };

inline std::string_view cause_kind_name(CauseKind kind) {
  return kind == CauseKind::kMinimal ? "minimal" : "quasi-minimal";
}

// M(v) or G(v), in ascending mask order. For quasi-minimal families every
// cause carries its critical set; for minimal ones the critical set of a
// cause is the cause itself.
class CauseFamily {
 public:
  CauseFamily(std::size_t n, CauseKind kind, std::vector<std::uint64_t> causes,
              std::vector<std::uint64_t> critical = {})
      : n_(n), kind_(kind), causes_(std::move(causes)), critical_(std::move(critical)) {
    if (kind_ == CauseKind::kMinimal) critical_ = causes_;
    if (critical_.size() != causes_.size()) {
      fail(ErrorCode::kInvalidCauseFamily, "every quasi-minimal cause needs a critical set");
    }
  }

  std::size_t universe() const { return n_; }
  CauseKind kind() const { return kind_; }
  std::size_t size() const { return causes_.size(); }

  Coalition cause(std::size_t k) const { return Coalition(n_, causes_[k]); }
  Coalition critical(std::size_t k) const { return Coalition(n_, critical_[k]); }
  const std::vector<std::uint64_t>& cause_masks() const { return causes_; }
  const std::vector<std::uint64_t>& critical_masks() const { return critical_; }

  std::vector<Coalition> causes() const {
    std::vector<Coalition> out;
    out.reserve(causes_.size());
    for (std::uint64_t c : causes_) out.emplace_back(n_, c);
    return out;
  }

  // M_i(v) = { S in M(v) : i in S } or G_i(v) = { S in G(v) : i in chi(S) }.
  std::vector<Coalition> feature_family(std::size_t i) const {
    std::vector<Coalition> out;
    const std::uint64_t bit = std::uint64_t{1} << i;
    for (std::size_t k = 0; k < causes_.size(); ++k) {
      if (critical_[k] & bit) out.emplace_back(n_, causes_[k]);
    }
    return out;
  }

 private:
  std::size_t n_;
  CauseKind kind_;
  std::vector<std::uint64_t> causes_;
  std::vector<std::uint64_t> critical_;
};

// Winning set of a game as a bit table, filled by an ascending-mask sweep.
// Every proper subset of S has a smaller mask, so when some S \ {i} already
// wins, S wins by monotonicity and the oracle is not consulted. Oracle calls
// are therefore only spent on coalitions that are either losing or minimal.
class WinTable {
 public:
  explicit WinTable(const Game& game) : n_(game.size()) {
    check_exhaustive_capacity(n_);
    const std::uint64_t entries = std::uint64_t{1} << n_;
    bits_.assign((entries + 63) / 64, 0);
    for (std::uint64_t s = 0; s < entries; ++s) {
      bool dominated = false;
      for (std::uint64_t m = s; m != 0; m &= m - 1) {
        if (wins(s & ~(m & -m))) {
          dominated = true;
          break;
        }
      }
      if (dominated) {
        set(s);
        continue;
      }
      ++oracle_calls_;
      if (game.wins(s)) {
        set(s);
        minimal_.push_back(s);
      }
    }
    if (wins(0)) fail(ErrorCode::kInvalidGame, "the empty coalition wins");
  }

  std::size_t universe() const { return n_; }
  bool wins(std::uint64_t s) const { return ((bits_[s >> 6] >> (s & 63)) & 1U) != 0; }
  const std::vector<std::uint64_t>& minimal() const { return minimal_; }
  std::uint64_t oracle_calls() const { return oracle_calls_; }

  // { i in S : S \ {i} loses }, empty when S loses.
  std::uint64_t critical(std::uint64_t s) const {
    if (!wins(s)) return 0;
    std::uint64_t out = 0;
    for (std::uint64_t m = s; m != 0; m &= m - 1) {
      const std::uint64_t bit = m & -m;
      if (!wins(s & ~bit)) out |= bit;
    }
    return out;
  }

 private:
  void set(std::uint64_t s) { bits_[s >> 6] |= std::uint64_t{1} << (s & 63); }

  std::size_t n_;
  std::vector<std::uint64_t> bits_;
  std::vector<std::uint64_t> minimal_;
  std::uint64_t oracle_calls_ = 0;
};

inline CauseFamily minimal_causes(const WinTable& table) {
  return CauseFamily(table.universe(), CauseKind::kMinimal, table.minimal());
}

inline CauseFamily minimal_causes(const Game& game) { return minimal_causes(WinTable(game)); }

inline CauseFamily quasi_minimal_causes(const WinTable& table) {
  std::vector<std::uint64_t> causes;
  std::vector<std::uint64_t> critical;
  const std::uint64_t entries = std::uint64_t{1} << table.universe();
  for (std::uint64_t s = 1; s < entries; ++s) {
    const std::uint64_t chi = table.critical(s);
    if (chi != 0) {
      causes.push_back(s);
      critical.push_back(chi);
    }
  }
  return CauseFamily(table.universe(), CauseKind::kQuasiMinimal, std::move(causes), std::move(critical));
}

inline CauseFamily quasi_minimal_causes(const Game& game) { return quasi_minimal_causes(WinTable(game)); }

// chi(S) straight from the oracle: |S| + 1 evaluations.
inline Coalition critical_set(const Game& game, const Coalition& s) {
  if (!game(s)) return Coalition::empty(game.size());
  std::uint64_t out = 0;
  for (std::size_t i : s.members()) {
    if (!game(s.without(i))) out |= std::uint64_t{1} << i;
  }
  return Coalition(game.size(), out);
}

}  // namespace causal_explain
