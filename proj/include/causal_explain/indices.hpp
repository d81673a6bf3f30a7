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

#include <array>
#include <bit>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "causal_explain/causes.hpp"
#include "causal_explain/errors.hpp"
#include "causal_explain/game.hpp"
#include "causal_explain/rational.hpp"

namespace causal_explain {

enum class IndexKind { kResponsibility, kHollerPackel, kDeeganPackel, kJohnston, kShapley, kBanzhaf };

inline constexpr std::array<IndexKind, 6> kAllIndexKinds = {
    IndexKind::kResponsibility, IndexKind::kHollerPackel, IndexKind::kDeeganPackel,
    IndexKind::kJohnston,       IndexKind::kShapley,      IndexKind::kBanzhaf};

inline std::string_view index_kind_name(IndexKind kind) {
  switch (kind) {
    case IndexKind::kResponsibility: return "responsibility";
    case IndexKind::kHollerPackel: return "holler-packel";
    case IndexKind::kDeeganPackel: return "deegan-packel";
    case IndexKind::kJohnston: return "johnston";
    case IndexKind::kShapley: return "shapley";
    case IndexKind::kBanzhaf: return "banzhaf";
  }
  return "unknown";
}

inline IndexKind parse_index_kind(std::string_view name) {
  for (IndexKind kind : kAllIndexKinds) {
    if (index_kind_name(kind) == name) return kind;
  }
  fail(ErrorCode::kInvalidArgument, "unknown index kind '" + std::string(name) + "'");
}

// kRaw keeps the 1/2^(n-1) normalization; kPerCause drops it.
enum class Scale { kRaw, kPerCause };

inline std::string_view scale_name(Scale scale) { return scale == Scale::kRaw ? "raw" : "per-cause"; }

inline Scale parse_scale(std::string_view name) {
  if (name == "raw") return Scale::kRaw;
  if (name == "per-cause") return Scale::kPerCause;
  fail(ErrorCode::kInvalidArgument, "unknown scale '" + std::string(name) + "'");
}

struct IndexVector {
  IndexKind kind;
  Scale scale;
  std::vector<Rational> values;

  std::size_t size() const { return values.size(); }
  const Rational& operator[](std::size_t i) const { return values[i]; }
  Rational total() const {
    Rational sum = 0;
    for (const Rational& v : values) sum += v;
    return sum;
  }
};

namespace detail {

inline void require_kind(const CauseFamily& family, CauseKind expected, IndexKind index) {
  if (family.kind() != expected) {
    fail(ErrorCode::kInvalidArgument, std::string(index_kind_name(index)) + " needs a " +
                                          std::string(cause_kind_name(expected)) + " cause family, got " +
                                          std::string(cause_kind_name(family.kind())));
  }
}

// hist[i][k] = number of causes whose "membership set" (the cause for
// minimal families, chi for quasi-minimal ones) contains i and whose
// `size_of` equals k.
template <class SizeOf>
std::vector<std::vector<std::uint64_t>> histogram(const CauseFamily& family, SizeOf size_of) {
  const std::size_t n = family.universe();
  std::vector<std::vector<std::uint64_t>> hist(n, std::vector<std::uint64_t>(n + 1, 0));
  const auto& causes = family.cause_masks();
  const auto& critical = family.critical_masks();
  for (std::size_t k = 0; k < causes.size(); ++k) {
    const std::size_t bucket = size_of(causes[k], critical[k]);
    for (std::uint64_t m = critical[k]; m != 0; m &= m - 1) ++hist[std::countr_zero(m)][bucket];
  }
  return hist;
}

inline Rational scale_factor(std::size_t n, Scale scale) {
  return scale == Scale::kRaw ? pow2_inverse(n == 0 ? 0 : n - 1) : Rational(1);
}

}  // namespace detail

// rho_i = 1 / (size of the smallest minimal cause containing i), 0 if none.
inline IndexVector responsibility(const CauseFamily& family) {
  detail::require_kind(family, CauseKind::kMinimal, IndexKind::kResponsibility);
  const std::size_t n = family.universe();
  std::vector<std::size_t> smallest(n, 0);
  for (std::uint64_t c : family.cause_masks()) {
    const std::size_t size = popcount(c);
    for (std::uint64_t m = c; m != 0; m &= m - 1) {
      std::size_t& best = smallest[std::countr_zero(m)];
      if (best == 0 || size < best) best = size;
    }
  }
  IndexVector out{IndexKind::kResponsibility, Scale::kRaw, {}};
  for (std::size_t k : smallest) out.values.push_back(k == 0 ? Rational(0) : ratio(1, k));
  return out;
}

// eta_i = |M_i(v)| (/ 2^(n-1) on the raw scale).
inline IndexVector holler_packel(const CauseFamily& family, Scale scale = Scale::kRaw) {
  detail::require_kind(family, CauseKind::kMinimal, IndexKind::kHollerPackel);
  const std::size_t n = family.universe();
  std::vector<std::uint64_t> counts(n, 0);
  for (std::uint64_t c : family.cause_masks()) {
    for (std::uint64_t m = c; m != 0; m &= m - 1) ++counts[std::countr_zero(m)];
  }
  const Rational factor = detail::scale_factor(n, scale);
  IndexVector out{IndexKind::kHollerPackel, scale, {}};
  for (std::uint64_t count : counts) out.values.push_back(Rational(count) * factor);
  return out;
}

// phi_i = sum over M_i(v) of 1/|S| (/ 2^(n-1) on the raw scale).
inline IndexVector deegan_packel(const CauseFamily& family, Scale scale = Scale::kRaw) {
  detail::require_kind(family, CauseKind::kMinimal, IndexKind::kDeeganPackel);
  const std::size_t n = family.universe();
  auto hist = detail::histogram(family, [](std::uint64_t c, std::uint64_t) { return popcount(c); });
  const Rational factor = detail::scale_factor(n, scale);
  IndexVector out{IndexKind::kDeeganPackel, scale, {}};
  for (std::size_t i = 0; i < n; ++i) {
    Rational sum = 0;
    for (std::size_t k = 1; k <= n; ++k) {
      if (hist[i][k] != 0) sum += ratio(hist[i][k], k);
    }
    out.values.push_back(sum * factor);
  }
  return out;
}

// psi_i = sum over G_i(v) of 1/|chi(S)| (/ 2^(n-1) on the raw scale).
inline IndexVector johnston(const CauseFamily& family, Scale scale = Scale::kRaw) {
  detail::require_kind(family, CauseKind::kQuasiMinimal, IndexKind::kJohnston);
  const std::size_t n = family.universe();
  auto hist = detail::histogram(family, [](std::uint64_t, std::uint64_t chi) { return popcount(chi); });
  const Rational factor = detail::scale_factor(n, scale);
  IndexVector out{IndexKind::kJohnston, scale, {}};
  for (std::size_t i = 0; i < n; ++i) {
    Rational sum = 0;
    for (std::size_t k = 1; k <= n; ++k) {
      if (hist[i][k] != 0) sum += ratio(hist[i][k], k);
    }
    out.values.push_back(sum * factor);
  }
  return out;
}

// Shapley-Shubik value of a simple game: each S in G_i(v) carries weight
// (|S|-1)!(n-|S|)!/n!.
inline IndexVector shapley(const CauseFamily& family) {
  detail::require_kind(family, CauseKind::kQuasiMinimal, IndexKind::kShapley);
  const std::size_t n = family.universe();
  auto hist = detail::histogram(family, [](std::uint64_t c, std::uint64_t) { return popcount(c); });
  std::vector<Rational> weight(n + 1, Rational(0));
  const BigInt n_factorial = factorial(n);
  for (std::size_t k = 1; k <= n; ++k) {
    weight[k] = ratio(factorial(k - 1) * factorial(n - k), n_factorial);
  }
  IndexVector out{IndexKind::kShapley, Scale::kRaw, {}};
  for (std::size_t i = 0; i < n; ++i) {
    Rational sum = 0;
    for (std::size_t k = 1; k <= n; ++k) {
      if (hist[i][k] != 0) sum += weight[k] * hist[i][k];
    }
    out.values.push_back(sum);
  }
  return out;
}

// beta_i = |G_i(v)| (/ 2^(n-1) on the raw scale).
inline IndexVector banzhaf(const CauseFamily& family, Scale scale = Scale::kRaw) {
  detail::require_kind(family, CauseKind::kQuasiMinimal, IndexKind::kBanzhaf);
  const std::size_t n = family.universe();
  std::vector<std::uint64_t> counts(n, 0);
  for (std::uint64_t chi : family.critical_masks()) {
    for (std::uint64_t m = chi; m != 0; m &= m - 1) ++counts[std::countr_zero(m)];
  }
  const Rational factor = detail::scale_factor(n, scale);
  IndexVector out{IndexKind::kBanzhaf, scale, {}};
  for (std::uint64_t count : counts) out.values.push_back(Rational(count) * factor);
  return out;
}

inline IndexVector shapley(const Game& game) { return shapley(quasi_minimal_causes(game)); }
inline IndexVector banzhaf(const Game& game, Scale scale = Scale::kRaw) {
  return banzhaf(quasi_minimal_causes(game), scale);
}

// Both families of one game, enumerated from a single sweep.
struct GameFamilies {
  CauseFamily minimal;
  CauseFamily quasi_minimal;

  explicit GameFamilies(const Game& game) : GameFamilies(WinTable(game)) {}
  explicit GameFamilies(const WinTable& table)
      : minimal(minimal_causes(table)), quasi_minimal(quasi_minimal_causes(table)) {}
};

inline IndexVector compute_index(const GameFamilies& families, IndexKind kind, Scale scale = Scale::kRaw) {
  switch (kind) {
    case IndexKind::kResponsibility: return responsibility(families.minimal);
    case IndexKind::kHollerPackel: return holler_packel(families.minimal, scale);
    case IndexKind::kDeeganPackel: return deegan_packel(families.minimal, scale);
    case IndexKind::kJohnston: return johnston(families.quasi_minimal, scale);
    case IndexKind::kShapley: return shapley(families.quasi_minimal);
    case IndexKind::kBanzhaf: return banzhaf(families.quasi_minimal, scale);
  }
  fail(ErrorCode::kInvariantViolation, "unhandled index kind");
}

inline IndexVector compute_index(const Game& game, IndexKind kind, Scale scale = Scale::kRaw) {
  return compute_index(GameFamilies(game), kind, scale);
}

}  // namespace causal_explain
