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
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "causal_explain/causes.hpp"
#include "causal_explain/errors.hpp"
#include "causal_explain/game.hpp"
#include "causal_explain/indices.hpp"
#include "causal_explain/rational.hpp"

namespace causal_explain {

// m = ceil(ln(2n/delta) / epsilon^2), the Hoeffding + union bound sample
// count for additive error epsilon on all n features with probability
// 1 - delta.
inline std::uint64_t sample_size(double epsilon, double delta, std::size_t n) {
  if (!(epsilon > 0.0 && epsilon <= 1.0)) fail(ErrorCode::kInvalidArgument, "epsilon must lie in (0, 1]");
  if (!(delta > 0.0 && delta < 1.0)) fail(ErrorCode::kInvalidArgument, "delta must lie in (0, 1)");
  if (n == 0) fail(ErrorCode::kInvalidArgument, "n must be at least 1");
  const double m = std::ceil(std::log(2.0 * static_cast<double>(n) / delta) / (epsilon * epsilon));
  return static_cast<std::uint64_t>(m);
}

struct SamplingConfig {
  std::uint64_t samples = 1;
  std::uint64_t seed = 0;
  std::optional<double> epsilon;
  std::optional<double> delta;
  // Visit each of the 2^n coalitions exactly once instead of sampling.
  bool exhaustive = false;
  std::size_t workers = 1;

  static SamplingConfig from_bounds(double epsilon, double delta, std::size_t n, std::uint64_t seed) {
    SamplingConfig config;
    config.samples = sample_size(epsilon, delta, n);
    config.seed = seed;
    config.epsilon = epsilon;
    config.delta = delta;
    return config;
  }

  static SamplingConfig exhaustive_for(std::size_t n) {
    check_exhaustive_capacity(n);
    SamplingConfig config;
    config.samples = std::uint64_t{1} << n;
    config.exhaustive = true;
    return config;
  }
};

// Counter-based stream: sample j depends only on (seed, j), so any split of
// the index range across workers yields the same samples.
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

// Uniform draw from the power set of n features, including the empty set.
inline std::uint64_t sample_coalition(std::uint64_t seed, std::uint64_t j, std::size_t n) {
  return splitmix64(splitmix64(seed) ^ (j * 0xD1B54A32D192ED03ULL)) & full_mask(n);
}

struct EstimateReport {
  IndexVector estimates;
  std::uint64_t samples = 0;
  std::uint64_t seed = 0;
  std::optional<double> epsilon;
  std::optional<double> delta;
  bool exhaustive = false;
  // Samples that contributed to each feature.
  std::vector<std::uint64_t> hits;
  // Each sample costs one evaluation, plus |S| more when S wins (to find chi(S)).
  std::uint64_t oracle_calls = 0;
};

namespace detail {

// Integer tallies of one pass over a sample range. Merging tallies is exact
// and order independent, which keeps multi-worker runs bit-identical.
struct SampleTally {
  explicit SampleTally(std::size_t n)
      : chi_hist(n, std::vector<std::uint64_t>(n + 1, 0)),
        minimal_hist(n, std::vector<std::uint64_t>(n + 1, 0)),
        quasi_hits(n, 0),
        minimal_hits(n, 0),
        smallest_quasi(n, 0) {}

  std::vector<std::vector<std::uint64_t>> chi_hist;      // [i][|chi(S)|], S in G_i
  std::vector<std::vector<std::uint64_t>> minimal_hist;  // [i][|S|], S in M_i
  std::vector<std::uint64_t> quasi_hits;
  std::vector<std::uint64_t> minimal_hits;
  std::vector<std::size_t> smallest_quasi;  // min |S| over sampled S in G_i, 0 = none
  std::uint64_t oracle_calls = 0;

  void add(const Game& game, std::uint64_t s) {
    ++oracle_calls;
    if (!game.wins(s)) return;
    std::uint64_t chi = 0;
    for (std::uint64_t m = s; m != 0; m &= m - 1) {
      const std::uint64_t bit = m & -m;
      ++oracle_calls;
      if (!game.wins(s & ~bit)) chi |= bit;
    }
    if (chi == 0) return;
    const std::size_t size = popcount(s);
    const std::size_t chi_size = popcount(chi);
    const bool minimal = chi == s;
    for (std::uint64_t m = chi; m != 0; m &= m - 1) {
      const auto i = static_cast<std::size_t>(std::countr_zero(m));
      ++chi_hist[i][chi_size];
      ++quasi_hits[i];
      if (smallest_quasi[i] == 0 || size < smallest_quasi[i]) smallest_quasi[i] = size;
      if (minimal) {
        ++minimal_hist[i][size];
        ++minimal_hits[i];
      }
    }
  }

  void merge(const SampleTally& other) {
    for (std::size_t i = 0; i < quasi_hits.size(); ++i) {
      for (std::size_t k = 0; k < chi_hist[i].size(); ++k) {
        chi_hist[i][k] += other.chi_hist[i][k];
        minimal_hist[i][k] += other.minimal_hist[i][k];
      }
      quasi_hits[i] += other.quasi_hits[i];
      minimal_hits[i] += other.minimal_hits[i];
      if (other.smallest_quasi[i] != 0 && (smallest_quasi[i] == 0 || other.smallest_quasi[i] < smallest_quasi[i])) {
        smallest_quasi[i] = other.smallest_quasi[i];
      }
    }
    oracle_calls += other.oracle_calls;
  }
};

inline SampleTally run_samples(const Game& game, const SamplingConfig& config) {
  const std::size_t n = game.size();
  if (config.samples == 0) fail(ErrorCode::kInvalidArgument, "sample count must be at least 1");
  if (config.exhaustive) {
    check_exhaustive_capacity(n);
    if (config.samples != (std::uint64_t{1} << n)) {
      fail(ErrorCode::kInvalidArgument, "exhaustive mode visits exactly 2^n coalitions");
    }
  }
  auto draw = [&](std::uint64_t j) {
    return config.exhaustive ? j : sample_coalition(config.seed, j, n);
  };
  const std::uint64_t workers =
      std::clamp<std::uint64_t>(config.workers == 0 ? 1 : config.workers, 1, config.samples);
  std::vector<SampleTally> partial(workers, SampleTally(n));
  auto run_range = [&](std::uint64_t w) {
    const std::uint64_t begin = config.samples * w / workers;
    const std::uint64_t end = config.samples * (w + 1) / workers;
    for (std::uint64_t j = begin; j < end; ++j) partial[w].add(game, draw(j));
  };
  if (workers == 1) {
    run_range(0);
  } else {
    std::vector<std::jthread> threads;
    for (std::uint64_t w = 0; w < workers; ++w) threads.emplace_back(run_range, w);
  }
  SampleTally total(n);
  for (const SampleTally& t : partial) total.merge(t);
  return total;
}

inline EstimateReport make_report(IndexKind kind, const SamplingConfig& config, const SampleTally& tally,
                                  std::vector<Rational> values, std::vector<std::uint64_t> hits) {
  EstimateReport report;
  report.estimates = IndexVector{kind, Scale::kRaw, std::move(values)};
  report.samples = config.samples;
  report.seed = config.seed;
  report.epsilon = config.epsilon;
  report.delta = config.delta;
  report.exhaustive = config.exhaustive;
  report.hits = std::move(hits);
  report.oracle_calls = tally.oracle_calls;
  return report;
}

// (2/m) * sum_k hist[k] / k
inline Rational weighted_mean(const std::vector<std::uint64_t>& hist, std::uint64_t samples) {
  Rational sum = 0;
  for (std::size_t k = 1; k < hist.size(); ++k) {
    if (hist[k] != 0) sum += ratio(hist[k], k);
  }
  return sum * ratio(2, samples);
}

}  // namespace detail

// Unbiased for the raw Johnston index: mean of 2 * 1{S in G_i} / |chi(S)|.
inline EstimateReport estimate_johnston(const Game& game, const SamplingConfig& config) {
  const auto tally = detail::run_samples(game, config);
  std::vector<Rational> values;
  for (const auto& hist : tally.chi_hist) values.push_back(detail::weighted_mean(hist, config.samples));
  return detail::make_report(IndexKind::kJohnston, config, tally, std::move(values), tally.quasi_hits);
}

// Unbiased for the raw Deegan-Packel index: mean of 2 * 1{S in M_i} / |S|.
inline EstimateReport estimate_deegan_packel(const Game& game, const SamplingConfig& config) {
  const auto tally = detail::run_samples(game, config);
  std::vector<Rational> values;
  for (const auto& hist : tally.minimal_hist) values.push_back(detail::weighted_mean(hist, config.samples));
  return detail::make_report(IndexKind::kDeeganPackel, config, tally, std::move(values), tally.minimal_hits);
}

// Unbiased for the raw Holler-Packel index: mean of 2 * 1{S in M_i}.
inline EstimateReport estimate_holler_packel(const Game& game, const SamplingConfig& config) {
  const auto tally = detail::run_samples(game, config);
  std::vector<Rational> values;
  for (std::uint64_t hits : tally.minimal_hits) values.push_back(ratio(2 * BigInt(hits), config.samples));
  return detail::make_report(IndexKind::kHollerPackel, config, tally, std::move(values), tally.minimal_hits);
}

// max over samples of 1{S in G_i} / |S|. Never exceeds the true
// responsibility, and equals it when every coalition is visited.
inline EstimateReport estimate_responsibility(const Game& game, const SamplingConfig& config) {
  const auto tally = detail::run_samples(game, config);
  std::vector<Rational> values;
  for (std::size_t k : tally.smallest_quasi) values.push_back(k == 0 ? Rational(0) : ratio(1, k));
  return detail::make_report(IndexKind::kResponsibility, config, tally, std::move(values), tally.quasi_hits);
}

inline EstimateReport estimate(const Game& game, IndexKind kind, const SamplingConfig& config) {
  switch (kind) {
    case IndexKind::kJohnston: return estimate_johnston(game, config);
    case IndexKind::kDeeganPackel: return estimate_deegan_packel(game, config);
    case IndexKind::kHollerPackel: return estimate_holler_packel(game, config);
    case IndexKind::kResponsibility: return estimate_responsibility(game, config);
    default:
      fail(ErrorCode::kInvalidArgument,
           "no sampling estimator for '" + std::string(index_kind_name(kind)) + "'");
  }
}

}  // namespace causal_explain
