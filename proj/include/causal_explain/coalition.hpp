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
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <string>
#include <vector>

#include "causal_explain/errors.hpp"

namespace causal_explain {

inline constexpr std::size_t kMaxFeatures = 64;

// All-ones mask over the first n features.
constexpr std::uint64_t full_mask(std::size_t n) {
  return n >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << n) - 1;
}

inline void check_feature_count(std::size_t n) {
  if (n > kMaxFeatures) {
    fail(ErrorCode::kCapacity,
         "games with more than 64 features are not supported (n=" + std::to_string(n) + ")");
  }
}

// A subset of the features {0, ..., n-1}, stored as a bit mask. Indices are
// 0-based here; user-facing I/O shifts them to 1-based.
class Coalition {
 public:
  constexpr Coalition() = default;

  Coalition(std::size_t n, std::uint64_t mask) : n_(n), mask_(mask) {
    check_feature_count(n);
    if ((mask & ~full_mask(n)) != 0) {
      fail(ErrorCode::kInvalidArgument,
           "coalition mask has members outside 0.." + std::to_string(n) + "-1");
    }
  }

  static Coalition empty(std::size_t n) { return Coalition(n, 0); }
  static Coalition full(std::size_t n) { return Coalition(n, full_mask(n)); }

  static Coalition of(std::size_t n, std::initializer_list<std::size_t> members) {
    return of(n, std::vector<std::size_t>(members));
  }

  static Coalition of(std::size_t n, const std::vector<std::size_t>& members) {
    check_feature_count(n);
    std::uint64_t mask = 0;
    for (std::size_t i : members) {
      if (i >= n) {
        fail(ErrorCode::kInvalidArgument,
             "feature index " + std::to_string(i) + " out of range for n=" + std::to_string(n));
      }
      mask |= std::uint64_t{1} << i;
    }
    return Coalition(n, mask);
  }

  std::size_t universe() const { return n_; }
  std::uint64_t mask() const { return mask_; }
  std::size_t size() const { return static_cast<std::size_t>(std::popcount(mask_)); }
  bool is_empty() const { return mask_ == 0; }

  bool contains(std::size_t i) const { return i < 64 && ((mask_ >> i) & 1U) != 0; }
  bool subset_of(const Coalition& other) const { return (mask_ & ~other.mask_) == 0; }

  Coalition with(std::size_t i) const { return Coalition(n_, mask_ | (std::uint64_t{1} << i)); }
  Coalition without(std::size_t i) const { return Coalition(n_, mask_ & ~(std::uint64_t{1} << i)); }
  Coalition complement() const { return Coalition(n_, ~mask_ & full_mask(n_)); }

  std::vector<std::size_t> members() const {
    std::vector<std::size_t> out;
    out.reserve(size());
    for (std::uint64_t m = mask_; m != 0; m &= m - 1) {
      out.push_back(static_cast<std::size_t>(std::countr_zero(m)));
    }
    return out;
  }

  friend Coalition operator|(const Coalition& a, const Coalition& b) {
    return Coalition(a.n_ > b.n_ ? a.n_ : b.n_, a.mask_ | b.mask_);
  }
  friend Coalition operator&(const Coalition& a, const Coalition& b) {
    return Coalition(a.n_ > b.n_ ? a.n_ : b.n_, a.mask_ & b.mask_);
  }
  friend Coalition operator-(const Coalition& a, const Coalition& b) {
    return Coalition(a.n_, a.mask_ & ~b.mask_);
  }

  friend bool operator==(const Coalition& a, const Coalition& b) = default;
  // Canonical order is ascending mask.
  friend bool operator<(const Coalition& a, const Coalition& b) { return a.mask_ < b.mask_; }

 private:
  std::size_t n_ = 0;
  std::uint64_t mask_ = 0;
};

// Set of 1-based member indices, e.g. "{1,3}".
inline std::string to_string(const Coalition& s) {
  std::string out = "{";
  bool first = true;
  for (std::size_t i : s.members()) {
    if (!first) out += ",";
    out += std::to_string(i + 1);
    first = false;
  }
  return out + "}";
}

inline std::size_t popcount(std::uint64_t mask) {
  return static_cast<std::size_t>(std::popcount(mask));
}

}  // namespace causal_explain
