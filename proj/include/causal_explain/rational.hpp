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

#include <cctype>
#include <cstdint>
#include <string>
#include <string_view>

#include <boost/multiprecision/cpp_int.hpp>

#include "causal_explain/errors.hpp"

namespace causal_explain {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline Rational pow2_inverse(std::size_t k) {
  BigInt denominator = 1;
  denominator <<= static_cast<unsigned>(k);
  return Rational(BigInt(1), denominator);
}

inline Rational ratio(const BigInt& num, const BigInt& den) { return Rational(num, den); }

inline BigInt factorial(std::size_t k) {
  BigInt out = 1;
  for (std::size_t i = 2; i <= k; ++i) out *= i;
  return out;
}

// Canonical text form: "p/q" in lowest terms, or "p" when q == 1.
inline std::string to_string(const Rational& value) {
  const BigInt& num = boost::multiprecision::numerator(value);
  const BigInt& den = boost::multiprecision::denominator(value);
  if (den == 1) return num.str();
  return num.str() + "/" + den.str();
}

inline double to_double(const Rational& value) {
  return value.convert_to<double>();
}

// Parses "3", "-2", "2.5", "1e-3", "1.25E2" or "5/2" exactly. No rounding
// takes place anywhere: decimals are read as (digits / 10^k).
inline Rational parse_rational(std::string_view text) {
  auto bad = [&]() -> Rational {
    fail(ErrorCode::kParse, "not an exact rational: '" + std::string(text) + "'");
  };
  auto trim = [](std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
  };
  text = trim(text);
  if (text.empty()) return bad();

  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    Rational num = parse_rational(text.substr(0, slash));
    Rational den = parse_rational(text.substr(slash + 1));
    if (den == 0) fail(ErrorCode::kParse, "zero denominator in '" + std::string(text) + "'");
    return num / den;
  }

  std::size_t pos = 0;
  bool negative = false;
  if (text[pos] == '+' || text[pos] == '-') {
    negative = text[pos] == '-';
    ++pos;
  }
  BigInt digits = 0;
  std::size_t digit_count = 0;
  long scale = 0;
  for (; pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos])); ++pos) {
    digits = digits * 10 + (text[pos] - '0');
    ++digit_count;
  }
  if (pos < text.size() && text[pos] == '.') {
    ++pos;
    for (; pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos])); ++pos) {
      digits = digits * 10 + (text[pos] - '0');
      ++digit_count;
      --scale;
    }
  }
  if (digit_count == 0) return bad();
  if (pos < text.size() && (text[pos] == 'e' || text[pos] == 'E')) {
    ++pos;
    bool exp_negative = false;
    if (pos < text.size() && (text[pos] == '+' || text[pos] == '-')) {
      exp_negative = text[pos] == '-';
      ++pos;
    }
    long exponent = 0;
    std::size_t exp_digits = 0;
    for (; pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos])); ++pos) {
      exponent = exponent * 10 + (text[pos] - '0');
      if (exponent > 4096) return bad();
      ++exp_digits;
    }
    if (exp_digits == 0) return bad();
    scale += exp_negative ? -exponent : exponent;
  }
  if (pos != text.size()) return bad();

  BigInt power = 1;
  for (long k = 0; k < (scale < 0 ? -scale : scale); ++k) power *= 10;
  Rational out = scale < 0 ? Rational(digits, power) : Rational(digits * power);
  return negative ? Rational(-out) : out;
}

}  // namespace causal_explain
