/*
 * Copyright 2026 The treeverify Authors.
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

#include "treeverify/core/numeric.hpp"

#include <charconv>
#include <cstdint>
#include <cstring>
#include <algorithm>
#include <cmath>
#include <limits>

namespace treeverify {
namespace {

mpz_class PowerOf10(unsigned long exponent) {
  mpz_class result;
  mpz_ui_pow_ui(result.get_mpz_t(), 10, exponent);
  return result;
}

bool IsDigit(char c) { return c >= '0' && c <= '9'; }

}  // namespace

std::optional<Rational> ParseDecimal(std::string_view text) {
  size_t i = 0;
  bool negative = false;
  if (i < text.size() && (text[i] == '+' || text[i] == '-')) {
    negative = text[i] == '-';
    ++i;
  }
  std::string digits;
  long fraction_digits = 0;
  bool any_digit = false;
  while (i < text.size() && IsDigit(text[i])) {
    digits.push_back(text[i++]);
    any_digit = true;
  }
  if (i < text.size() && text[i] == '.') {
    ++i;
    while (i < text.size() && IsDigit(text[i])) {
      digits.push_back(text[i++]);
      ++fraction_digits;
      any_digit = true;
    }
  }
  if (!any_digit) return std::nullopt;
  long exponent = 0;
  if (i < text.size() && (text[i] == 'e' || text[i] == 'E')) {
    ++i;
    bool exp_negative = false;
    if (i < text.size() && (text[i] == '+' || text[i] == '-')) {
      exp_negative = text[i] == '-';
      ++i;
    }
    if (i >= text.size() || !IsDigit(text[i])) return std::nullopt;
    while (i < text.size() && IsDigit(text[i])) {
      exponent = exponent * 10 + (text[i++] - '0');
      if (exponent > 100000) return std::nullopt;
    }
    if (exp_negative) exponent = -exponent;
  }
  if (i != text.size()) return std::nullopt;

  mpz_class numerator(digits.empty() ? std::string("0") : digits, 10);
  if (negative) numerator = -numerator;
  const long scale = exponent - fraction_digits;
  Rational result;
  if (scale >= 0) {
    result = Rational(numerator * PowerOf10(static_cast<unsigned long>(scale)));
  } else {
    result = Rational(numerator, PowerOf10(static_cast<unsigned long>(-scale)));
    result.canonicalize();
  }
  return result;
}

std::string ToDecimalString(const Rational& value) {
  mpz_class den = value.get_den();
  unsigned long twos = mpz_remove(den.get_mpz_t(), den.get_mpz_t(), mpz_class(2).get_mpz_t());
  unsigned long fives = mpz_remove(den.get_mpz_t(), den.get_mpz_t(), mpz_class(5).get_mpz_t());
  if (den != 1) return value.get_str();
  const unsigned long places = std::max(twos, fives);
  mpz_class scaled = value.get_num() * PowerOf10(places) / value.get_den();
  const bool negative = scaled < 0;
  if (negative) scaled = -scaled;
  std::string digits = scaled.get_str();
  if (places > 0) {
    if (digits.size() <= places) digits.insert(0, places - digits.size() + 1, '0');
    digits.insert(digits.size() - places, ".");
  }
  return negative ? "-" + digits : digits;
}

std::optional<float> DecimalToBinary32(std::string_view text) {
  if (!ParseDecimal(text)) return std::nullopt;
  // from_chars rejects a leading '+'.
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  float value = 0.0f;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size() || !std::isfinite(value)) {
    // from_chars reports result_out_of_range for subnormal underflow; fall back
    // to the exact route in that case.
    auto exact = ParseDecimal(text);
    if (!exact) return std::nullopt;
    if (abs(*exact) > Rational(static_cast<double>(std::numeric_limits<float>::max()))) return std::nullopt;
    return RationalToBinary32(*exact);
  }
  return value;
}

float RationalToBinary32(const Rational& value) {
  // mpq_get_d truncates; probe the neighbours and keep the nearest.
  float candidate = static_cast<float>(value.get_d());
  float best = candidate;
  Rational best_err = abs(FromBinary32(candidate) - value);
  for (float probe : {NextDown(candidate), NextUp(candidate)}) {
    if (!std::isfinite(probe)) continue;
    Rational err = abs(FromBinary32(probe) - value);
    if (err < best_err) {
      best = probe;
      best_err = err;
    } else if (err == best_err) {
      uint32_t bits_best = 0;
      uint32_t bits_probe = 0;
      std::memcpy(&bits_best, &best, sizeof(float));
      std::memcpy(&bits_probe, &probe, sizeof(float));
      if ((bits_probe & 1u) == 0 && (bits_best & 1u) != 0) best = probe;
    }
  }
  return best == 0.0f ? 0.0f : best;
}

bool IsBinary32(const Rational& value) {
  const float f = RationalToBinary32(value);
  return std::isfinite(f) && FromBinary32(f) == value;
}

std::string Binary32ToString(float value) {
  char buffer[64];
  auto [ptr, ec] = std::to_chars(buffer, buffer + sizeof(buffer), value);
  return std::string(buffer, ptr);
}

float NextUp(float value) { return std::nextafter(value, std::numeric_limits<float>::infinity()); }

float NextDown(float value) { return std::nextafter(value, -std::numeric_limits<float>::infinity()); }

double LogisticProbability(const Rational& logit) {
  return 1.0 / (1.0 + std::exp(-logit.get_d()));
}

}  // namespace treeverify
