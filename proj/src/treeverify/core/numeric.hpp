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

// Exact rational arithmetic and IEEE-754 binary32 helpers.
//
// Thresholds and input coordinates live in binary32; leaf weights, scores and
// logits are exact rationals. A binary32 value converts to a rational without
// loss, so every comparison the verifier makes is exact.

#ifndef TREEVERIFY_CORE_NUMERIC_HPP_
#define TREEVERIFY_CORE_NUMERIC_HPP_

#include <gmpxx.h>

#include <optional>
#include <string>
#include <string_view>

namespace treeverify {

using Rational = mpq_class;

// Parses `[+-]digits[.digits][(e|E)[+-]digits]` exactly. Returns nullopt on
// any other input (including inf/nan).
std::optional<Rational> ParseDecimal(std::string_view text);

// Exact decimal rendering when the denominator is of the form 2^a 5^b,
// otherwise "p/q".
std::string ToDecimalString(const Rational& value);

// Nearest binary32 (ties to even) of a decimal string. nullopt on malformed
// text or overflow to infinity.
std::optional<float> DecimalToBinary32(std::string_view text);

// Nearest binary32 of an exact rational, ties to even. Assumes the value is
// inside the finite binary32 range.
float RationalToBinary32(const Rational& value);

inline Rational FromBinary32(float value) { return Rational(static_cast<double>(value)); }

bool IsBinary32(const Rational& value);

// Shortest decimal text that reads back as the same binary32 value.
std::string Binary32ToString(float value);

float NextUp(float value);
float NextDown(float value);

// Display-only logistic link evaluated in double precision.
double LogisticProbability(const Rational& logit);

}  // namespace treeverify

#endif  // TREEVERIFY_CORE_NUMERIC_HPP_
