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

// Subset-minimal sufficient reasons for single predictions, found by
// deletion against the verifier.

#ifndef TREEVERIFY_EXPLAIN_EXPLAIN_HPP_
#define TREEVERIFY_EXPLAIN_EXPLAIN_HPP_

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "treeverify/core/model.hpp"
#include "treeverify/verifier/verifier.hpp"

namespace treeverify::explain {

struct SufficientReason {
  std::vector<float> instance;
  Rational logit;
  PredictedClass predicted = PredictedClass::kNotSpreading;
  std::vector<size_t> features;  // ascending
  uint64_t queries_used = 0;
  // The logit is exactly 0; the instance counts as not spreading.
  bool on_decision_boundary = false;
  std::vector<std::string> warnings;
};

// True iff no in-domain point that agrees with `instance` on `subset`
// changes the predicted class. Propagates ResourceExhausted.
bool IsSufficient(const Ensemble& model, std::span<const float> instance, const std::vector<size_t>& subset,
                  const verifier::Limits& limits = {});

// Drops features in `order` (default: ascending index) while the rest stay
// sufficient. `order` must be a permutation of the feature indices.
SufficientReason AbductiveExplanation(const Ensemble& model, std::span<const float> instance,
                                      const std::optional<std::vector<size_t>>& order = std::nullopt,
                                      const verifier::Limits& limits = {});

}  // namespace treeverify::explain

#endif  // TREEVERIFY_EXPLAIN_EXPLAIN_HPP_
