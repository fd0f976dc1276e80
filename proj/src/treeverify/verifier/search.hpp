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

// Branch-and-bound engine shared by threshold queries and the two-point
// monotonicity query.

#ifndef TREEVERIFY_VERIFIER_SEARCH_HPP_
#define TREEVERIFY_VERIFIER_SEARCH_HPP_

#include <optional>
#include <string>
#include <vector>

#include "treeverify/verifier/slot_model.hpp"
#include "treeverify/verifier/verifier.hpp"

namespace treeverify::verifier::internal {

// Objective forms:
//   sum:  sign * (base + sum_t h_t(x))                 over cell dims = features
//   pair: sum_t h_t(x) - h_t(x')  where x, x' share every feature but `pair_feature`;
//         x[pair_feature] lives in dim `pair_feature`, x'[pair_feature] in dim d.
// The query asks for a cell point with objective > target (strict) or
// >= target (non-strict).
struct SearchProblem {
  const SlotModel* slots = nullptr;
  std::vector<SlotRange> initial;  // per dim
  std::vector<size_t> trees;       // trees taking part
  bool pair_mode = false;
  size_t pair_feature = 0;
  bool order_le = true;  // pair mode: x[j] <= x'[j], else x[j] >= x'[j]
  int sign = 1;
  Rational base;
  Rational target;
  bool strict = true;
};

struct SearchOutcome {
  std::optional<std::vector<SlotRange>> violating_cell;
  SearchStats stats;
  bool exhausted = false;
  std::string exhausted_reason;
};

SearchOutcome RunSearch(const SearchProblem& problem, const Limits& limits);

// Which scalar the engine picked for the last problem of this thread:
// "int64", "int128" or "rational". For tests and diagnostics.
const char* LastScalarKind();

}  // namespace treeverify::verifier::internal

#endif  // TREEVERIFY_VERIFIER_SEARCH_HPP_
