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

// Baselines around the verifier: uniform grid search (detection only) and
// threshold sweeps over one premise atom.

#ifndef TREEVERIFY_AUDIT_BASELINE_HPP_
#define TREEVERIFY_AUDIT_BASELINE_HPP_

#include <chrono>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "treeverify/core/errors.hpp"
#include "treeverify/core/model.hpp"
#include "treeverify/spec/spec.hpp"
#include "treeverify/verifier/verifier.hpp"

namespace treeverify::audit {

struct GridViolation {
  std::vector<float> point;
  Rational logit;
};

struct GridReport {
  uint32_t n = 0;
  uint64_t total_points = 0;
  uint64_t premise_count = 0;
  uint64_t violations_found = 0;
  std::optional<GridViolation> first_violation;  // in grid order
  std::chrono::microseconds elapsed{0};
};

// Grid values of one feature: n points from lower to upper inclusive,
// rounded to binary32.
std::vector<float> GridAxis(const Feature& feature, uint32_t n);

// Counts, over the n^d grid, the points satisfying the premise and those
// also violating the conclusion. Points that no split or premise atom can
// tell apart are evaluated once and weighted by their multiplicity, so the
// counts equal a point-by-point scan. Finding nothing proves nothing.
GridReport GridCheck(const Ensemble& model, const spec::ThresholdImplication& spec, uint32_t n);

struct SweepRow {
  Rational threshold;
  std::optional<verifier::Verdict> verdict;
  std::optional<Error> error;

  std::string StatusLabel() const;
};

// Re-verifies `spec` with premise atom `atom_index` moved to each threshold,
// keeping its feature and operator. Rows follow the input order.
std::vector<SweepRow> ThresholdSweep(const Ensemble& model, const spec::ThresholdImplication& spec,
                                     size_t atom_index, const std::vector<Rational>& thresholds,
                                     const verifier::Limits& limits = {});

}  // namespace treeverify::audit

#endif  // TREEVERIFY_AUDIT_BASELINE_HPP_
