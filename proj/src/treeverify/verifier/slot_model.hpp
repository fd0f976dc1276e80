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

// Slot-indexed view of an ensemble. The sorted distinct thresholds of a
// feature cut its axis into slots; slot s covers [cut[s-1], cut[s]) with the
// outer slots unbounded. A split on the k-th cut (1-based) sends slot s left
// iff s < k, so every tree test reduces to an integer comparison.

#ifndef TREEVERIFY_VERIFIER_SLOT_MODEL_HPP_
#define TREEVERIFY_VERIFIER_SLOT_MODEL_HPP_

#include <cstdint>
#include <optional>
#include <vector>

#include "treeverify/core/model.hpp"

namespace treeverify::verifier::internal {

struct SlotRange {
  int32_t lo = 0;
  int32_t hi = 0;  // inclusive

  bool Empty() const { return lo > hi; }
  bool operator==(const SlotRange&) const = default;
};

struct SlotNode {
  int32_t feature = -1;  // -1: leaf
  int32_t cut = 0;       // go left iff slot < cut
  int32_t left = -1;     // leaf index for leaves
  int32_t right = -1;
};

struct SlotTree {
  std::vector<SlotNode> nodes;
  std::vector<int32_t> leaf_node;                // leaf index -> original node id
  std::vector<std::vector<SlotRange>> leaf_box;  // leaf index -> per-feature slot range
  std::vector<char> uses_feature;                // per feature
};

class SlotModel {
 public:
  explicit SlotModel(const Ensemble& model);

  const Ensemble& model() const { return *model_; }
  size_t num_features() const { return cuts_.size(); }
  const std::vector<float>& cuts(size_t feature) const { return cuts_[feature]; }
  int32_t num_slots(size_t feature) const { return static_cast<int32_t>(cuts_[feature].size()) + 1; }
  const std::vector<SlotTree>& trees() const { return trees_; }

  int32_t SlotOf(size_t feature, float x) const;
  // Slots holding at least one binary32 member of `interval`.
  std::optional<SlotRange> RangeOf(size_t feature, const Interval& interval) const;
  // The part of `clip` that falls in `range`.
  Interval SlotInterval(size_t feature, SlotRange range, const Interval& clip) const;

 private:
  const Ensemble* model_;
  std::vector<std::vector<float>> cuts_;
  std::vector<SlotTree> trees_;
};

}  // namespace treeverify::verifier::internal

#endif  // TREEVERIFY_VERIFIER_SLOT_MODEL_HPP_
