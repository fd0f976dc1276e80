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

#include "treeverify/verifier/slot_model.hpp"

#include <algorithm>
#include <limits>

namespace treeverify::verifier::internal {

SlotModel::SlotModel(const Ensemble& model) : model_(&model), cuts_(model.space.size()) {
  for (const Tree& tree : model.trees) {
    for (const Tree::Node& n : tree.nodes()) {
      if (!n.IsLeaf()) cuts_[static_cast<size_t>(n.feature)].push_back(n.threshold);
    }
  }
  for (auto& cuts : cuts_) {
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  }

  const size_t d = cuts_.size();
  trees_.reserve(model.trees.size());
  for (const Tree& tree : model.trees) {
    SlotTree st;
    st.nodes.resize(tree.nodes().size());
    st.uses_feature.assign(d, 0);
    // Walk from the root carrying each node's slot box.
    std::vector<SlotRange> root_box(d);
    for (size_t f = 0; f < d; ++f) root_box[f] = {0, num_slots(f) - 1};
    struct Item {
      int32_t node;
      std::vector<SlotRange> box;
    };
    std::vector<Item> stack;
    stack.push_back({0, std::move(root_box)});
    while (!stack.empty()) {
      Item item = std::move(stack.back());
      stack.pop_back();
      const Tree::Node& n = tree.node(static_cast<size_t>(item.node));
      SlotNode& out = st.nodes[static_cast<size_t>(item.node)];
      if (n.IsLeaf()) {
        out.feature = -1;
        out.left = static_cast<int32_t>(st.leaf_node.size());
        st.leaf_node.push_back(item.node);
        st.leaf_box.push_back(std::move(item.box));
        continue;
      }
      const auto f = static_cast<size_t>(n.feature);
      const auto& cuts = cuts_[f];
      out.feature = n.feature;
      out.cut = static_cast<int32_t>(std::lower_bound(cuts.begin(), cuts.end(), n.threshold) - cuts.begin()) + 1;
      out.left = n.left;
      out.right = n.right;
      st.uses_feature[f] = 1;
      std::vector<SlotRange> left = item.box;
      left[f].hi = std::min(left[f].hi, out.cut - 1);
      item.box[f].lo = std::max(item.box[f].lo, out.cut);
      stack.push_back({n.right, std::move(item.box)});
      stack.push_back({n.left, std::move(left)});
    }
    trees_.push_back(std::move(st));
  }
}

int32_t SlotModel::SlotOf(size_t feature, float x) const {
  const auto& cuts = cuts_[feature];
  return static_cast<int32_t>(std::upper_bound(cuts.begin(), cuts.end(), x) - cuts.begin());
}

std::optional<SlotRange> SlotModel::RangeOf(size_t feature, const Interval& interval) const {
  auto extent = interval.Binary32Extent();
  if (!extent) return std::nullopt;
  return SlotRange{SlotOf(feature, extent->first), SlotOf(feature, extent->second)};
}

Interval SlotModel::SlotInterval(size_t feature, SlotRange range, const Interval& clip) const {
  const auto& cuts = cuts_[feature];
  constexpr float kInf = std::numeric_limits<float>::infinity();
  Interval slots{range.lo == 0 ? -kInf : cuts[static_cast<size_t>(range.lo - 1)], range.lo != 0,
                 range.hi == static_cast<int32_t>(cuts.size()) ? kInf : cuts[static_cast<size_t>(range.hi)], false};
  return clip.Intersect(slots);
}

}  // namespace treeverify::verifier::internal
