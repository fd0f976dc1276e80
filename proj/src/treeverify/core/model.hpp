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

// In-memory models, feature spaces and boxes, with the reference evaluation
// semantics every other module trusts.

#ifndef TREEVERIFY_CORE_MODEL_HPP_
#define TREEVERIFY_CORE_MODEL_HPP_

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "treeverify/core/numeric.hpp"

namespace treeverify {

struct Feature {
  std::string name;
  float lower = 0.0f;
  float upper = 0.0f;

  bool operator==(const Feature&) const = default;
};

// Ordered, named features with a closed bounded domain each.
class FeatureSpace {
 public:
  FeatureSpace() = default;
  // Throws Error(kInvalidSpace) on empty, duplicate or inverted features.
  explicit FeatureSpace(std::vector<Feature> features);

  size_t size() const { return features_.size(); }
  const Feature& operator[](size_t i) const { return features_[i]; }
  const std::vector<Feature>& features() const { return features_; }
  std::optional<size_t> IndexOf(std::string_view name) const;
  // Like IndexOf but throws Error(kUnknownFeature).
  size_t Require(std::string_view name) const;

  bool operator==(const FeatureSpace&) const = default;

 private:
  std::vector<Feature> features_;
};

// Interval with binary32 endpoints and independent closedness.
struct Interval {
  float lo = 0.0f;
  bool lo_closed = true;
  float hi = 0.0f;
  bool hi_closed = true;

  static Interval Closed(float lo, float hi) { return {lo, true, hi, true}; }
  static Interval Point(float v) { return {v, true, v, true}; }

  // Empty over the reals.
  bool Empty() const { return lo > hi || (lo == hi && !(lo_closed && hi_closed)); }
  bool Contains(float x) const {
    return (lo_closed ? x >= lo : x > lo) && (hi_closed ? x <= hi : x < hi);
  }
  // Smallest and largest binary32 members; nullopt when there are none.
  std::optional<std::pair<float, float>> Binary32Extent() const;

  Interval Intersect(const Interval& other) const;
  bool ContainsInterval(const Interval& other) const;

  bool operator==(const Interval&) const = default;
};

struct Box {
  std::vector<Interval> intervals;

  static Box FromSpace(const FeatureSpace& space);
  size_t size() const { return intervals.size(); }
  bool Empty() const;
  bool Contains(std::span<const float> point) const;

  bool operator==(const Box&) const = default;
};

// A binary decision tree over binary32 split thresholds. Nodes are stored
// flat; node 0 is the root. A split sends x left iff x[feature] < threshold.
class Tree {
 public:
  struct Node {
    int32_t feature = -1;  // -1 marks a leaf
    float threshold = 0.0f;
    int32_t left = -1;
    int32_t right = -1;
    Rational weight;  // leaves only

    bool IsLeaf() const { return feature < 0; }
  };

  static Tree Leaf(Rational weight);
  static Tree Split(size_t feature, float threshold, Tree left, Tree right);

  const std::vector<Node>& nodes() const { return nodes_; }
  const Node& node(size_t i) const { return nodes_[i]; }
  size_t NumLeaves() const;
  size_t Depth() const;

  // Path-following evaluation; no domain checks.
  const Rational& LeafWeightAt(std::span<const float> point) const;

  // Builds from a raw node list after checking it forms a finite tree rooted
  // at index 0. Throws Error(kMalformedDump).
  static Tree FromNodes(std::vector<Node> nodes);

 private:
  std::vector<Node> nodes_;
};

struct Ensemble {
  FeatureSpace space;
  Rational base_score;
  std::vector<Tree> trees;

  // Throws on feature indices outside the space or non-finite thresholds.
  void Validate() const;
  size_t NumLeaves() const;
};

struct UnivariateTerm {
  size_t feature = 0;
  std::vector<float> edges;       // strictly ascending, n-1 entries
  std::vector<Rational> scores;   // n entries
};

struct PairwiseTerm {
  std::array<size_t, 2> features{};
  std::array<std::vector<float>, 2> edges;
  std::vector<Rational> scores;  // row-major: (bins of axis 0) x (bins of axis 1)
};

// Intercept plus univariate bin tables plus pairwise score grids. A value
// equal to a bin edge belongs to the upper bin.
struct AdditiveModel {
  FeatureSpace space;
  Rational intercept;
  std::vector<UnivariateTerm> univariate;
  std::vector<PairwiseTerm> pairwise;

  // Throws kNonAscendingEdges, kScoreCountMismatch or kUnknownFeature.
  void Validate() const;
  size_t NumBins() const;
};

enum class PredictedClass { kNotSpreading, kSpreading };

std::string_view PredictedClassName(PredictedClass c);

// Exact logit. Throws kPointOutOfDomain when a coordinate leaves the space.
Rational EvaluateExact(const Ensemble& model, std::span<const float> point);
// Same, for coordinates given as rationals; throws kNonRepresentable when a
// coordinate is not a binary32 value.
Rational EvaluateExact(const Ensemble& model, std::span<const Rational> point);

PredictedClass Predict(const Rational& logit);

struct LogitBounds {
  Rational lo;
  Rational hi;
};

// Sound bounds of the logit over the binary32 points of `box`. Throws
// kEmptyBox when some interval holds no binary32 value.
LogitBounds BoundOverBox(const Ensemble& model, const Box& box);

struct LeafBox {
  Box box;
  Rational weight;
  size_t node = 0;
};

// Partition of the space box into the regions of each reachable leaf.
std::vector<LeafBox> LeafBoxes(const Tree& tree, const FeatureSpace& space);

// Equivalent ensemble: one single-feature tree per univariate term and one
// two-feature grid tree per pairwise term, after merging equal adjacent bins.
Ensemble CompileAdditive(const AdditiveModel& model);

}  // namespace treeverify

#endif  // TREEVERIFY_CORE_MODEL_HPP_
