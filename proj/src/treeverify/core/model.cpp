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

#include "treeverify/core/model.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_set>

#include "treeverify/core/errors.hpp"

namespace treeverify {

// ---------------------------------------------------------------------------
// FeatureSpace / Interval / Box

FeatureSpace::FeatureSpace(std::vector<Feature> features) : features_(std::move(features)) {
  if (features_.empty()) throw Error(ErrorCode::kInvalidSpace, "feature space has no features");
  std::unordered_set<std::string> seen;
  for (const Feature& f : features_) {
    if (f.name.empty()) throw Error(ErrorCode::kInvalidSpace, "feature with empty name");
    if (!seen.insert(f.name).second) {
      throw Error(ErrorCode::kInvalidSpace, "duplicate feature name '" + f.name + "'");
    }
    if (!std::isfinite(f.lower) || !std::isfinite(f.upper) || !(f.lower <= f.upper)) {
      throw Error(ErrorCode::kInvalidSpace, "feature '" + f.name + "' has lower > upper");
    }
  }
}

std::optional<size_t> FeatureSpace::IndexOf(std::string_view name) const {
  for (size_t i = 0; i < features_.size(); ++i) {
    if (features_[i].name == name) return i;
  }
  return std::nullopt;
}

size_t FeatureSpace::Require(std::string_view name) const {
  auto index = IndexOf(name);
  if (!index) throw Error(ErrorCode::kUnknownFeature, "unknown feature '" + std::string(name) + "'");
  return *index;
}

std::optional<std::pair<float, float>> Interval::Binary32Extent() const {
  if (Empty()) return std::nullopt;
  const float first = lo_closed ? lo : NextUp(lo);
  const float last = hi_closed ? hi : NextDown(hi);
  if (first > last) return std::nullopt;
  return std::make_pair(first, last);
}

Interval Interval::Intersect(const Interval& other) const {
  Interval out = *this;
  if (other.lo > out.lo || (other.lo == out.lo && !other.lo_closed)) {
    out.lo = other.lo;
    out.lo_closed = other.lo_closed;
  }
  if (other.hi < out.hi || (other.hi == out.hi && !other.hi_closed)) {
    out.hi = other.hi;
    out.hi_closed = other.hi_closed;
  }
  return out;
}

bool Interval::ContainsInterval(const Interval& other) const {
  if (other.Empty()) return true;
  const bool lo_ok = other.lo > lo || (other.lo == lo && (lo_closed || !other.lo_closed));
  const bool hi_ok = other.hi < hi || (other.hi == hi && (hi_closed || !other.hi_closed));
  return lo_ok && hi_ok;
}

Box Box::FromSpace(const FeatureSpace& space) {
  Box box;
  box.intervals.reserve(space.size());
  for (const Feature& f : space.features()) box.intervals.push_back(Interval::Closed(f.lower, f.upper));
  return box;
}

bool Box::Empty() const {
  return std::any_of(intervals.begin(), intervals.end(), [](const Interval& i) { return i.Empty(); });
}

bool Box::Contains(std::span<const float> point) const {
  if (point.size() != intervals.size()) return false;
  for (size_t i = 0; i < point.size(); ++i) {
    if (!intervals[i].Contains(point[i])) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// Tree

Tree Tree::Leaf(Rational weight) {
  Tree t;
  Node n;
  n.weight = std::move(weight);
  t.nodes_.push_back(std::move(n));
  return t;
}

Tree Tree::Split(size_t feature, float threshold, Tree left, Tree right) {
  Tree t;
  t.nodes_.reserve(1 + left.nodes_.size() + right.nodes_.size());
  Node root;
  root.feature = static_cast<int32_t>(feature);
  root.threshold = threshold;
  t.nodes_.push_back(std::move(root));
  auto append = [&t](Tree& sub) {
    const auto offset = static_cast<int32_t>(t.nodes_.size());
    for (Node& n : sub.nodes_) {
      if (!n.IsLeaf()) {
        n.left += offset;
        n.right += offset;
      }
      t.nodes_.push_back(std::move(n));
    }
    return offset;
  };
  t.nodes_[0].left = append(left);
  t.nodes_[0].right = append(right);
  return t;
}

Tree Tree::FromNodes(std::vector<Node> nodes) {
  if (nodes.empty()) throw Error(ErrorCode::kMalformedDump, "tree has no nodes");
  // Every node reachable exactly once from the root, every index in range.
  std::vector<char> visited(nodes.size(), 0);
  std::vector<int32_t> stack{0};
  while (!stack.empty()) {
    const int32_t i = stack.back();
    stack.pop_back();
    if (i < 0 || static_cast<size_t>(i) >= nodes.size()) {
      throw Error(ErrorCode::kMalformedDump, "child index out of range");
    }
    if (visited[i]) throw Error(ErrorCode::kMalformedDump, "node reachable twice (cycle or shared child)");
    visited[i] = 1;
    if (!nodes[i].IsLeaf()) {
      stack.push_back(nodes[i].left);
      stack.push_back(nodes[i].right);
    }
  }
  if (std::find(visited.begin(), visited.end(), 0) != visited.end()) {
    throw Error(ErrorCode::kMalformedDump, "tree has unreachable nodes");
  }
  Tree t;
  t.nodes_ = std::move(nodes);
  return t;
}

size_t Tree::NumLeaves() const {
  return static_cast<size_t>(std::count_if(nodes_.begin(), nodes_.end(), [](const Node& n) { return n.IsLeaf(); }));
}

size_t Tree::Depth() const {
  size_t best = 0;
  std::vector<std::pair<int32_t, size_t>> stack{{0, 0}};
  while (!stack.empty()) {
    auto [i, d] = stack.back();
    stack.pop_back();
    best = std::max(best, d);
    if (!nodes_[i].IsLeaf()) {
      stack.emplace_back(nodes_[i].left, d + 1);
      stack.emplace_back(nodes_[i].right, d + 1);
    }
  }
  return best;
}

const Rational& Tree::LeafWeightAt(std::span<const float> point) const {
  size_t i = 0;
  while (!nodes_[i].IsLeaf()) {
    const Node& n = nodes_[i];
    i = static_cast<size_t>(point[n.feature] < n.threshold ? n.left : n.right);
  }
  return nodes_[i].weight;
}

// ---------------------------------------------------------------------------
// Ensemble / AdditiveModel

void Ensemble::Validate() const {
  for (size_t t = 0; t < trees.size(); ++t) {
    for (const Tree::Node& n : trees[t].nodes()) {
      if (n.IsLeaf()) continue;
      if (static_cast<size_t>(n.feature) >= space.size()) {
        throw Error(ErrorCode::kUnknownFeature, "tree " + std::to_string(t) + " splits on feature index " +
                                                    std::to_string(n.feature) + " outside the space");
      }
      if (!std::isfinite(n.threshold)) {
        throw Error(ErrorCode::kNonRepresentable, "tree " + std::to_string(t) + " has a non-finite threshold");
      }
    }
  }
}

size_t Ensemble::NumLeaves() const {
  size_t total = 0;
  for (const Tree& t : trees) total += t.NumLeaves();
  return total;
}

namespace {

void CheckEdges(const std::vector<float>& edges, const std::string& where) {
  for (size_t i = 0; i < edges.size(); ++i) {
    if (!std::isfinite(edges[i])) throw Error(ErrorCode::kNonRepresentable, where + ": non-finite bin edge");
    if (i > 0 && !(edges[i - 1] < edges[i])) {
      throw Error(ErrorCode::kNonAscendingEdges, where + ": bin edges not strictly ascending at position " +
                                                     std::to_string(i));
    }
  }
}

}  // namespace

void AdditiveModel::Validate() const {
  for (size_t k = 0; k < univariate.size(); ++k) {
    const UnivariateTerm& term = univariate[k];
    const std::string where = "univariate term " + std::to_string(k);
    if (term.feature >= space.size()) throw Error(ErrorCode::kUnknownFeature, where + ": feature outside the space");
    CheckEdges(term.edges, where);
    if (term.scores.size() != term.edges.size() + 1) {
      throw Error(ErrorCode::kScoreCountMismatch, where + ": expected " + std::to_string(term.edges.size() + 1) +
                                                      " scores, got " + std::to_string(term.scores.size()));
    }
  }
  for (size_t k = 0; k < pairwise.size(); ++k) {
    const PairwiseTerm& term = pairwise[k];
    const std::string where = "pairwise term " + std::to_string(k);
    for (size_t axis = 0; axis < 2; ++axis) {
      if (term.features[axis] >= space.size()) {
        throw Error(ErrorCode::kUnknownFeature, where + ": feature outside the space");
      }
      CheckEdges(term.edges[axis], where);
    }
    const size_t expected = (term.edges[0].size() + 1) * (term.edges[1].size() + 1);
    if (term.scores.size() != expected) {
      throw Error(ErrorCode::kScoreCountMismatch, where + ": expected " + std::to_string(expected) +
                                                      " scores, got " + std::to_string(term.scores.size()));
    }
  }
}

size_t AdditiveModel::NumBins() const {
  size_t total = 0;
  for (const auto& term : univariate) total += term.scores.size();
  return total;
}

// ---------------------------------------------------------------------------
// Evaluation

std::string_view PredictedClassName(PredictedClass c) {
  return c == PredictedClass::kSpreading ? "spreading" : "not-spreading";
}

Rational EvaluateExact(const Ensemble& model, std::span<const float> point) {
  if (point.size() != model.space.size()) {
    throw Error(ErrorCode::kPointOutOfDomain, "point has " + std::to_string(point.size()) + " coordinates, space has " +
                                                  std::to_string(model.space.size()));
  }
  for (size_t i = 0; i < point.size(); ++i) {
    const Feature& f = model.space[i];
    if (!(point[i] >= f.lower && point[i] <= f.upper)) {
      throw Error(ErrorCode::kPointOutOfDomain, "coordinate '" + f.name + "' = " + Binary32ToString(point[i]) +
                                                    " outside [" + Binary32ToString(f.lower) + ", " +
                                                    Binary32ToString(f.upper) + "]");
    }
  }
  Rational logit = model.base_score;
  for (const Tree& tree : model.trees) logit += tree.LeafWeightAt(point);
  return logit;
}

Rational EvaluateExact(const Ensemble& model, std::span<const Rational> point) {
  std::vector<float> coords;
  coords.reserve(point.size());
  for (size_t i = 0; i < point.size(); ++i) {
    if (!IsBinary32(point[i])) {
      throw Error(ErrorCode::kNonRepresentable, "coordinate " + std::to_string(i) + " = " + point[i].get_str() +
                                                    " is not a binary32 value");
    }
    coords.push_back(RationalToBinary32(point[i]));
  }
  return EvaluateExact(model, coords);
}

PredictedClass Predict(const Rational& logit) {
  return logit > 0 ? PredictedClass::kSpreading : PredictedClass::kNotSpreading;
}

LogitBounds BoundOverBox(const Ensemble& model, const Box& box) {
  if (box.size() != model.space.size()) throw Error(ErrorCode::kInvalidArgument, "box dimension mismatch");
  std::vector<std::pair<float, float>> extent;
  extent.reserve(box.size());
  for (const Interval& interval : box.intervals) {
    auto e = interval.Binary32Extent();
    if (!e) throw Error(ErrorCode::kEmptyBox, "box has an interval without binary32 members");
    extent.push_back(*e);
  }
  LogitBounds bounds{model.base_score, model.base_score};
  std::vector<int32_t> stack;
  for (const Tree& tree : model.trees) {
    const Rational* lo = nullptr;
    const Rational* hi = nullptr;
    stack.assign(1, 0);
    while (!stack.empty()) {
      const Tree::Node& n = tree.node(static_cast<size_t>(stack.back()));
      stack.pop_back();
      if (n.IsLeaf()) {
        if (lo == nullptr || n.weight < *lo) lo = &n.weight;
        if (hi == nullptr || n.weight > *hi) hi = &n.weight;
        continue;
      }
      const auto [first, last] = extent[n.feature];
      if (last < n.threshold) {
        stack.push_back(n.left);
      } else if (first >= n.threshold) {
        stack.push_back(n.right);
      } else {
        stack.push_back(n.right);
        stack.push_back(n.left);
      }
    }
    bounds.lo += *lo;
    bounds.hi += *hi;
  }
  return bounds;
}

std::vector<LeafBox> LeafBoxes(const Tree& tree, const FeatureSpace& space) {
  std::vector<LeafBox> out;
  struct Item {
    int32_t node;
    Box box;
  };
  std::vector<Item> stack;
  stack.push_back({0, Box::FromSpace(space)});
  while (!stack.empty()) {
    Item item = std::move(stack.back());
    stack.pop_back();
    const Tree::Node& n = tree.node(static_cast<size_t>(item.node));
    if (n.IsLeaf()) {
      out.push_back({std::move(item.box), n.weight, static_cast<size_t>(item.node)});
      continue;
    }
    Box right = item.box;
    Box left = std::move(item.box);
    Interval& l = left.intervals[n.feature];
    if (n.threshold < l.hi || (n.threshold == l.hi && l.hi_closed)) {
      l.hi = n.threshold;
      l.hi_closed = false;
    }
    Interval& r = right.intervals[n.feature];
    if (n.threshold > r.lo || (n.threshold == r.lo && !r.lo_closed)) {
      r.lo = n.threshold;
      r.lo_closed = true;
    }
    if (!right.intervals[n.feature].Empty()) stack.push_back({n.right, std::move(right)});
    if (!left.intervals[n.feature].Empty()) stack.push_back({n.left, std::move(left)});
  }
  return out;
}

// ---------------------------------------------------------------------------
// Additive compilation

namespace {

// Bins after merging equal neighbours: edges[i] separates scores[i] and
// scores[i+1].
template <typename T, typename Equal>
void MergeRuns(const std::vector<float>& edges, const std::vector<T>& values, Equal equal,
               std::vector<float>* out_edges, std::vector<T>* out_values) {
  out_edges->clear();
  out_values->clear();
  out_values->push_back(values[0]);
  for (size_t i = 1; i < values.size(); ++i) {
    if (equal(values[i], out_values->back())) continue;
    out_edges->push_back(edges[i - 1]);
    out_values->push_back(values[i]);
  }
}

// Balanced tree over bins [first, last] of a single feature.
template <typename MakeLeaf>
Tree BuildBinTree(size_t feature, const std::vector<float>& edges, size_t first, size_t last, MakeLeaf& make_leaf) {
  if (first == last) return make_leaf(first);
  const size_t mid = first + (last - first + 1) / 2;  // right subtree starts at bin `mid`
  return Tree::Split(feature, edges[mid - 1], BuildBinTree(feature, edges, first, mid - 1, make_leaf),
                     BuildBinTree(feature, edges, mid, last, make_leaf));
}

Tree CompileUnivariate(const UnivariateTerm& term) {
  std::vector<float> edges;
  std::vector<Rational> scores;
  MergeRuns(term.edges, term.scores, [](const Rational& a, const Rational& b) { return a == b; }, &edges, &scores);
  auto leaf = [&scores](size_t bin) { return Tree::Leaf(scores[bin]); };
  return BuildBinTree(term.feature, edges, 0, scores.size() - 1, leaf);
}

Tree CompilePairwise(const PairwiseTerm& term) {
  const size_t cols = term.edges[1].size() + 1;
  const size_t row_count = term.edges[0].size() + 1;
  std::vector<std::vector<Rational>> rows(row_count);
  for (size_t r = 0; r < row_count; ++r) {
    rows[r].assign(term.scores.begin() + static_cast<std::ptrdiff_t>(r * cols),
                   term.scores.begin() + static_cast<std::ptrdiff_t>((r + 1) * cols));
  }
  std::vector<float> row_edges;
  std::vector<std::vector<Rational>> merged_rows;
  MergeRuns(term.edges[0], rows, [](const auto& a, const auto& b) { return a == b; }, &row_edges, &merged_rows);

  auto row_tree = [&](size_t r) {
    std::vector<float> edges;
    std::vector<Rational> scores;
    MergeRuns(term.edges[1], merged_rows[r], [](const Rational& a, const Rational& b) { return a == b; }, &edges,
              &scores);
    auto leaf = [&scores](size_t bin) { return Tree::Leaf(scores[bin]); };
    return BuildBinTree(term.features[1], edges, 0, scores.size() - 1, leaf);
  };
  return BuildBinTree(term.features[0], row_edges, 0, merged_rows.size() - 1, row_tree);
}

}  // namespace

Ensemble CompileAdditive(const AdditiveModel& model) {
  model.Validate();
  Ensemble out;
  out.space = model.space;
  out.base_score = model.intercept;
  out.trees.reserve(model.univariate.size() + model.pairwise.size());
  for (const UnivariateTerm& term : model.univariate) out.trees.push_back(CompileUnivariate(term));
  for (const PairwiseTerm& term : model.pairwise) out.trees.push_back(CompilePairwise(term));
  return out;
}

}  // namespace treeverify
