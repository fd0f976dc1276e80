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

#include "treeverify/audit/baseline.hpp"

#include <algorithm>
#include <limits>

namespace treeverify::audit {
namespace {

using Clock = std::chrono::steady_clock;

// Grid values of one feature that behave alike: same side of every split
// threshold and same premise truth. Members are contiguous in the axis.
struct AxisClass {
  size_t first = 0;
  uint64_t count = 0;
};

std::vector<AxisClass> Classes(const std::vector<float>& axis, const std::vector<float>& cuts,
                               const std::vector<const spec::Atom*>& atoms, uint64_t* premise_points) {
  std::vector<AxisClass> classes;
  std::ptrdiff_t last_slot = -1;
  *premise_points = 0;
  for (size_t i = 0; i < axis.size(); ++i) {
    const float x = axis[i];
    if (!std::all_of(atoms.begin(), atoms.end(), [x](const spec::Atom* a) { return a->Holds(x); })) continue;
    ++*premise_points;
    const auto slot = std::upper_bound(cuts.begin(), cuts.end(), x) - cuts.begin();
    if (classes.empty() || slot != last_slot || classes.back().first + classes.back().count != i) {
      classes.push_back({i, 0});
      last_slot = slot;
    }
    classes.back().count++;
  }
  return classes;
}

size_t LeafOf(const Tree& tree, const std::vector<float>& point) {
  size_t i = 0;
  while (!tree.node(i).IsLeaf()) {
    const Tree::Node& node = tree.node(i);
    i = static_cast<size_t>(point[static_cast<size_t>(node.feature)] < node.threshold ? node.left : node.right);
  }
  return i;
}

template <typename W>
W Narrow(const mpz_class& z) {
  if constexpr (std::is_same_v<W, Rational>) {
    return Rational(z);
  } else {
    mpz_class magnitude = abs(z);
    const uint64_t low = mpz_get_ui(magnitude.get_mpz_t());
    mpz_class high_part = magnitude >> 64;
    const auto high = static_cast<unsigned __int128>(mpz_get_ui(high_part.get_mpz_t()));
    const auto value = static_cast<W>((high << 64) | low);
    return z < 0 ? static_cast<W>(-value) : value;
  }
}

// Weighted scan of the class product with leaf weights scaled by a common
// denominator, so each point costs integer additions.
template <typename W>
void Scan(const Ensemble& model, const spec::Conclusion& conclusion, const std::vector<std::vector<float>>& axes,
          const std::vector<std::vector<AxisClass>>& classes, const mpz_class& denominator, GridReport* report) {
  std::vector<std::vector<W>> weights(model.trees.size());
  for (size_t t = 0; t < model.trees.size(); ++t) {
    const Tree& tree = model.trees[t];
    weights[t].resize(tree.nodes().size());
    for (size_t i = 0; i < tree.nodes().size(); ++i) {
      if (!tree.node(i).IsLeaf()) continue;
      const Rational& w = tree.node(i).weight;
      weights[t][i] = Narrow<W>(mpz_class(w.get_num() * (denominator / w.get_den())));
    }
  }
  const Rational& base = model.base_score;
  const W scaled_base = Narrow<W>(mpz_class(base.get_num() * (denominator / base.get_den())));
  const Rational& c = conclusion.constant;
  const W scaled_c = Narrow<W>(mpz_class(c.get_num() * (denominator / c.get_den())));
  const bool at_most = conclusion.op == spec::CompareOp::kLessEqual;

  const size_t d = axes.size();
  std::vector<size_t> index(d, 0);
  std::vector<float> point(d);
  for (;;) {
    uint64_t multiplicity = 1;
    for (size_t f = 0; f < d; ++f) {
      const AxisClass& cls = classes[f][index[f]];
      point[f] = axes[f][cls.first];
      multiplicity *= cls.count;
    }
    W sum = scaled_base;
    for (size_t t = 0; t < model.trees.size(); ++t) sum += weights[t][LeafOf(model.trees[t], point)];
    const bool holds = at_most ? !(scaled_c < sum) : scaled_c < sum;
    if (!holds) {
      report->violations_found += multiplicity;
      if (!report->first_violation) report->first_violation = GridViolation{point, EvaluateExact(model, point)};
    }
    size_t f = d;
    while (f > 0) {
      --f;
      if (++index[f] < classes[f].size()) break;
      index[f] = 0;
      if (f == 0) return;
    }
  }
}

}  // namespace

std::vector<float> GridAxis(const Feature& feature, uint32_t n) {
  std::vector<float> axis(n);
  const double lo = feature.lower;
  const double step = (static_cast<double>(feature.upper) - lo) / static_cast<double>(n - 1);
  for (uint32_t i = 0; i < n; ++i) {
    axis[i] = std::clamp(static_cast<float>(lo + step * i), feature.lower, feature.upper);
  }
  axis.front() = feature.lower;
  axis.back() = feature.upper;
  return axis;
}

GridReport GridCheck(const Ensemble& model, const spec::ThresholdImplication& spec, uint32_t n) {
  if (n < 2) throw Error(ErrorCode::kInvalidArgument, "grid needs at least 2 points per feature");
  const auto start = Clock::now();
  const size_t d = model.space.size();
  GridReport report;
  report.n = n;
  report.total_points = 1;
  for (size_t f = 0; f < d; ++f) {
    if (report.total_points > std::numeric_limits<uint64_t>::max() / n) {
      throw Error(ErrorCode::kInvalidArgument, "grid too large");
    }
    report.total_points *= n;
  }

  std::vector<std::vector<float>> cuts(d);
  for (const Tree& tree : model.trees) {
    for (const Tree::Node& node : tree.nodes()) {
      if (!node.IsLeaf()) cuts[static_cast<size_t>(node.feature)].push_back(node.threshold);
    }
  }
  std::vector<std::vector<const spec::Atom*>> atoms(d);
  for (const spec::Atom& atom : spec.premise) atoms[model.space.Require(atom.feature)].push_back(&atom);

  std::vector<std::vector<float>> axes(d);
  std::vector<std::vector<AxisClass>> classes(d);
  report.premise_count = 1;
  for (size_t f = 0; f < d; ++f) {
    std::sort(cuts[f].begin(), cuts[f].end());
    cuts[f].erase(std::unique(cuts[f].begin(), cuts[f].end()), cuts[f].end());
    axes[f] = GridAxis(model.space[f], n);
    uint64_t premise_points = 0;
    classes[f] = Classes(axes[f], cuts[f], atoms[f], &premise_points);
    report.premise_count *= premise_points;
  }

  if (report.premise_count > 0) {
    mpz_class denominator = 1;
    Rational largest = abs(model.base_score) + abs(spec.conclusion.constant);
    auto absorb = [&denominator](const Rational& v) {
      mpz_lcm(denominator.get_mpz_t(), denominator.get_mpz_t(), v.get_den_mpz_t());
    };
    absorb(model.base_score);
    absorb(spec.conclusion.constant);
    for (const Tree& tree : model.trees) {
      Rational tree_max = 0;
      for (const Tree::Node& node : tree.nodes()) {
        if (!node.IsLeaf()) continue;
        absorb(node.weight);
        tree_max = std::max(tree_max, Rational(abs(node.weight)));
      }
      largest += tree_max;
    }
    const mpz_class bound = mpz_class(largest * denominator) + 1;
    const size_t bits = mpz_sizeinbase(bound.get_mpz_t(), 2);
    if (bits < 62) {
      Scan<int64_t>(model, spec.conclusion, axes, classes, denominator, &report);
    } else if (bits < 125) {
      Scan<__int128>(model, spec.conclusion, axes, classes, denominator, &report);
    } else {
      Scan<Rational>(model, spec.conclusion, axes, classes, denominator, &report);
    }
  }
  report.elapsed = std::chrono::duration_cast<std::chrono::microseconds>(Clock::now() - start);
  return report;
}

std::string SweepRow::StatusLabel() const {
  if (error) return error->code() == ErrorCode::kResourceExhausted ? "exhausted" : "error";
  return verdict ? std::string(verifier::StatusName(verdict->status)) : "error";
}

std::vector<SweepRow> ThresholdSweep(const Ensemble& model, const spec::ThresholdImplication& spec,
                                     size_t atom_index, const std::vector<Rational>& thresholds,
                                     const verifier::Limits& limits) {
  if (atom_index >= spec.premise.size()) throw Error(ErrorCode::kInvalidArgument, "sweep atom index out of range");
  model.space.Require(spec.premise[atom_index].feature);
  std::vector<SweepRow> rows;
  rows.reserve(thresholds.size());
  for (const Rational& t : thresholds) {
    SweepRow row;
    row.threshold = t;
    spec::ThresholdImplication moved = spec;
    moved.premise[atom_index] = spec::MakeAtom(spec.premise[atom_index].feature, spec.premise[atom_index].op, t);
    try {
      row.verdict = verifier::CheckThresholdSpec(model, moved, limits);
    } catch (const Error& e) {
      row.error = e;
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace treeverify::audit
