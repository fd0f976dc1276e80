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

#include "treeverify/verifier/verifier.hpp"

#include <algorithm>
#include <cmath>

#include "treeverify/verifier/search.hpp"
#include "treeverify/verifier/slot_model.hpp"

namespace treeverify::verifier {
namespace {

using internal::SearchProblem;
using internal::SlotModel;
using internal::SlotRange;

Counterexample MakeCounterexample(std::vector<float> point, Rational logit) {
  Counterexample c;
  c.probability = LogisticProbability(logit);
  c.point = std::move(point);
  c.logit = std::move(logit);
  return c;
}

std::vector<float> PointInCell(const SlotModel& slots, const std::vector<SlotRange>& ranges, const Box& clip) {
  Box cell;
  cell.intervals.reserve(clip.size());
  for (size_t f = 0; f < clip.size(); ++f) {
    cell.intervals.push_back(slots.SlotInterval(f, ranges[f], clip.intervals[f]));
  }
  return ExtractWitness(cell);
}

[[noreturn]] void ThrowExhausted(const internal::SearchOutcome& outcome) {
  throw ResourceExhausted("search limit exceeded: " + outcome.exhausted_reason, outcome.stats);
}

}  // namespace

std::string_view StatusName(Status status) {
  switch (status) {
    case Status::kProven: return "proven";
    case Status::kViolated: return "violated";
    case Status::kInconclusive: return "inconclusive";
  }
  return "unknown";
}

std::vector<float> ExtractWitness(const Box& cell) {
  std::vector<float> point;
  point.reserve(cell.size());
  for (size_t i = 0; i < cell.size(); ++i) {
    const Interval& interval = cell.intervals[i];
    const auto extent = interval.Binary32Extent();
    if (!extent) {
      throw Error(ErrorCode::kDegenerateInterval,
                  "interval " + std::to_string(i) + " holds no binary32 value");
    }
    float value = extent->first;
    if (std::isfinite(interval.lo) && std::isfinite(interval.hi)) {
      const Rational mid = (FromBinary32(interval.lo) + FromBinary32(interval.hi)) / 2;
      value = RationalToBinary32(mid);
    }
    value = std::clamp(value, extent->first, extent->second);
    point.push_back(value);
  }
  return point;
}

Verdict DecideExistential(const Ensemble& model, const spec::ExistentialQuery& query, const Limits& limits) {
  Verdict verdict;
  if (query.Vacuous()) {
    verdict.notes.push_back("premise region is empty; holds vacuously");
    return verdict;
  }
  const Box& box = *query.constraint_box;
  if (box.size() != model.space.size()) throw Error(ErrorCode::kInvalidArgument, "query box dimension mismatch");
  SlotModel slots(model);
  SearchProblem problem;
  problem.slots = &slots;
  for (size_t f = 0; f < box.size(); ++f) {
    auto range = slots.RangeOf(f, box.intervals[f]);
    if (!range) {
      verdict.stats.binary32_empty_intervals++;
      verdict.notes.push_back("interval of '" + model.space[f].name + "' holds no binary32 value; holds vacuously");
      return verdict;
    }
    problem.initial.push_back(*range);
  }
  problem.trees.resize(model.trees.size());
  for (size_t t = 0; t < model.trees.size(); ++t) problem.trees[t] = t;
  problem.base = model.base_score;
  if (query.target.op == spec::CompareOp::kGreater) {
    problem.sign = 1;
    problem.strict = true;
    problem.target = query.target.constant;
  } else {
    // logit <= c  <=>  -logit >= -c
    problem.sign = -1;
    problem.strict = false;
    problem.target = -query.target.constant;
  }

  const auto outcome = internal::RunSearch(problem, limits);
  if (outcome.exhausted) ThrowExhausted(outcome);
  verdict.stats = outcome.stats;
  if (!outcome.violating_cell) return verdict;

  std::vector<float> point = PointInCell(slots, *outcome.violating_cell, box);
  Rational logit = EvaluateExact(model, point);
  if (!box.Contains(point) || !query.target.Holds(logit)) {
    throw Error(ErrorCode::kInternal, "extracted witness failed re-validation");
  }
  verdict.status = Status::kViolated;
  verdict.witness = MakeCounterexample(std::move(point), std::move(logit));
  return verdict;
}

Verdict CheckThresholdSpec(const Ensemble& model, const spec::ThresholdImplication& spec, const Limits& limits) {
  Verdict verdict = DecideExistential(model, spec::Negate(spec, model.space), limits);
  if (verdict.witness) {
    // Independent check against the premise as written.
    for (const spec::Atom& atom : spec.premise) {
      const size_t f = model.space.Require(atom.feature);
      if (!atom.HoldsExact(FromBinary32(verdict.witness->point[f]))) {
        throw Error(ErrorCode::kInternal, "witness violates premise atom " + atom.ToString());
      }
    }
    if (spec.conclusion.Holds(verdict.witness->logit)) {
      throw Error(ErrorCode::kInternal, "witness satisfies the conclusion it should refute");
    }
  }
  return verdict;
}

PerTreeResult CheckMonotonePerTree(const Ensemble& model, const std::string& feature, spec::Direction direction) {
  const auto start = std::chrono::steady_clock::now();
  const size_t j = model.space.Require(feature);
  const bool order_le = direction == spec::Direction::kNonDecreasing;
  SlotModel slots(model);
  const size_t d = model.space.size();
  const Box domain = Box::FromSpace(model.space);
  std::vector<SlotRange> domain_ranges(d);
  for (size_t f = 0; f < d; ++f) domain_ranges[f] = *slots.RangeOf(f, domain.intervals[f]);

  PerTreeResult result;
  uint64_t pairs_checked = 0;
  std::vector<std::vector<SlotRange>> boxes;
  std::vector<size_t> leaf_ids;
  for (size_t t = 0; t < model.trees.size(); ++t) {
    const internal::SlotTree& tree = slots.trees()[t];
    ++result.trees_checked;
    if (!tree.uses_feature[j]) continue;
    boxes.clear();
    leaf_ids.clear();
    for (size_t l = 0; l < tree.leaf_box.size(); ++l) {
      std::vector<SlotRange> box = tree.leaf_box[l];
      bool empty = false;
      for (size_t f = 0; f < d; ++f) {
        box[f].lo = std::max(box[f].lo, domain_ranges[f].lo);
        box[f].hi = std::min(box[f].hi, domain_ranges[f].hi);
        empty = empty || box[f].Empty();
      }
      if (empty) continue;
      boxes.push_back(std::move(box));
      leaf_ids.push_back(l);
    }
    std::optional<TreeMonotonicityViolation> first;
    size_t offending = 0;
    // Leaf a holds the x side, b the x' side. Non-increasing negates the
    // ordering: x >= x'. Either way a violation is w(a) > w(b).
    for (size_t a = 0; a < boxes.size(); ++a) {
      const Rational& wa = model.trees[t].node(static_cast<size_t>(tree.leaf_node[leaf_ids[a]])).weight;
      for (size_t b = 0; b < boxes.size(); ++b) {
        if (a == b) continue;
        ++pairs_checked;
        const auto& ba = boxes[a];
        const auto& bb = boxes[b];
        if (order_le ? ba[j].lo > bb[j].hi : ba[j].hi < bb[j].lo) continue;
        bool overlap = true;
        for (size_t f = 0; f < d && overlap; ++f) {
          if (f != j) overlap = std::max(ba[f].lo, bb[f].lo) <= std::min(ba[f].hi, bb[f].hi);
        }
        if (!overlap) continue;
        const Rational& wb = model.trees[t].node(static_cast<size_t>(tree.leaf_node[leaf_ids[b]])).weight;
        if (!(wa > wb)) continue;
        ++offending;
        if (!first) {
          const size_t na = static_cast<size_t>(tree.leaf_node[leaf_ids[a]]);
          const size_t nb = static_cast<size_t>(tree.leaf_node[leaf_ids[b]]);
          first = order_le ? TreeMonotonicityViolation{t, na, nb, wa, wb, 0}
                           : TreeMonotonicityViolation{t, nb, na, wb, wa, 0};
        }
      }
    }
    if (first) {
      first->offending_pairs = offending;
      result.offending.push_back(std::move(*first));
    }
  }
  result.verdict.status = result.offending.empty() ? Status::kProven : Status::kInconclusive;
  result.verdict.stats.nodes_explored = pairs_checked;
  result.verdict.stats.elapsed =
      std::chrono::duration_cast<std::chrono::microseconds>(std::chrono::steady_clock::now() - start);
  if (!result.offending.empty()) {
    result.verdict.notes.push_back(std::to_string(result.offending.size()) +
                                   " tree(s) not monotone on their own; this does not refute the ensemble");
  }
  return result;
}

Verdict CheckMonotoneDirect(const Ensemble& model, const std::string& feature, spec::Direction direction,
                            const Limits& limits) {
  const size_t j = model.space.Require(feature);
  const size_t d = model.space.size();
  const bool order_le = direction == spec::Direction::kNonDecreasing;
  SlotModel slots(model);
  const Box domain = Box::FromSpace(model.space);

  SearchProblem problem;
  problem.slots = &slots;
  problem.pair_mode = true;
  problem.pair_feature = j;
  problem.order_le = order_le;
  problem.sign = 1;
  problem.base = 0;
  problem.target = 0;
  problem.strict = true;
  // Trees that never test the feature agree on both points and cancel.
  for (size_t t = 0; t < model.trees.size(); ++t) {
    if (slots.trees()[t].uses_feature[j]) problem.trees.push_back(t);
  }
  for (size_t f = 0; f < d; ++f) problem.initial.push_back(*slots.RangeOf(f, domain.intervals[f]));
  problem.initial.push_back(problem.initial[j]);

  Verdict verdict;
  if (problem.trees.empty()) {
    verdict.notes.push_back("no tree tests '" + feature + "'; the logit does not depend on it");
    return verdict;
  }
  const auto outcome = internal::RunSearch(problem, limits);
  if (outcome.exhausted) ThrowExhausted(outcome);
  verdict.stats = outcome.stats;
  if (!outcome.violating_cell) return verdict;

  // x from the extreme slot of its range on the violating side, x' likewise.
  const auto& cell = *outcome.violating_cell;
  std::vector<SlotRange> x_ranges(cell.begin(), cell.begin() + static_cast<std::ptrdiff_t>(d));
  std::vector<SlotRange> x2_ranges = x_ranges;
  x_ranges[j] = order_le ? SlotRange{cell[j].lo, cell[j].lo} : SlotRange{cell[j].hi, cell[j].hi};
  x2_ranges[j] = order_le ? SlotRange{cell[d].hi, cell[d].hi} : SlotRange{cell[d].lo, cell[d].lo};
  std::vector<float> x = PointInCell(slots, x_ranges, domain);
  std::vector<float> x2 = PointInCell(slots, x2_ranges, domain);
  for (size_t f = 0; f < d; ++f) {
    if (f != j) x2[f] = x[f];
  }
  if (order_le ? x[j] > x2[j] : x[j] < x2[j]) x2[j] = x[j];
  Rational fx = EvaluateExact(model, x);
  Rational fx2 = EvaluateExact(model, x2);
  if (!(fx > fx2)) throw Error(ErrorCode::kInternal, "monotonicity witness failed re-validation");

  // Report the smaller feature value first.
  verdict.status = Status::kViolated;
  if (order_le) {
    verdict.witness = MakeCounterexample(std::move(x), std::move(fx));
    verdict.witness->paired_probability = LogisticProbability(fx2);
    verdict.witness->paired_point = std::move(x2);
    verdict.witness->paired_logit = std::move(fx2);
  } else {
    verdict.witness = MakeCounterexample(std::move(x2), std::move(fx2));
    verdict.witness->paired_probability = LogisticProbability(fx);
    verdict.witness->paired_point = std::move(x);
    verdict.witness->paired_logit = std::move(fx);
  }
  return verdict;
}

std::string SuiteEntry::StatusLabel() const {
  if (error) return error->code() == ErrorCode::kResourceExhausted ? "exhausted" : "error";
  if (verdict) return std::string(StatusName(verdict->status));
  return "error";
}

std::vector<SuiteEntry> VerifySuite(const Ensemble& model, const std::vector<spec::SpecEntry>& specs,
                                    const Limits& limits) {
  std::vector<SuiteEntry> out;
  out.reserve(specs.size());
  for (const spec::SpecEntry& entry : specs) {
    SuiteEntry result;
    result.id = entry.id;
    result.spec = entry.spec;
    if (entry.error) {
      result.error = entry.error;
      out.push_back(std::move(result));
      continue;
    }
    try {
      spec::ValidateSpec(*entry.spec, model.space);
      if (const auto* implication = std::get_if<spec::ThresholdImplication>(&entry.spec->body)) {
        result.verdict = CheckThresholdSpec(model, *implication, limits);
      } else {
        const auto& mono = std::get<spec::Monotonicity>(entry.spec->body);
        result.per_tree = CheckMonotonePerTree(model, mono.feature, mono.direction);
        if (result.per_tree->verdict.status == Status::kProven) {
          result.verdict = result.per_tree->verdict;
          result.verdict->notes.push_back("proven tree by tree");
        } else {
          result.verdict = CheckMonotoneDirect(model, mono.feature, mono.direction, limits);
        }
      }
    } catch (const ResourceExhausted& e) {
      result.error = e;
      result.exhausted_stats = e.stats();
    } catch (const Error& e) {
      result.error = e;
    }
    out.push_back(std::move(result));
  }
  return out;
}

std::vector<SuiteEntry> VerifySuite(const Ensemble& model, const std::vector<spec::Specification>& specs,
                                    const Limits& limits) {
  std::vector<spec::SpecEntry> entries;
  entries.reserve(specs.size());
  for (const auto& s : specs) entries.push_back({s.id, s, std::nullopt});
  return VerifySuite(model, entries, limits);
}

}  // namespace treeverify::verifier
