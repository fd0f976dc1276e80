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

// Complete decision procedure for tree-ensemble specifications.
//
// Existential queries are decided by branch and bound over the split
// thresholds: a box is pruned when the logit bounds exclude the target,
// accepted when they force it, and otherwise split at a threshold that
// straddles it. Thresholds are finite, so the search terminates with either a
// proof or a cell of violating points.

#ifndef TREEVERIFY_VERIFIER_VERIFIER_HPP_
#define TREEVERIFY_VERIFIER_VERIFIER_HPP_

#include <chrono>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "treeverify/core/errors.hpp"
#include "treeverify/core/model.hpp"
#include "treeverify/spec/spec.hpp"

namespace treeverify::verifier {

enum class Status { kProven, kViolated, kInconclusive };

std::string_view StatusName(Status status);

struct Limits {
  uint64_t max_nodes = 10'000'000;
  std::chrono::milliseconds timeout{300'000};
  // Worker threads sharing the search. 1 gives the deterministic
  // depth-first, left-first order.
  unsigned workers = 1;
};

struct SearchStats {
  uint64_t nodes_explored = 0;
  uint32_t max_depth = 0;
  std::chrono::microseconds elapsed{0};
  // Query intervals holding no binary32 value (the region is point-free).
  uint64_t binary32_empty_intervals = 0;
};

// A violating input, or for monotonicity the ordered pair `point` <= `paired`
// in the monotone feature (all other coordinates equal).
struct Counterexample {
  std::vector<float> point;
  Rational logit;
  double probability = 0.0;
  std::optional<std::vector<float>> paired_point;
  std::optional<Rational> paired_logit;
  std::optional<double> paired_probability;
};

struct Verdict {
  Status status = Status::kProven;
  std::optional<Counterexample> witness;
  SearchStats stats;
  std::vector<std::string> notes;
};

class ResourceExhausted : public Error {
 public:
  ResourceExhausted(const std::string& message, SearchStats stats)
      : Error(ErrorCode::kResourceExhausted, message), stats_(stats) {}
  const SearchStats& stats() const { return stats_; }

 private:
  SearchStats stats_;
};

// Proven iff no binary32 point of the constraint box satisfies the target.
// Throws ResourceExhausted when a limit is hit first.
Verdict DecideExistential(const Ensemble& model, const spec::ExistentialQuery& query, const Limits& limits = {});

// A binary32 point inside every interval of `cell`: the midpoint rounded to
// binary32, moved to the nearest member when rounding leaves the interval.
// Throws kDegenerateInterval for an interval with no binary32 member.
std::vector<float> ExtractWitness(const Box& cell);

Verdict CheckThresholdSpec(const Ensemble& model, const spec::ThresholdImplication& spec, const Limits& limits = {});

struct TreeMonotonicityViolation {
  size_t tree = 0;
  size_t lower_leaf = 0;  // node id reached by the smaller feature value
  size_t upper_leaf = 0;
  Rational lower_weight;
  Rational upper_weight;
  size_t offending_pairs = 0;
};

struct PerTreeResult {
  Verdict verdict;  // kProven or kInconclusive, never kViolated
  std::vector<TreeMonotonicityViolation> offending;
  size_t trees_checked = 0;
};

// Sufficient check: every tree monotone implies the sum is. A non-monotone
// tree leaves the question open.
PerTreeResult CheckMonotonePerTree(const Ensemble& model, const std::string& feature, spec::Direction direction);

// Complete two-point check over shared coordinates plus both values of the
// monotone feature.
Verdict CheckMonotoneDirect(const Ensemble& model, const std::string& feature, spec::Direction direction,
                            const Limits& limits = {});

struct SuiteEntry {
  std::string id;
  std::optional<spec::Specification> spec;
  std::optional<Verdict> verdict;
  std::optional<PerTreeResult> per_tree;
  std::optional<Error> error;  // ResourceExhausted is reported here too
  std::optional<SearchStats> exhausted_stats;

  // "proven", "violated", "inconclusive", "exhausted" or "error".
  std::string StatusLabel() const;
};

// Runs every entry in order. Monotonicity goes per-tree first and falls back
// to the direct check when that is inconclusive. Errors stay on their entry.
std::vector<SuiteEntry> VerifySuite(const Ensemble& model, const std::vector<spec::SpecEntry>& specs,
                                    const Limits& limits = {});
std::vector<SuiteEntry> VerifySuite(const Ensemble& model, const std::vector<spec::Specification>& specs,
                                    const Limits& limits = {});

}  // namespace treeverify::verifier

#endif  // TREEVERIFY_VERIFIER_VERIFIER_HPP_
